use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::SimplexPoint;

/// `x = Σ √λ_i e_i ⊗ f_i` with `λ` non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    pub lambda: SimplexPoint,
    pub left_vectors: Vec<DVector<Complex64>>,
    pub right_vectors: Vec<DVector<Complex64>>,
}

impl SchmidtDecomposition {
    /// `Σ √λ_i e_i ⊗ f_i` in row-major (`k` major, `n` minor) order.
    pub fn reconstruct(&self) -> DVector<Complex64> {
        let k = self.left_vectors.first().map_or(0, |e| e.len());
        let n = self.right_vectors.first().map_or(0, |f| f.len());
        let mut x = DVector::zeros(k * n);
        for ((l, e), f) in self.lambda.coords().iter().zip(&self.left_vectors).zip(&self.right_vectors) {
            let s = l.sqrt();
            for i in 0..k {
                for j in 0..n {
                    x[i * n + j] += e[i] * f[j] * s;
                }
            }
        }
        x
    }
}

/// Schmidt decomposition of `x ∈ ℂ^k ⊗ ℂ^n`, with `x[i·n + j]` the
/// coefficient of `e_i ⊗ f_j`. The coefficients are those of `x/‖x‖`.
pub fn schmidt(x: &DVector<Complex64>, k: usize, n: usize) -> Result<SchmidtDecomposition> {
    if k == 0 || n == 0 || x.len() != k * n {
        return Err(Error::DimensionMismatch {
            expected: k * n,
            got: x.len(),
        });
    }
    let m = DMatrix::from_fn(k, n, |i, j| x[i * n + j]);
    let svd = m.svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));

    let mut weights: Vec<f64> = order.iter().map(|&i| svd.singular_values[i].powi(2)).collect();
    weights.resize(k, 0.0);
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidArgument("zero vector has no Schmidt decomposition".into()));
    }
    weights.iter_mut().for_each(|w| *w /= total);
    let lambda = SimplexPoint::new(weights)?;
    let left_vectors = order.iter().map(|&i| u.column(i).into_owned()).collect();
    let right_vectors = order
        .iter()
        .map(|&i| v_t.row(i).transpose())
        .collect();
    Ok(SchmidtDecomposition {
        lambda,
        left_vectors,
        right_vectors,
    })
}
