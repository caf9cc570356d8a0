use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

use super::haar::{haar_isometry, Isometry};
use super::stream::RngStream;
use crate::error::{Error, Result};

/// Selected eigenpairs of `P(A ⊗ I_n)P` on the range of `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedSpectrum {
    pub ranks: Vec<usize>,
    pub eigenvalues: Vec<f64>,
    /// Unit eigenvectors in the ambient space `ℂ^{kn}`.
    pub eigenvectors: Vec<DVector<Complex64>>,
}

/// Subspace dimension `round(t · n · k)`.
pub fn subspace_dim(k: usize, n: usize, t: f64) -> Result<usize> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidT(t));
    }
    let cols = (t * (n * k) as f64).round() as usize;
    if cols == 0 {
        return Err(Error::InvalidT(t));
    }
    Ok(cols)
}

/// Draws `P` as the range of a Haar isometry and returns the requested
/// eigenpairs, ranks counted from the largest eigenvalue.
pub fn compressed_spectrum(a: &[f64], n: usize, t: f64, ranks: &[usize], stream: &RngStream) -> Result<CompressedSpectrum> {
    if a.is_empty() {
        return Err(Error::EmptyVector);
    }
    let cols = subspace_dim(a.len(), n, t)?;
    let v = haar_isometry(a.len() * n, cols, stream)?;
    compressed_spectrum_with(&v, a, n, ranks)
}

/// Same as [`compressed_spectrum`] for a given isometry `V`, working with the
/// `N × N` matrix `V*(A ⊗ I)V`.
pub fn compressed_spectrum_with(v: &Isometry, a: &[f64], n: usize, ranks: &[usize]) -> Result<CompressedSpectrum> {
    let d = a.len() * n;
    if v.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: v.dim(),
        });
    }
    let cols = v.rank();
    if let Some(&bad) = ranks.iter().find(|&&r| r == 0 || r > cols) {
        return Err(Error::InvalidRank { rank: bad, max: cols });
    }
    let vm = v.entries();
    let mut dv = vm.clone();
    for (row, mut r) in dv.row_iter_mut().enumerate() {
        r *= Complex64::from(a[row / n]);
    }
    let mut b = vm.ad_mul(&dv);
    // symmetrize away rounding so the eigensolver sees an exactly Hermitian matrix
    let bt = b.adjoint();
    b += bt;
    b *= Complex64::from(0.5);

    let eig = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut eigenvalues = Vec::with_capacity(ranks.len());
    let mut eigenvectors = Vec::with_capacity(ranks.len());
    for &r in ranks {
        let idx = order[r - 1];
        eigenvalues.push(eig.eigenvalues[idx]);
        let mut x = vm * eig.eigenvectors.column(idx);
        let norm = x.norm();
        x /= Complex64::from(norm);
        eigenvectors.push(x);
    }
    Ok(CompressedSpectrum {
        ranks: ranks.to_vec(),
        eigenvalues,
        eigenvectors,
    })
}

/// All eigenvalues of `V*(A ⊗ I)V`, descending.
pub fn reduced_eigenvalues(v: &Isometry, a: &[f64], n: usize) -> Result<Vec<f64>> {
    let ranks: Vec<usize> = (1..=v.rank()).collect();
    Ok(compressed_spectrum_with(v, a, n, &ranks)?.eigenvalues)
}
