use nalgebra::DMatrix;
use num_complex::Complex64;

use super::stream::{complex_normal, RngStream};
use crate::error::{Error, Result};

const RANK_TOL: f64 = 1e-12;

/// `d × N` matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    entries: DMatrix<Complex64>,
}

impl Isometry {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Ambient dimension `d`.
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Number of columns `N`.
    pub fn rank(&self) -> usize {
        self.entries.ncols()
    }

    /// `‖V*V − I‖_max`.
    pub fn orthonormality_error(&self) -> f64 {
        let gram = self.entries.ad_mul(&self.entries);
        let mut err: f64 = 0.0;
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((gram[(i, j)] - target).norm());
            }
        }
        err
    }
}

fn draw<R: rand::Rng + ?Sized>(d: usize, cols: usize, rng: &mut R) -> Option<DMatrix<Complex64>> {
    let g = DMatrix::from_fn(d, cols, |_, _| complex_normal(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..cols {
        let rjj = r[(j, j)];
        let norm = rjj.norm();
        if norm < RANK_TOL {
            return None;
        }
        // make R's diagonal positive so that the law of Q is exactly Haar
        let phase = rjj / norm;
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    Some(q)
}

/// Haar-distributed isometry `ℂ^N → ℂ^d`.
pub fn haar_isometry(d: usize, cols: usize, stream: &RngStream) -> Result<Isometry> {
    if cols == 0 || cols > d {
        return Err(Error::InvalidRank { rank: cols, max: d });
    }
    let mut rng = stream.rng();
    for _ in 0..2 {
        if let Some(entries) = draw(d, cols, &mut rng) {
            return Ok(Isometry { entries });
        }
    }
    Err(Error::RankDeficient)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_are_orthonormal() {
        let v = haar_isometry(200, 50, &RngStream::new(1)).unwrap();
        assert_eq!((v.dim(), v.rank()), (200, 50));
        assert!(v.orthonormality_error() <= 1e-10);
    }

    #[test]
    fn square_case_is_unitary() {
        let v = haar_isometry(12, 12, &RngStream::new(2)).unwrap();
        assert!(v.orthonormality_error() <= 1e-10);
        let det = v.entries().clone().determinant();
        assert!((det.norm() - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn invalid_shapes() {
        let s = RngStream::new(0);
        assert_eq!(haar_isometry(3, 4, &s), Err(Error::InvalidRank { rank: 4, max: 3 }));
        assert_eq!(haar_isometry(3, 0, &s), Err(Error::InvalidRank { rank: 0, max: 3 }));
    }

    #[test]
    fn deterministic_in_stream() {
        let s = RngStream::derive(9, &[4]);
        assert_eq!(haar_isometry(30, 7, &s), haar_isometry(30, 7, &s));
        assert_ne!(haar_isometry(30, 7, &s), haar_isometry(30, 7, &s.child(0)));
    }

    #[test]
    fn entries_have_haar_moments() {
        // For Haar V, E|V_ij|² = 1/d and E|V_ij|⁴ = 2/(d(d+1)).
        let (d, n, trials) = (8, 3, 400);
        let (mut m2, mut m4) = (0.0, 0.0);
        for i in 0..trials {
            let v = haar_isometry(d, n, &RngStream::new(100).child(i)).unwrap();
            let x = v.entries()[(0, 0)].norm_sqr();
            m2 += x;
            m4 += x * x;
        }
        m2 /= trials as f64;
        m4 /= trials as f64;
        let (e2, e4) = (1.0 / d as f64, 2.0 / (d * (d + 1)) as f64);
        assert!((m2 - e2).abs() <= 3.0 * (e4 - e2 * e2).sqrt() / (trials as f64).sqrt(), "{m2}");
        assert!((m4 - e4).abs() <= 0.5 * e4, "{m4}");
    }

    #[test]
    fn diagonal_phase_is_uniform() {
        // Without the phase correction the first diagonal entry of Q would be
        // biased towards the negative reals (Householder convention).
        let trials = 2000;
        let mean: Complex64 = (0..trials)
            .map(|i| {
                let v = haar_isometry(4, 4, &RngStream::new(3).child(i)).unwrap();
                v.entries()[(0, 0)]
            })
            .sum::<Complex64>()
            / trials as f64;
        assert!(mean.norm() <= 0.05, "{mean}");
    }
}
