use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::haar::{haar_isometry, Isometry};
use super::schmidt::schmidt;
use super::spectrum::{compressed_spectrum_with, subspace_dim};
use super::stream::{complex_normal, RngStream};
use crate::error::{Error, Result};
use crate::geometry::SimplexPoint;
use crate::measure::AtomicMeasure;
use crate::tnorm::{grad_tnorm, tnorm};

/// `⌊√n⌋`, a rank growing like `o(n)`.
pub fn default_rank(n: usize) -> usize {
    ((n as f64).sqrt().floor() as usize).max(1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub k: usize,
    pub n: usize,
    pub t: f64,
    pub a: Vec<f64>,
    pub rank: usize,
    pub trials: usize,
    pub subspace_dim: usize,
    pub seed: u64,
    pub path: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub top_eigenvalue: f64,
    pub rank_eigenvalue: f64,
    /// Schmidt coefficients of the eigenvector of the requested rank.
    pub schmidt_lambda: Vec<f64>,
    /// `overlap[i][j] = |⟨e_i, ê_j⟩|` between Schmidt left vectors and the
    /// standard basis, which diagonalizes `diag(a)` in decreasing order.
    pub overlap: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub mean_top_eigenvalue: f64,
    pub stderr_top_eigenvalue: f64,
    pub mean_rank_eigenvalue: f64,
    pub stderr_rank_eigenvalue: f64,
    pub mean_lambda: Vec<f64>,
    pub stderr_lambda: Vec<f64>,
    pub mean_overlap: Vec<Vec<f64>>,
    pub mean_diagonal_overlap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub tnorm: f64,
    /// Exposed point of `K_{k,t}` in direction `a`; absent when the norm is
    /// attained at an atom.
    pub lambda: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub config: SimConfig,
    pub trials: Vec<TrialRecord>,
    pub aggregates: Aggregates,
    pub prediction: Prediction,
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

impl Aggregates {
    pub fn from_records(records: &[TrialRecord]) -> Self {
        let column = |f: &dyn Fn(&TrialRecord) -> f64| mean_stderr(&records.iter().map(f).collect::<Vec<_>>());
        let (mean_top_eigenvalue, stderr_top_eigenvalue) = column(&|r| r.top_eigenvalue);
        let (mean_rank_eigenvalue, stderr_rank_eigenvalue) = column(&|r| r.rank_eigenvalue);
        let k = records.first().map_or(0, |r| r.schmidt_lambda.len());
        let (mean_lambda, stderr_lambda) = (0..k).map(|i| column(&|r| r.schmidt_lambda[i])).unzip();
        let mean_overlap: Vec<Vec<f64>> = (0..k)
            .map(|i| (0..k).map(|j| column(&|r| r.overlap[i][j]).0).collect())
            .collect();
        let mean_diagonal_overlap = (0..k).map(|i| mean_overlap[i][i]).sum::<f64>() / k.max(1) as f64;
        Aggregates {
            mean_top_eigenvalue,
            stderr_top_eigenvalue,
            mean_rank_eigenvalue,
            stderr_rank_eigenvalue,
            mean_lambda,
            stderr_lambda,
            mean_overlap,
            mean_diagonal_overlap,
        }
    }
}

/// Limits of the top eigenvalue and of the Schmidt vector of its eigenvector.
fn predict(a: &[f64], t: f64) -> Result<Prediction> {
    // shifting to a ≥ 0 makes the upper edge the one that carries the norm
    let m = a.iter().copied().fold(f64::INFINITY, f64::min);
    let shifted: Vec<f64> = a.iter().map(|x| x - m).collect();
    let value = tnorm(&shifted, t)?.value + m;
    let lambda = match grad_tnorm(&shifted, t) {
        Ok(g) => Some(g),
        Err(Error::NonSmooth { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(Prediction { tnorm: value, lambda })
}

/// Schmidt statistics of the eigenvector of the `rank`-th largest eigenvalue
/// of `P(diag(a) ⊗ I_n)P` over independent Haar draws of `P`.
pub fn eigenvector_statistics(
    a: &[f64],
    n: usize,
    t: f64,
    rank: usize,
    trials: usize,
    stream: &RngStream,
) -> Result<SimReport> {
    let k = a.len();
    if k < 2 || a.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::DegenerateDirection);
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let cols = subspace_dim(k, n, t)?;
    if rank == 0 || rank > cols {
        return Err(Error::InvalidRank { rank, max: cols });
    }
    let prediction = predict(a, t)?;

    let records = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let v = haar_isometry(k * n, cols, &stream.child(trial as u64))?;
            let spec = compressed_spectrum_with(&v, a, n, &[1, rank])?;
            let sd = schmidt(&spec.eigenvectors[1], k, n)?;
            let overlap = (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| sd.left_vectors.get(i).map_or(0.0, |e| e[j].norm()))
                        .collect()
                })
                .collect();
            Ok(TrialRecord {
                trial,
                top_eigenvalue: spec.eigenvalues[0],
                rank_eigenvalue: spec.eigenvalues[1],
                schmidt_lambda: sd.lambda.into_coords(),
                overlap,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SimReport {
        config: SimConfig {
            k,
            n,
            t,
            a: a.to_vec(),
            rank,
            trials,
            subspace_dim: cols,
            seed: stream.seed(),
            path: stream.path().to_vec(),
        },
        aggregates: Aggregates::from_records(&records),
        trials: records,
        prediction,
    })
}

/// Schmidt coefficients of `m` random unit vectors of the range of `V`.
pub fn sample_kcloud(v: &Isometry, k: usize, n: usize, m: usize, stream: &RngStream) -> Result<Vec<SimplexPoint>> {
    if v.dim() != k * n {
        return Err(Error::DimensionMismatch {
            expected: k * n,
            got: v.dim(),
        });
    }
    (0..m)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream.child(i as u64).rng();
            let c = DVector::from_fn(v.rank(), |_, _| complex_normal(&mut rng));
            let mut x = v.entries() * c;
            let norm = x.norm();
            x /= Complex64::from(norm);
            Ok(schmidt(&x, k, n)?.lambda)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductSimReport {
    pub d: usize,
    pub trials: usize,
    pub mean: f64,
    pub stderr: f64,
    pub samples: Vec<f64>,
}

/// Diagonal of a `d × d` matrix whose empirical law is `mu`.
fn diagonal_of(mu: &AtomicMeasure, d: usize) -> Result<Vec<f64>> {
    if mu.x_min() < 0.0 {
        return Err(Error::NonPositiveSupport);
    }
    let mut diag = Vec::with_capacity(d);
    for atom in mu.atoms() {
        let exact = atom.weight * d as f64;
        let count = exact.round();
        if (exact - count).abs() > 1e-9 {
            return Err(Error::DimensionNotDivisible { weight: atom.weight, d });
        }
        diag.extend(std::iter::repeat_n(atom.location, count as usize));
    }
    if diag.len() != d {
        return Err(Error::DimensionNotDivisible {
            weight: mu.atoms()[0].weight,
            d,
        });
    }
    Ok(diag)
}

/// Operator norm of `A U B U*` for `A`, `B` diagonal with laws `μ_a`, `μ_b`
/// and `U` Haar unitary on `ℂ^d`.
///
/// Only the columns of `U` meeting the support of `B` are drawn and only the
/// rows meeting the support of `A` are used: the top eigenvalue of
/// `A^{1/2} U B U* A^{1/2}` is that of its restriction to those blocks.
pub fn product_norm_sim(
    mu_a: &AtomicMeasure,
    mu_b: &AtomicMeasure,
    d: usize,
    trials: usize,
    stream: &RngStream,
) -> Result<ProductSimReport> {
    if trials == 0 || d == 0 {
        return Err(Error::InvalidArgument("trials and dimension must be positive".into()));
    }
    let a: Vec<f64> = diagonal_of(mu_a, d)?.into_iter().filter(|&x| x > 0.0).collect();
    let b: Vec<f64> = diagonal_of(mu_b, d)?.into_iter().filter(|&x| x > 0.0).collect();
    let samples = (0..trials)
        .into_par_iter()
        .map(|trial| {
            if a.is_empty() || b.is_empty() {
                return Ok(0.0);
            }
            let v = haar_isometry(d, b.len(), &stream.child(trial as u64))?;
            let rows = v.entries().rows(0, a.len());
            let left = DMatrix::from_fn(a.len(), b.len(), |i, j| rows[(i, j)] * a[i].sqrt());
            let mut scaled = left.clone();
            for (j, mut col) in scaled.column_iter_mut().enumerate() {
                col *= Complex64::from(b[j]);
            }
            let mut m = scaled * left.adjoint();
            let mt = m.adjoint();
            m += mt;
            m *= Complex64::from(0.5);
            let eig = SymmetricEigen::new(m);
            Ok(eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?;
    let (mean, stderr) = mean_stderr(&samples);
    Ok(ProductSimReport {
        d,
        trials,
        mean,
        stderr,
        samples,
    })
}
