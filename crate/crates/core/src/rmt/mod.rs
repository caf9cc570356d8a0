//! Seeded random-matrix experiments on `ℂ^k ⊗ ℂ^n`.

mod haar;
mod schmidt;
mod sim;
mod spectrum;
mod stream;

pub use haar::{haar_isometry, Isometry};
pub use schmidt::{schmidt, SchmidtDecomposition};
pub use sim::{
    default_rank, eigenvector_statistics, product_norm_sim, sample_kcloud, Aggregates, Prediction, ProductSimReport,
    SimConfig, SimReport, TrialRecord,
};
pub use spectrum::{compressed_spectrum, compressed_spectrum_with, reduced_eigenvalues, subspace_dim, CompressedSpectrum};
pub use stream::{complex_normal, RngStream};
