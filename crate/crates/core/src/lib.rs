//! Numerical free probability for random subspaces of tensor products.
//!
//! The crate computes the (t)-norm `‖x‖_(t) = ‖p_t x p_t‖` of a vector
//! `x ∈ ℝ^k` (with `p_t` a free projection of trace `t`), the support edges of
//! free additive convolution powers and of free multiplicative convolutions
//! of atomic measures, the limiting convex body `K_{k,t}` of Schmidt
//! coefficients of random subspaces, and a seeded random-matrix harness that
//! checks the analytic predictions at finite size.
//!
//! Modules, bottom up:
//!
//! * [`measure`]: atomic measures and their transforms (`G`, `F`, `ψ`, `ψ⁻¹`, `S`).
//! * [`convolve`]: edges, atoms, subordination and densities of `μ^{⊞s}`, the
//!   compression law of `p_t x p_t`, and edges of `μ ⊠ ν`.
//! * [`tnorm`]: the (t)-norm, its gradient and the `β^{(t)}` vector.
//! * [`geometry`]: membership in `K_{k,t}`, boundary sampling, the polytope `L_{k,t}`.
//! * [`rmt`]: Haar isometries, compressed spectra, Schmidt decompositions and
//!   Monte Carlo reports.

#[cfg(test)]
macro_rules! assert_close {
    ($a:expr, $b:expr, $tol:expr) => {{
        let (a, b): (f64, f64) = ($a, $b);
        assert!((a - b).abs() <= $tol, "{a} vs {b} (tol {:e})", $tol);
    }};
}

pub mod convolve;
pub mod error;
pub mod geometry;
pub mod measure;
mod quadrature;
pub mod rmt;
pub mod tnorm;

pub use convolve::{EdgeRegime, EdgeResult, Side};
pub use error::{Error, Result};
pub use geometry::SimplexPoint;
pub use measure::{AtomicMeasure, ComplexPoint};
pub use rmt::RngStream;
pub use tnorm::{TNormRegime, TNormResult};
