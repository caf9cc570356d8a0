//! Purely atomic probability measures on the real line and their analytic
//! transforms.
//!
//! For `μ = Σ wᵢ δ_{xᵢ}` the transforms are finite sums:
//!
//! * Cauchy transform `G(z) = Σ wᵢ / (z − xᵢ)` and its reciprocal `F = 1/G`,
//! * moment generating function `ψ(z) = Σ wᵢ z xᵢ / (1 − z xᵢ)` (for `μ` on `[0, ∞)`),
//! * its inverse `ψ⁻¹` on `(μ({0}) − 1, ∞)` and the S-transform `S(z) = (1+z)/z · ψ⁻¹(z)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Evaluation point of the complex transforms.
pub type ComplexPoint = Complex64;

/// Default tolerance used to merge nearly coincident atoms.
pub const DEFAULT_MERGE_TOL: f64 = 1e-12;

const WEIGHT_SUM_TOL: f64 = 1e-12;
const POLE_TOL: f64 = 1e-14;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// A compactly supported, purely atomic probability measure.
///
/// Locations are strictly increasing and weights are positive and sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
}

/// Exact summary statistics of an atomic measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub x_min: f64,
    pub x_max: f64,
    /// Mass of the atom at `x_max`.
    pub top_weight: f64,
}

/// `F = 1/G` and its first two derivatives at a real point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reciprocal {
    pub value: f64,
    pub first: f64,
    pub second: f64,
}

impl AtomicMeasure {
    /// Builds a measure from `(location, weight)` pairs, merging locations
    /// closer than `merge_tol`.
    pub fn new(pairs: &[(f64, f64)], merge_tol: f64) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        if !(merge_tol >= 0.0) {
            return Err(Error::InvalidArgument(format!("merge tolerance {merge_tol}")));
        }
        for &(x, w) in pairs {
            if !x.is_finite() {
                return Err(Error::InvalidMeasure(format!("non-finite location {x}")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidMeasure(format!("non-positive weight {w}")));
            }
        }
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}")));
        }

        let mut sorted = pairs.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));

        // Merge chains of neighbours closer than merge_tol into one atom at
        // their weighted mean.
        let mut atoms: Vec<Atom> = Vec::with_capacity(sorted.len());
        let mut moment = 0.0;
        let mut last = f64::NEG_INFINITY;
        for (x, w) in sorted {
            match atoms.last_mut() {
                Some(atom) if x - last <= merge_tol => {
                    atom.weight += w;
                    moment += w * x;
                    atom.location = moment / atom.weight;
                }
                _ => {
                    atoms.push(Atom { location: x, weight: w });
                    moment = w * x;
                }
            }
            last = x;
        }
        Ok(Self { atoms })
    }

    /// Empirical eigenvalue distribution `k⁻¹ Σ δ_{xᵢ}` of a vector.
    pub fn from_vector(x: &[f64], merge_tol: f64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::EmptyVector);
        }
        let w = 1.0 / x.len() as f64;
        let pairs: Vec<(f64, f64)> = x.iter().map(|&xi| (xi, w)).collect();
        Self::new(&pairs, merge_tol)
    }

    /// The point mass `δ_c`.
    pub fn dirac(c: f64) -> Self {
        Self {
            atoms: vec![Atom { location: c, weight: 1.0 }],
        }
    }

    /// `(1 − t) δ₀ + t δ₁`, the law of a projection of trace `t`.
    pub fn bernoulli(t: f64) -> Result<Self> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::InvalidT(t));
        }
        if t == 1.0 {
            return Ok(Self::dirac(1.0));
        }
        Ok(Self {
            atoms: vec![
                Atom { location: 0.0, weight: 1.0 - t },
                Atom { location: 1.0, weight: t },
            ],
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn x_min(&self) -> f64 {
        self.atoms[0].location
    }

    pub fn x_max(&self) -> f64 {
        self.atoms[self.atoms.len() - 1].location
    }

    /// Mass carried by the atom at `x`, zero if there is none.
    pub fn mass_at(&self, x: f64) -> f64 {
        self.atoms
            .iter()
            .find(|a| a.location == x)
            .map_or(0.0, |a| a.weight)
    }

    /// Pushforward under `y ↦ −y`.
    pub fn reflect(&self) -> Self {
        let atoms = self
            .atoms
            .iter()
            .rev()
            .map(|a| Atom { location: -a.location, weight: a.weight })
            .collect();
        Self { atoms }
    }

    /// Pushforward under `y ↦ αy + β` for `α > 0`.
    pub fn affine(&self, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("scale {alpha} must be positive")));
        }
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom { location: alpha * a.location + beta, weight: a.weight })
            .collect();
        Ok(Self { atoms })
    }

    pub fn moments(&self) -> Moments {
        let mean: f64 = self.atoms.iter().map(|a| a.weight * a.location).sum();
        let variance: f64 = self
            .atoms
            .iter()
            .map(|a| a.weight * (a.location - mean).powi(2))
            .sum();
        Moments {
            mean,
            variance,
            x_min: self.x_min(),
            x_max: self.x_max(),
            top_weight: self.atoms[self.atoms.len() - 1].weight,
        }
    }

    /// Cauchy transform `G(z) = Σ wᵢ/(z − xᵢ)`.
    pub fn cauchy_g(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        if z.im == 0.0 {
            self.check_pole(z.re)?;
        }
        Ok(self.cauchy_g_unchecked(z))
    }

    pub(crate) fn cauchy_g_unchecked(&self, z: ComplexPoint) -> ComplexPoint {
        self.atoms
            .iter()
            .map(|a| a.weight / (z - a.location))
            .sum()
    }

    /// `F(z)` and `F'(z)` off the real line.
    pub(crate) fn reciprocal_complex(&self, z: ComplexPoint) -> (ComplexPoint, ComplexPoint) {
        let mut g = Complex64::new(0.0, 0.0);
        let mut g1 = Complex64::new(0.0, 0.0);
        for a in &self.atoms {
            let r = 1.0 / (z - a.location);
            g += a.weight * r;
            g1 -= a.weight * r * r;
        }
        let f = 1.0 / g;
        (f, -g1 * f * f)
    }

    fn check_pole(&self, w: f64) -> Result<()> {
        if self
            .atoms
            .iter()
            .any(|a| (w - a.location).abs() <= POLE_TOL * (1.0 + a.location.abs()))
        {
            return Err(Error::PoleAtAtom(w));
        }
        Ok(())
    }

    /// `F = 1/G` with `F'` and `F''` at a real point away from the atoms.
    pub fn reciprocal_f(&self, w: f64) -> Result<Reciprocal> {
        self.check_pole(w)?;
        let (mut g, mut g1, mut g2) = (0.0, 0.0, 0.0);
        for a in &self.atoms {
            let r = 1.0 / (w - a.location);
            g += a.weight * r;
            g1 -= a.weight * r * r;
            g2 += 2.0 * a.weight * r * r * r;
        }
        if g.abs() < 1e-300 {
            return Err(Error::PoleAtZeroOfG(w));
        }
        Ok(Reciprocal {
            value: 1.0 / g,
            first: -g1 / (g * g),
            second: -g2 / (g * g) + 2.0 * g1 * g1 / (g * g * g),
        })
    }

    /// `F` and `F'` at `x_max + δ`, evaluated in terms of the offset `δ > 0`
    /// so that points very close to the top atom keep full precision.
    pub(crate) fn reciprocal_above_top(&self, delta: f64) -> (f64, f64) {
        let top = self.x_max();
        let (mut s1, mut s2) = (0.0, 0.0);
        for a in &self.atoms {
            let r = 1.0 / (delta + (top - a.location));
            s1 += a.weight * r;
            s2 += a.weight * r * r;
        }
        (1.0 / s1, s2 / (s1 * s1))
    }

    fn require_nonnegative(&self) -> Result<()> {
        if self.x_min() < 0.0 || self.x_max() <= 0.0 {
            return Err(Error::NonPositiveSupport);
        }
        Ok(())
    }

    pub(crate) fn psi_unchecked(&self, z: f64) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.weight * z * a.location / (1.0 - z * a.location))
            .sum()
    }

    /// `ψ'(z) = Σ wᵢ xᵢ / (1 − z xᵢ)²`.
    pub(crate) fn psi_derivative_unchecked(&self, z: f64) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.weight * a.location / (1.0 - z * a.location).powi(2))
            .sum()
    }

    /// Moment generating function `ψ(z) = Σ wᵢ z xᵢ/(1 − z xᵢ)` for a measure on `[0, ∞)`.
    pub fn psi(&self, z: f64) -> Result<f64> {
        if self.x_min() < 0.0 {
            return Err(Error::NonPositiveSupport);
        }
        let top = self.x_max();
        if top > 0.0 && z >= 1.0 / top {
            return Err(Error::OutsideDomain { z, bound: 1.0 / top });
        }
        Ok(self.psi_unchecked(z))
    }

    /// `ψ` at a complex point.
    pub fn psi_complex(&self, z: ComplexPoint) -> ComplexPoint {
        self.atoms
            .iter()
            .map(|a| a.weight * z * a.location / (1.0 - z * a.location))
            .sum()
    }

    /// Inverse of `ψ` on `(μ({0}) − 1, ∞)`, by bisection on `(−∞, 1/x_max)`.
    pub fn psi_inverse(&self, y: f64) -> Result<f64> {
        self.require_nonnegative()?;
        let lower = self.mass_at(0.0) - 1.0;
        if !(y > lower) || !y.is_finite() {
            return Err(Error::OutsideRange { y, lower });
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        let bound = 1.0 / self.x_max();
        let (mut lo, mut hi) = if y > 0.0 {
            (0.0, bound)
        } else {
            let mut lo = -bound;
            let mut expansions = 0;
            while self.psi_unchecked(lo) >= y {
                lo *= 2.0;
                expansions += 1;
                if expansions > 2000 || !lo.is_finite() {
                    return Err(Error::NoConvergence {
                        solver: "psi_inverse bracket",
                        iterations: expansions,
                        residual: self.psi_unchecked(lo) - y,
                    });
                }
            }
            (lo, 0.0)
        };
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return Ok(mid);
            }
            if self.psi_unchecked(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-13 * lo.abs().max(hi.abs()) {
            return Ok(mid);
        }
        Err(Error::NoConvergence {
            solver: "psi_inverse",
            iterations: MAX_BISECTIONS,
            residual: self.psi_unchecked(mid) - y,
        })
    }

    /// Voiculescu's S-transform `S(z) = (1+z)/z · ψ⁻¹(z)`.
    pub fn s_transform(&self, z: f64) -> Result<f64> {
        if z == 0.0 {
            return Err(Error::ZeroArgument);
        }
        Ok((1.0 + z) / z * self.psi_inverse(z)?)
    }
}
