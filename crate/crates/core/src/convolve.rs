//! Free additive convolution powers `μ^{⊞s}` of atomic measures, the law of
//! the compression `p_t x p_t`, and the edge of `μ ⊠ ν`.
//!
//! Everything rests on the subordination relation
//! `F_{μ^{⊞s}}(z) = F_μ(ω_s(z))`, where `ω_s` is the right inverse of
//! `H_s(w) = s·w + (1 − s)·F_μ(w)`. On the real axis to the right of the
//! support `H_s` is analytic until the critical point `v` with
//! `F_μ'(v) = s/(s − 1)`, and the upper edge of the absolutely continuous part
//! is `H_s(v)`. Atoms of `μ^{⊞s}` sit at `s·a` with mass `s·μ({a}) − s + 1`
//! whenever that is positive.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{AtomicMeasure, ComplexPoint};
use crate::quadrature::gauss_legendre;

const MAX_BISECTIONS: usize = 200;
/// Top weights this close to `1 − 1/s` count as surviving atoms.
const ATOM_THRESHOLD_TOL: f64 = 1e-12;
const MAX_FIXED_POINT_ITERATIONS: usize = 100_000;
const NEWTON_EVERY: usize = 25;
const NEWTON_ITERATIONS: usize = 100;
const QUADRATURE_TOL: f64 = 1e-7;
const MAX_QUADRATURE_DEPTH: usize = 20;

/// Default imaginary offset used for Stieltjes inversion.
pub const DEFAULT_EPSILON: f64 = 1e-7;

/// Which end of the support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeRegime {
    /// The edge is the end of the absolutely continuous part.
    ContinuousEdge,
    /// The extreme atom of `μ` survives in `μ^{⊞s}` and is the edge.
    SurvivingAtom,
}

/// Support edge of `μ^{⊞s}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeResult {
    pub location: f64,
    pub regime: EdgeRegime,
    /// Point `v` beyond the support of `μ` with `F_μ'(v) = s/(s − 1)`,
    /// present in the continuous regime.
    pub critical_point: Option<f64>,
}

fn check_power(s: f64) -> Result<()> {
    if !(s >= 1.0 && s.is_finite()) {
        return Err(Error::InvalidPower(s));
    }
    Ok(())
}

/// Edge of the support of `μ^{⊞s}` on the requested side.
pub fn power_edge(mu: &AtomicMeasure, s: f64, side: Side) -> Result<EdgeResult> {
    check_power(s)?;
    match side {
        Side::Upper => upper_edge(mu, s),
        Side::Lower => {
            let reflected = upper_edge(&mu.reflect(), s)?;
            Ok(EdgeResult {
                location: -reflected.location,
                regime: reflected.regime,
                critical_point: reflected.critical_point.map(|v| -v),
            })
        }
    }
}

fn upper_edge(mu: &AtomicMeasure, s: f64) -> Result<EdgeResult> {
    let top = mu.x_max();
    let top_weight = mu.moments().top_weight;
    if s == 1.0 || top_weight >= 1.0 - 1.0 / s - ATOM_THRESHOLD_TOL {
        return Ok(EdgeResult {
            location: s * top,
            regime: EdgeRegime::SurvivingAtom,
            critical_point: None,
        });
    }

    // F' decreases from 1/top_weight to 1 on (top, ∞); solve F'(top + δ) = s/(s−1).
    let target = s / (s - 1.0);
    let slope = |delta: f64| mu.reciprocal_above_top(delta).1;
    let scale = 1.0 + (top - mu.x_min());
    let mut hi = scale;
    let mut expansions = 0;
    while slope(hi) >= target {
        hi *= 2.0;
        expansions += 1;
        if expansions > 2000 || !hi.is_finite() {
            return Err(Error::NoConvergence {
                solver: "power_edge bracket",
                iterations: expansions,
                residual: slope(hi) - target,
            });
        }
    }
    let mut lo = hi;
    while slope(lo) < target {
        lo *= 0.5;
        expansions += 1;
        if expansions > 4000 || lo == 0.0 {
            return Err(Error::NoConvergence {
                solver: "power_edge bracket",
                iterations: expansions,
                residual: slope(lo) - target,
            });
        }
    }
    let mut converged = false;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            converged = true;
            break;
        }
        if slope(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let delta = 0.5 * (lo + hi);
    if !converged {
        return Err(Error::NoConvergence {
            solver: "power_edge",
            iterations: MAX_BISECTIONS,
            residual: slope(delta) - target,
        });
    }
    let v = top + delta;
    let f = mu.reciprocal_above_top(delta).0;
    Ok(EdgeResult {
        location: f + s * (v - f),
        regime: EdgeRegime::ContinuousEdge,
        critical_point: Some(v),
    })
}

/// `max(|upper edge|, |lower edge|)` of `μ^{⊞s}`.
pub fn power_norm(mu: &AtomicMeasure, s: f64) -> Result<f64> {
    let upper = power_edge(mu, s, Side::Upper)?.location;
    let lower = power_edge(mu, s, Side::Lower)?.location;
    Ok(upper.abs().max(lower.abs()))
}

/// Atoms `(location, mass)` of `μ^{⊞s}`.
pub fn surviving_atoms(mu: &AtomicMeasure, s: f64) -> Result<Vec<(f64, f64)>> {
    check_power(s)?;
    Ok(mu
        .atoms()
        .iter()
        .filter_map(|a| {
            let mass = s * a.weight - s + 1.0;
            (mass > 0.0).then_some((s * a.location, mass))
        })
        .collect())
}

/// The subordination function `ω_s(z)`: the unique fixed point in the upper
/// half-plane of `w ↦ (z + (s − 1)·F_μ(w))/s`.
///
/// Plain iteration converges from `w₀ = z`; Newton steps on
/// `H_s(w) − z` are tried periodically to speed up the slow cases near the
/// real axis and are accepted only if they land on a root in the upper
/// half-plane, which is necessarily the same fixed point.
pub fn subordination(mu: &AtomicMeasure, s: f64, z: ComplexPoint) -> Result<ComplexPoint> {
    check_power(s)?;
    if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidArgument(format!("Im z must be positive, got {z}")));
    }
    let tol = |w: Complex64| 1e-13 * (1.0 + w.norm());
    let residual = |w: Complex64| {
        let (f, _) = mu.reciprocal_complex(w);
        (s * w + (1.0 - s) * f - z).norm()
    };

    let mut w = z;
    for iteration in 0..MAX_FIXED_POINT_ITERATIONS {
        if iteration % NEWTON_EVERY == 0 {
            if let Some(root) = newton_subordination(mu, s, z, w) {
                return Ok(root);
            }
        }
        let (f, _) = mu.reciprocal_complex(w);
        let next = (z + (s - 1.0) * f) / s;
        let step = (next - w).norm();
        w = next;
        if step < tol(w) {
            return Ok(w);
        }
    }
    Err(Error::NoConvergence {
        solver: "subordination",
        iterations: MAX_FIXED_POINT_ITERATIONS,
        residual: residual(w),
    })
}

fn newton_subordination(
    mu: &AtomicMeasure,
    s: f64,
    z: ComplexPoint,
    start: ComplexPoint,
) -> Option<ComplexPoint> {
    let residual = |w: Complex64| {
        let (f, df) = mu.reciprocal_complex(w);
        (s * w + (1.0 - s) * f - z, s + (1.0 - s) * df)
    };
    let accept = 1e-10 * (1.0 + z.norm());
    let mut w = start;
    let (mut g, mut dg) = residual(w);
    for _ in 0..NEWTON_ITERATIONS {
        let step = g / dg;
        if !step.re.is_finite() || !step.im.is_finite() {
            return None;
        }
        // backtrack until the iterate stays in the upper half-plane and the
        // residual does not grow
        let mut damping = 1.0;
        let (next, next_g, next_dg) = loop {
            let candidate = w - step * damping;
            if candidate.im > 0.0 {
                let (cg, cdg) = residual(candidate);
                if cg.norm() <= g.norm() {
                    break (candidate, cg, cdg);
                }
            }
            damping *= 0.5;
            if damping < 1e-12 {
                return (g.norm() <= accept).then_some(w);
            }
        };
        let moved = (next - w).norm();
        w = next;
        g = next_g;
        dg = next_dg;
        if g.norm() <= 1e-14 * (1.0 + z.norm()) || moved < 1e-15 * (1.0 + w.norm()) {
            break;
        }
    }
    (g.norm() <= accept).then_some(w)
}

/// Cauchy transform of `μ^{⊞s}` at `z` in the upper half-plane.
pub fn power_cauchy(mu: &AtomicMeasure, s: f64, z: ComplexPoint) -> Result<ComplexPoint> {
    let omega = subordination(mu, s, z)?;
    let (f, _) = mu.reciprocal_complex(omega);
    Ok(1.0 / f)
}

/// Smoothed density of the absolutely continuous part of `μ^{⊞s}` at `x`,
/// `−π⁻¹ Im G(x + iε)` with the Cauchy transforms of the atoms removed.
pub fn density(mu: &AtomicMeasure, s: f64, x: f64, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} must be positive")));
    }
    let z = Complex64::new(x, epsilon);
    let mut g = power_cauchy(mu, s, z)?;
    for (loc, mass) in surviving_atoms(mu, s)? {
        g -= mass / (z - loc);
    }
    Ok(-g.im / std::f64::consts::PI)
}

/// Integral of [`density`] over `[lower edge, upper edge]`.
///
/// The interval is mapped by `x = c − h·cos θ`, which removes the square-root
/// behaviour at the two ends, and split into `panels` panels in `θ`. Each
/// panel is integrated with 20-point Gauss–Legendre and bisected while the
/// two halves disagree with the whole, which resolves the internal band
/// edges of multi-band supports.
pub fn density_mass(mu: &AtomicMeasure, s: f64, epsilon: f64, panels: usize) -> Result<f64> {
    let lower = power_edge(mu, s, Side::Lower)?.location;
    let upper = power_edge(mu, s, Side::Upper)?.location;
    if upper - lower <= 0.0 || panels == 0 {
        return Ok(0.0);
    }
    let center = 0.5 * (upper + lower);
    let half = 0.5 * (upper - lower);
    let rule = gauss_legendre(20);
    let panel = |a: f64, b: f64| -> Result<f64> {
        let (mid, radius) = (0.5 * (a + b), 0.5 * (b - a));
        let mut total = 0.0;
        for &(node, weight) in &rule {
            let theta = mid + radius * node;
            let x = center - half * theta.cos();
            total += weight * radius * half * theta.sin() * density(mu, s, x, epsilon)?;
        }
        Ok(total)
    };
    let width = std::f64::consts::PI / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let (a, b) = (p as f64 * width, (p + 1) as f64 * width);
        let coarse = panel(a, b)?;
        total += refine_panel(&panel, a, b, coarse, QUADRATURE_TOL / panels as f64, 0)?;
    }
    Ok(total)
}

fn refine_panel(
    panel: &dyn Fn(f64, f64) -> Result<f64>,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let left = panel(a, mid)?;
    let right = panel(mid, b)?;
    if (left + right - whole).abs() <= tol || depth >= MAX_QUADRATURE_DEPTH {
        return Ok(left + right);
    }
    Ok(refine_panel(panel, a, mid, left, 0.5 * tol, depth + 1)? + refine_panel(panel, mid, b, right, 0.5 * tol, depth + 1)?)
}

/// Law of `p_t x p_t` for `x` with eigenvalue distribution `base` and a free
/// projection `p_t` of trace `t`: `(1 − t)δ₀` plus `t` times the dilation by
/// `t` of `base^{⊞1/t}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompressedLaw {
    pub t: f64,
    pub base: AtomicMeasure,
    /// `(location, mass)` of the atoms, the one at zero first.
    pub atoms: Vec<(f64, f64)>,
    /// Hull of the support of the compressed part.
    pub support: (f64, f64),
    pub epsilon: f64,
}

pub fn compress_law(mu: &AtomicMeasure, t: f64) -> Result<CompressedLaw> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidT(t));
    }
    let s = 1.0 / t;
    let mut atoms = vec![(0.0, 1.0 - t)];
    for (loc, mass) in surviving_atoms(mu, s)? {
        let loc = t * loc;
        if loc == 0.0 {
            atoms[0].1 += t * mass;
        } else {
            atoms.push((loc, t * mass));
        }
    }
    let lower = power_edge(mu, s, Side::Lower)?.location;
    let upper = power_edge(mu, s, Side::Upper)?.location;
    Ok(CompressedLaw {
        t,
        base: mu.clone(),
        atoms,
        support: (t * lower, t * upper),
        epsilon: DEFAULT_EPSILON,
    })
}

impl CompressedLaw {
    /// Density of the absolutely continuous part at `y`.
    pub fn density(&self, y: f64) -> Result<f64> {
        // t · (1/t) f(y/t)
        density(&self.base, 1.0 / self.t, y / self.t, self.epsilon / self.t)
    }

    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// Mass of the absolutely continuous part, by quadrature.
    pub fn continuous_mass(&self) -> Result<f64> {
        Ok(self.t * density_mass(&self.base, 1.0 / self.t, self.epsilon / self.t, 100)?)
    }

    pub fn total_mass(&self) -> Result<f64> {
        Ok(self.atom_mass() + self.continuous_mass()?)
    }
}

const GRID_POINTS: usize = 400;
const GRID_MIN: f64 = 1e-6;
const GRID_MAX: f64 = 1e6;

/// Upper edge of `μ ⊠ ν` for atomic measures on `[0, ∞)`.
///
/// `c(z) = (1+z)/z · ψ_μ⁻¹(z) · ψ_ν⁻¹(z)` is the inverse of `ψ_{μ⊠ν}`; it
/// increases on `(0, z*)` where `z*` is its first critical point, and the
/// edge is `1/c(z*)`. Without a critical point both top atoms survive and the
/// edge is the product of the tops.
pub fn mult_edge(mu: &AtomicMeasure, nu: &AtomicMeasure) -> Result<f64> {
    for m in [mu, nu] {
        if m.x_min() < 0.0 || m.x_max() <= 0.0 {
            return Err(Error::NonPositiveSupport);
        }
    }
    let c = |z: f64| -> Result<f64> { Ok((1.0 + z) / z * mu.psi_inverse(z)? * nu.psi_inverse(z)?) };
    // d/dz log c, with (ψ⁻¹)' = 1/ψ'(ψ⁻¹).
    let slope = |z: f64| -> Result<f64> {
        let a = mu.psi_inverse(z)?;
        let b = nu.psi_inverse(z)?;
        let da = 1.0 / mu.psi_derivative_unchecked(a);
        let db = 1.0 / nu.psi_derivative_unchecked(b);
        Ok(1.0 / (1.0 + z) - 1.0 / z + da / a + db / b)
    };

    let ratio = (GRID_MAX / GRID_MIN).powf(1.0 / (GRID_POINTS - 1) as f64);
    let mut prev = GRID_MIN;
    if slope(prev)? <= 0.0 {
        return Err(Error::NoConvergence {
            solver: "mult_edge critical point below search grid",
            iterations: 0,
            residual: slope(prev)?,
        });
    }
    for i in 1..GRID_POINTS {
        let z = GRID_MIN * ratio.powi(i as i32);
        if slope(z)? <= 0.0 {
            let (mut lo, mut hi) = (prev, z);
            for _ in 0..MAX_BISECTIONS {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if slope(mid)? > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(1.0 / c(0.5 * (lo + hi))?);
        }
        prev = z;
    }
    Ok(mu.x_max() * nu.x_max())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn measure(x: &[f64]) -> AtomicMeasure {
        AtomicMeasure::from_vector(x, 0.0).unwrap()
    }

    #[test]
    fn arcsine_edge() {
        let e = power_edge(&measure(&[-1.0, 1.0]), 2.0, Side::Upper).unwrap();
        assert_close!(e.location, 2.0, 1e-12);
        // top weight ½ = 1 − 1/s sits on the threshold, counted as an atom
        assert_eq!(e.regime, EdgeRegime::SurvivingAtom);
        let e = power_edge(&measure(&[-1.0, 1.0]), 2.0, Side::Lower).unwrap();
        assert_close!(e.location, -2.0, 1e-12);
    }

    #[test]
    fn bernoulli_fourth_power_edge() {
        let mu = measure(&[1.0, 0.0]);
        let e = power_edge(&mu, 4.0, Side::Upper).unwrap();
        assert_close!(e.location, 2.0 + 3f64.sqrt(), 1e-12);
        assert_close!(e.critical_point.unwrap(), (3f64.sqrt() + 1.0) / 2.0, 1e-8);
        let r = mu.reciprocal_f(e.critical_point.unwrap()).unwrap();
        assert_close!(r.first, 4.0 / 3.0, 1e-10);
        let e = power_edge(&mu, 4.0, Side::Lower).unwrap();
        assert_close!(e.location, 2.0 - 3f64.sqrt(), 1e-12);
        let r = mu.reciprocal_f(e.critical_point.unwrap()).unwrap();
        assert_close!(r.first, 4.0 / 3.0, 1e-10);
    }

    #[test]
    fn point_mass_edges() {
        let mu = AtomicMeasure::dirac(1.7);
        for &s in &[1.0, 2.5, 40.0] {
            let e = power_edge(&mu, s, Side::Upper).unwrap();
            assert_eq!(e.regime, EdgeRegime::SurvivingAtom);
            assert_close!(e.location, s * 1.7, 1e-12);
            assert_close!(power_edge(&mu, s, Side::Lower).unwrap().location, s * 1.7, 1e-12);
        }
        assert!(matches!(power_edge(&mu, 0.5, Side::Upper), Err(Error::InvalidPower(_))));
    }

    #[test]
    fn boundary_weight_counts_as_atom() {
        // top weight 1/2 = 1 − 1/s at s = 2
        let e = power_edge(&measure(&[0.0, 1.0]), 2.0, Side::Upper).unwrap();
        assert_eq!(e.regime, EdgeRegime::SurvivingAtom);
        assert_eq!(e.location, 2.0);
    }

    #[test]
    fn surviving_atom_examples() {
        assert!(surviving_atoms(&measure(&[0.0, 1.0]), 4.0).unwrap().is_empty());
        let mu = AtomicMeasure::new(&[(0.0, 0.75), (1.0, 0.25)], 0.0).unwrap();
        assert_eq!(surviving_atoms(&mu, 2.0).unwrap(), vec![(0.0, 0.5)]);
        assert_eq!(
            surviving_atoms(&AtomicMeasure::dirac(2.0), 3.0).unwrap(),
            vec![(6.0, 1.0)]
        );
        // uniform k-point measures lose every atom once s > k
        let mu = measure(&[0.1, 0.4, 0.9]);
        assert!(surviving_atoms(&mu, 3.01).unwrap().is_empty());
    }

    #[test]
    fn subordination_examples() {
        let z = Complex64::new(0.3, 1.2);
        let w = subordination(&AtomicMeasure::dirac(0.0), 3.0, z).unwrap();
        assert_close!((w - z).norm(), 0.0, 1e-12);

        let mu = measure(&[-1.0, 1.0]);
        let w = subordination(&mu, 2.0, Complex64::new(0.0, 3.0)).unwrap();
        assert_close!(w.re, 0.0, 1e-12);
        assert_close!(w.im, (3.0 + 13f64.sqrt()) / 2.0, 1e-12);

        let z = Complex64::new(0.0, 1e6);
        let w = subordination(&measure(&[0.3, 2.0, -1.0]), 3.5, z).unwrap();
        assert_close!((w / z - 1.0).norm(), 0.0, 1e-5);

        assert!(subordination(&mu, 2.0, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn arcsine_density() {
        let mu = measure(&[-1.0, 1.0]);
        let d = density(&mu, 2.0, 0.0, DEFAULT_EPSILON).unwrap();
        assert_close!(d, 1.0 / (2.0 * std::f64::consts::PI), 1e-3);
        let d = density(&mu, 2.0, 1.0, DEFAULT_EPSILON).unwrap();
        assert_close!(d, 1.0 / (std::f64::consts::PI * 3f64.sqrt()), 1e-3);
        assert!(density(&mu, 2.0, 2.02, DEFAULT_EPSILON).unwrap() < 1e-3);
        assert!(density(&mu, 2.0, -2.02, DEFAULT_EPSILON).unwrap() < 1e-3);
        // the inverse square-root edges leak O(√ε) mass out of the support
        let mass = density_mass(&mu, 2.0, DEFAULT_EPSILON, 100).unwrap();
        assert_close!(mass, 1.0, 1e-3);
        let mass = density_mass(&mu, 2.0, 1e-13, 100).unwrap();
        assert_close!(mass, 1.0, 1e-5);
    }

    #[test]
    fn density_mass_with_surviving_atom() {
        let mu = AtomicMeasure::new(&[(0.0, 0.75), (1.0, 0.25)], 0.0).unwrap();
        let mass = density_mass(&mu, 2.0, DEFAULT_EPSILON, 100).unwrap();
        assert_close!(mass, 0.5, 1e-4);
    }

    #[test]
    fn compress_law_examples() {
        let law = compress_law(&measure(&[0.0, 1.0]), 0.25).unwrap();
        assert_eq!(law.atoms, vec![(0.0, 0.75)]);
        assert_close!(law.support.1, (2.0 + 3f64.sqrt()) / 4.0, 1e-12);
        assert_close!(law.total_mass().unwrap(), 1.0, 1e-4);

        let law = compress_law(&AtomicMeasure::dirac(1.0), 0.3).unwrap();
        assert_eq!(law.atoms.len(), 2);
        assert_close!(law.atoms[0].1, 0.7, 1e-15);
        assert_close!(law.atoms[1].0, 1.0, 1e-15);
        assert_close!(law.atoms[1].1, 0.3, 1e-15);
        assert_close!(law.total_mass().unwrap(), 1.0, 1e-12);

        let law = compress_law(&measure(&[0.2, 1.5, 3.0]), 0.4).unwrap();
        assert_close!(law.total_mass().unwrap(), 1.0, 1e-4);
        assert!(law.atoms[0].1 >= 0.6);
        assert!(compress_law(&measure(&[0.2]), 1.0).is_err());
    }

    #[test]
    fn mult_edge_examples() {
        let b = AtomicMeasure::bernoulli(0.25).unwrap();
        assert_close!(mult_edge(&b, &b).unwrap(), 0.75, 1e-10);
        for &(t, u) in &[(0.5, 0.5), (0.3, 0.8), (0.9, 0.2)] {
            let e = mult_edge(
                &AtomicMeasure::bernoulli(t).unwrap(),
                &AtomicMeasure::bernoulli(u).unwrap(),
            )
            .unwrap();
            assert_close!(e, 1.0, 1e-9);
        }
        let mu = measure(&[0.3, 2.0, 1.1]);
        assert_close!(mult_edge(&mu, &AtomicMeasure::dirac(1.0)).unwrap(), 2.0, 1e-9);
        assert_eq!(
            mult_edge(&measure(&[-1.0, 1.0]), &b),
            Err(Error::NonPositiveSupport)
        );
    }

    #[test]
    fn s_transform_product_regression() {
        // S_μ·S_ν is the S-transform of μ ⊠ ν, whose ψ-inverse is c.
        let mu = measure(&[0.5, 2.0, 3.0]);
        let nu = AtomicMeasure::bernoulli(0.4).unwrap();
        for &z in &[0.1, 0.7, 3.0] {
            let lhs = mu.s_transform(z).unwrap() * nu.s_transform(z).unwrap();
            let c = (1.0 + z) / z * mu.psi_inverse(z).unwrap() * nu.psi_inverse(z).unwrap();
            assert_close!(lhs, (1.0 + z) / z * c, 1e-12);
        }
    }

    fn vector_strategy() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..10.0, 1..=8)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn additive_and_multiplicative_paths_agree(x in vector_strategy(), t in 0.05f64..0.95) {
            let mu = measure(&x);
            prop_assume!(mu.x_max() > 0.0);
            let additive = t * power_edge(&mu, 1.0 / t, Side::Upper).unwrap().location;
            let multiplicative = mult_edge(&mu, &AtomicMeasure::bernoulli(t).unwrap()).unwrap();
            prop_assert!((additive - multiplicative).abs() <= 1e-8, "{additive} {multiplicative}");
        }

        #[test]
        fn affine_equivariance(x in prop::collection::vec(-5.0f64..5.0, 1..=6), s in 1.0f64..8.0,
                               alpha in 0.1f64..4.0, beta in -3.0f64..3.0) {
            let mu = measure(&x);
            let moved = mu.affine(alpha, beta).unwrap();
            for side in [Side::Upper, Side::Lower] {
                let a = power_edge(&moved, s, side).unwrap().location;
                let b = alpha * power_edge(&mu, s, side).unwrap().location + s * beta;
                prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()), "{a} {b}");
            }
        }

        #[test]
        fn critical_point_solves_edge_equation(x in prop::collection::vec(-5.0f64..5.0, 2..=6), s in 1.01f64..20.0) {
            let mu = measure(&x);
            let e = power_edge(&mu, s, Side::Upper).unwrap();
            if let Some(v) = e.critical_point {
                let r = mu.reciprocal_f(v).unwrap();
                prop_assert!((r.first - s / (s - 1.0)).abs() <= 1e-10 * s / (s - 1.0));
                prop_assert!((e.location - (s * v + (1.0 - s) * r.value)).abs() <= 1e-9 * (1.0 + e.location.abs()));
            } else {
                prop_assert!((e.location - s * mu.x_max()).abs() <= 1e-12 * (1.0 + e.location.abs()));
            }
        }

        #[test]
        fn subordination_residual(x in prop::collection::vec(-5.0f64..5.0, 1..=6), s in 1.0f64..10.0,
                                  re in -20.0f64..20.0, im in 1e-6f64..10.0) {
            let mu = measure(&x);
            let z = Complex64::new(re, im);
            let w = subordination(&mu, s, z).unwrap();
            let (f, _) = mu.reciprocal_complex(w);
            prop_assert!(w.im > 0.0);
            prop_assert!((s * w + (1.0 - s) * f - z).norm() <= 1e-9);
        }
    }
}
