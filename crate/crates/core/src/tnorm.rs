//! The (t)-norm on `ℝ^k`.
//!
//! `‖x‖_(t)` is the operator norm of `p_t x p_t` where `x = diag(x₁, …, x_k)`
//! and `p_t` is a projection of trace `t` free from `x`. Equivalently it is
//! `t · max(|upper edge|, |lower edge|)` of `μ_x^{⊞1/t}`, with `μ_x` the
//! uniform measure on the coordinates.

use serde::{Deserialize, Serialize};

use crate::convolve::{power_edge, EdgeRegime, Side};
use crate::error::{Error, Result};
use crate::measure::{AtomicMeasure, DEFAULT_MERGE_TOL};

const SIDE_TIE_TOL: f64 = 1e-12;
const REGIME_TOL: f64 = 1e-12;

/// Whether `t ≥ 1 − 1/k`, where `‖·‖_(t)` on `ℝ^k` is the sup norm. Values
/// within rounding of the threshold count as inside, so that `t = (k−1)/k`
/// computed either way lands on the same side.
pub fn in_sup_regime(k: usize, t: f64) -> bool {
    t >= 1.0 - 1.0 / k as f64 - REGIME_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TNormRegime {
    ContinuousEdge,
    /// The norm equals `‖x‖_∞`, attained at a surviving atom.
    Atom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TNormResult {
    pub value: f64,
    pub regime: TNormRegime,
    pub side: Side,
    /// Critical point `w_x` of the achieving edge, in the coordinates of `x`.
    pub critical_point: Option<f64>,
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidT(t));
    }
    Ok(())
}

fn check_vector(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::EmptyVector);
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite coordinate".into()));
    }
    Ok(())
}

fn sup_norm(x: &[f64]) -> (f64, Side) {
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = x.iter().copied().fold(f64::INFINITY, f64::min);
    if max >= -min {
        (max.abs(), Side::Upper)
    } else {
        (-min, Side::Lower)
    }
}

/// `‖x‖_(t)` together with the regime and side that achieve it.
pub fn tnorm(x: &[f64], t: f64) -> Result<TNormResult> {
    check_vector(x)?;
    check_t(t)?;
    let k = x.len();
    let (inf, inf_side) = sup_norm(x);
    let constant = x.iter().all(|&v| v == x[0]);
    if t == 1.0 || constant || in_sup_regime(k, t) {
        return Ok(TNormResult {
            value: inf,
            regime: TNormRegime::Atom,
            side: inf_side,
            critical_point: None,
        });
    }

    let mu = AtomicMeasure::from_vector(x, DEFAULT_MERGE_TOL)?;
    let s = 1.0 / t;
    let upper = power_edge(&mu, s, Side::Upper)?;
    let lower = power_edge(&mu, s, Side::Lower)?;
    let upper_value = match upper.regime {
        EdgeRegime::SurvivingAtom => mu.x_max(),
        EdgeRegime::ContinuousEdge => t * upper.location,
    };
    let lower_value = match lower.regime {
        EdgeRegime::SurvivingAtom => -mu.x_min(),
        EdgeRegime::ContinuousEdge => -t * lower.location,
    };
    let (edge, side) = if lower_value > upper_value + SIDE_TIE_TOL {
        (lower, Side::Lower)
    } else {
        (upper, Side::Upper)
    };
    Ok(TNormResult {
        value: upper_value.max(lower_value),
        regime: match edge.regime {
            EdgeRegime::SurvivingAtom => TNormRegime::Atom,
            EdgeRegime::ContinuousEdge => TNormRegime::ContinuousEdge,
        },
        side,
        critical_point: edge.critical_point,
    })
}

/// Closed form of `‖1^j 0^{k−j}‖_(t)`.
pub fn tnorm_flat(j: usize, k: usize, t: f64) -> Result<f64> {
    if j == 0 || j > k {
        return Err(Error::InvalidIndex { j, k });
    }
    check_t(t)?;
    Ok(flat_value(j as f64 / k as f64, t))
}

fn flat_value(u: f64, t: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else if t + u < 1.0 {
        t + u - 2.0 * t * u + 2.0 * (t * u * (1.0 - t) * (1.0 - u)).sqrt()
    } else {
        1.0
    }
}

/// Gradient of `x ↦ ‖x‖_(t)` in the smooth (continuous edge) regime.
///
/// With `v` the critical point of the achieving edge,
/// `∂ⱼ‖x‖_(t) = ±(1 − t)/k · F_{μ_x}(v)² / (v − xⱼ)²`, the sign being that of
/// the side. Coordinates sharing an atom get equal shares.
pub fn grad_tnorm(x: &[f64], t: f64) -> Result<Vec<f64>> {
    let norm = tnorm(x, t)?;
    let v = match (norm.regime, norm.critical_point) {
        (TNormRegime::ContinuousEdge, Some(v)) => v,
        _ => {
            let maximizers = x
                .iter()
                .enumerate()
                .filter(|(_, xi)| (xi.abs() - norm.value).abs() <= 1e-12 * (1.0 + norm.value))
                .map(|(i, _)| i)
                .collect();
            return Err(Error::NonSmooth { maximizers });
        }
    };
    let mu = AtomicMeasure::from_vector(x, DEFAULT_MERGE_TOL)?;
    let f = mu.reciprocal_f(v)?.value;
    let k = x.len() as f64;
    let sign = match norm.side {
        Side::Upper => 1.0,
        Side::Lower => -1.0,
    };
    let scale = sign * (1.0 - t) / k * f * f;
    Ok(x.iter().map(|&xj| scale / (v - xj).powi(2)).collect())
}

/// Exposed point of `K_{k,t}` whose supporting hyperplane has normal `a`.
///
/// `a` must lie in the open chamber of the simplex (strictly decreasing,
/// summing to one) and `t < 1 − 1/k`, where the exposed face is a single point.
pub fn exposed_point(a: &[f64], t: f64) -> Result<Vec<f64>> {
    check_vector(a)?;
    check_t(t)?;
    let k = a.len();
    if k < 2 || a.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::DegenerateDirection);
    }
    let total: f64 = a.iter().sum();
    if (total - 1.0).abs() > 1e-10 || a.iter().any(|&v| v < 0.0) {
        return Err(Error::NotInSimplex(format!("{a:?}")));
    }
    if in_sup_regime(k, t) {
        return Err(Error::InvalidT(t));
    }
    grad_tnorm(a, t)
}

/// `β^{(t)}_j = ‖1^j0^{k−j}‖_(t) − ‖1^{j−1}0^{k−j+1}‖_(t)`.
pub fn beta_vector(k: usize, t: f64) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::InvalidIndex { j: 0, k });
    }
    check_t(t)?;
    let kf = k as f64;
    Ok((1..=k)
        .map(|j| flat_value(j as f64 / kf, t) - flat_value((j - 1) as f64 / kf, t))
        .collect())
}
