//! The limiting body `K_{k,t}` of Schmidt vectors and the majorization
//! polytope `L_{k,t} ⊇ K_{k,t}`.

use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rmt::RngStream;
use crate::tnorm::{beta_vector, exposed_point, in_sup_regime, tnorm};

pub const DEFAULT_GRID_DEPTH: usize = 24;
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-4;

const SIMPLEX_TOL: f64 = 1e-10;
const REFINE_CANDIDATES: usize = 5;
const REFINE_ITERATIONS: usize = 60;
const MIN_GAP: f64 = 1e-6;

/// A point of the probability simplex `Δ_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimplexPoint {
    coords: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        let total: f64 = coords.iter().sum();
        if coords.iter().any(|&c| !c.is_finite() || c < 0.0) || (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::NotInSimplex(format!("{coords:?}")));
        }
        Ok(SimplexPoint { coords })
    }

    /// Rescales a nonnegative vector with positive sum onto the simplex.
    pub fn normalized(mut coords: Vec<f64>) -> Result<Self> {
        let total: f64 = coords.iter().sum();
        if !(total > 0.0) || coords.iter().any(|&c| c < 0.0) {
            return Err(Error::NotInSimplex(format!("{coords:?}")));
        }
        coords.iter_mut().for_each(|c| *c /= total);
        SimplexPoint::new(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_chamber(&self) -> bool {
        self.coords.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        self.coords.iter().zip(other).map(|(a, b)| a * b).sum()
    }
}

fn sorted_desc(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn to_chamber(lambda: &SimplexPoint) -> SimplexPoint {
    SimplexPoint {
        coords: sorted_desc(&lambda.coords),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Inside,
    Boundary,
    Outside,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub margin: f64,
    pub worst_direction: SimplexPoint,
    pub verdict: Verdict,
}

/// Support-function gap `‖a‖_(t) − ⟨λ↓, a↓⟩` for a chamber direction `a`.
fn gap(lambda: &[f64], a: &[f64], t: f64) -> Result<f64> {
    let a = sorted_desc(a);
    let pairing: f64 = lambda.iter().zip(&a).map(|(l, x)| l * x).sum();
    Ok(tnorm(&a, t)?.value - pairing)
}

/// Partitions of `depth` into at most `parts` parts, as non-increasing
/// vectors of length `parts`.
fn partitions(depth: usize, parts: usize) -> Vec<Vec<usize>> {
    fn recurse(rest: usize, max: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if rest == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        // the remaining slots can absorb at most slots * max
        if rest > slots * max {
            return;
        }
        for part in (0..=max.min(rest)).rev() {
            prefix.push(part);
            recurse(rest - part, part, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    recurse(depth, depth, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Coordinate descent over pairwise mass transfers, keeping the last
/// coordinate at zero.
fn refine(lambda: &[f64], start: Vec<f64>, value: f64, t: f64, step0: f64) -> Result<(Vec<f64>, f64)> {
    let free = start.len() - 1;
    let mut best = start;
    let mut best_value = value;
    let mut step = step0;
    for _ in 0..REFINE_ITERATIONS {
        let mut improved = false;
        for i in 0..free {
            for j in 0..free {
                if i == j || best[j] <= 0.0 {
                    continue;
                }
                let delta = step.min(best[j]);
                let mut trial = best.clone();
                trial[i] += delta;
                trial[j] -= delta;
                let v = gap(lambda, &trial, t)?;
                if v < best_value {
                    best = trial;
                    best_value = v;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok((sorted_desc(&best), best_value))
}

/// Tolerance-certified test of `λ ∈ K_{k,t}`.
///
/// The margin is minimized over chamber directions whose last coordinate is
/// zero. This loses nothing: for `a ∈ Δ_k^↓` the shift rule gives
/// `g(a) = g(a − a_k 1)`, while the constant direction has `g ≡ 0` for every
/// `λ` and would pin every margin at zero.
pub fn membership(lambda: &SimplexPoint, k: usize, t: f64, grid_depth: usize, tol: f64) -> Result<MembershipReport> {
    if lambda.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: lambda.len(),
        });
    }
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidT(t));
    }
    if grid_depth == 0 {
        return Err(Error::InvalidArgument("grid depth must be positive".into()));
    }
    let lam = sorted_desc(&lambda.coords);
    if k == 1 {
        // Δ_1 is a single point which always belongs to K_{1,t}
        return Ok(MembershipReport {
            margin: 0.0,
            worst_direction: SimplexPoint { coords: vec![1.0] },
            verdict: Verdict::Boundary,
        });
    }

    let depth = grid_depth as f64;
    let grid: Vec<Vec<f64>> = partitions(grid_depth, k - 1)
        .into_iter()
        .map(|p| {
            let mut a: Vec<f64> = p.into_iter().map(|c| c as f64 / depth).collect();
            a.push(0.0);
            a
        })
        .collect();
    let values = grid
        .par_iter()
        .map(|a| gap(&lam, a, t))
        .collect::<Result<Vec<f64>>>()?;

    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then_with(|| cmp_lex(&grid[i], &grid[j])));

    let refined = order
        .iter()
        .take(REFINE_CANDIDATES)
        .map(|&i| refine(&lam, grid[i].clone(), values[i], t, 0.5 / depth))
        .collect::<Result<Vec<_>>>()?;
    let (direction, margin) = refined
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then_with(|| cmp_lex(&a.0, &b.0)))
        .expect("grid is never empty");

    let verdict = if margin > tol {
        Verdict::Inside
    } else if margin < -tol {
        Verdict::Outside
    } else {
        Verdict::Boundary
    };
    Ok(MembershipReport {
        margin,
        worst_direction: SimplexPoint { coords: direction },
        verdict,
    })
}

fn cmp_lex(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub lambda: SimplexPoint,
    pub direction: SimplexPoint,
}

/// Strictly decreasing direction drawn uniformly from the chamber of `Δ_k`.
pub fn sample_chamber_direction<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let mut a: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = a.iter().sum();
        a.iter_mut().for_each(|v| *v /= total);
        let a = sorted_desc(&a);
        if a.windows(2).all(|w| w[0] - w[1] >= MIN_GAP) {
            return a;
        }
    }
}

/// Exposed points of `K_{k,t}` for `m` random chamber directions.
pub fn boundary_cloud(k: usize, t: f64, m: usize, stream: &RngStream) -> Result<Vec<BoundaryPoint>> {
    if k < 2 || !(t > 0.0) || in_sup_regime(k, t) {
        return Err(Error::InvalidT(t));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let mut rng = stream.rng();
    (0..m)
        .map(|_| {
            let a = sample_chamber_direction(k, &mut rng);
            let lambda = exposed_point(&a, t)?;
            Ok(BoundaryPoint {
                lambda: SimplexPoint::normalized(lambda)?,
                direction: SimplexPoint::new(a)?,
            })
        })
        .collect()
}

/// `λ ≺ β`: every prefix sum of `λ↓` is at most the matching prefix sum of `β↓`.
pub fn majorizes(beta: &[f64], lambda: &[f64]) -> Result<bool> {
    if beta.len() != lambda.len() {
        return Err(Error::DimensionMismatch {
            expected: beta.len(),
            got: lambda.len(),
        });
    }
    let b = sorted_desc(beta);
    let l = sorted_desc(lambda);
    let (mut sb, mut sl) = (0.0, 0.0);
    for (x, y) in b.iter().zip(&l) {
        sb += x;
        sl += y;
        if sl > sb + SIMPLEX_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn in_l(lambda: &SimplexPoint, k: usize, t: f64) -> Result<bool> {
    if lambda.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: lambda.len(),
        });
    }
    majorizes(&beta_vector(k, t)?, lambda.coords())
}
