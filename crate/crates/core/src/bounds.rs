//! Analytical inequalities for L-smooth convex functions.
//!
//! All predicates take function data as [`PointData`] triples; nothing here
//! evaluates a function. Gap-style functions return a signed slack that is
//! nonnegative exactly when the corresponding inequality holds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::{check_dims, dot, norm, norm_sq, sub};

/// Location, value and gradient of a function at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointData {
    pub x: Vec<f64>,
    pub f: f64,
    pub g: Vec<f64>,
}

impl PointData {
    pub fn new(x: Vec<f64>, f: f64, g: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidInput("point dimension must be at least 1".into()));
        }
        check_dims(x.len(), g.len())?;
        Ok(Self { x, f, g })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Samples `1/2 ||z||^2` at `z`.
    pub fn half_norm_sq(z: &[f64]) -> Self {
        Self { x: z.to_vec(), f: 0.5 * norm_sq(z), g: z.to_vec() }
    }
}

/// Closed interval, or the empty set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub empty: bool,
}

impl Interval {
    /// `[lo, hi]`; empty when `lo > hi`.
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi, empty: lo > hi }
    }

    pub fn empty() -> Self {
        Self { lo: f64::NAN, hi: f64::NAN, empty: true }
    }

    pub fn point(v: f64) -> Self {
        Self::new(v, v)
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn width(&self) -> f64 {
        if self.empty {
            0.0
        } else {
            self.hi - self.lo
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.contains_within(v, 0.0)
    }

    /// Membership in `[lo - tol, hi + tol]`; an interval that is empty only by
    /// rounding still admits values within `tol` of both ends.
    pub fn contains_within(&self, v: f64, tol: f64) -> bool {
        self.lo - tol <= v && v <= self.hi + tol
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        self.empty || (!other.empty && other.lo <= self.lo && self.hi <= other.hi)
    }

    /// Subset with at least one endpoint strictly inside `other`.
    pub fn is_strict_subset_of(&self, other: &Interval) -> bool {
        self.is_subset_of(other) && (self.empty || other.lo < self.lo || self.hi < other.hi)
    }
}

fn check_pair(px: &PointData, py: &PointData) -> Result<()> {
    check_dims(px.x.len(), px.g.len())?;
    check_dims(px.x.len(), py.x.len())?;
    check_dims(px.x.len(), py.g.len())
}

fn check_l(l: f64) -> Result<()> {
    if l > 0.0 && l.is_finite() {
        Ok(())
    } else {
        Err(Error::Range(format!("smoothness constant must be positive, got {l}")))
    }
}

/// Slacks of the two-sided descent lemma.
///
/// `lower_gap = f(y) - f(x) - <g_x, y - x>` and
/// `upper_gap = L/2 ||y - x||^2 - lower_gap`.
pub fn descent_gap(l: f64, px: &PointData, py: &PointData) -> Result<(f64, f64)> {
    check_l(l)?;
    check_pair(px, py)?;
    let d = sub(&py.x, &px.x);
    let lower = py.f - px.f - dot(&px.g, &d);
    Ok((lower, 0.5 * l * norm_sq(&d) - lower))
}

/// `f(y) - f(x) - <g_x, y - x> - ||g_x - g_y||^2 / (2L)`.
pub fn cocoercivity_gap(l: f64, px: &PointData, py: &PointData) -> Result<f64> {
    check_l(l)?;
    check_pair(px, py)?;
    let d = sub(&py.x, &px.x);
    let dg = sub(&px.g, &py.g);
    Ok(py.f - px.f - dot(&px.g, &d) - norm_sq(&dg) / (2.0 * l))
}

/// Admissible range of `f(y)` from the global bound for open domains, applied
/// once as stated and once with the roles of `x` and `y` exchanged.
pub fn global_bound_interval(l: f64, px: &PointData, py: &PointData) -> Result<Interval> {
    check_l(l)?;
    check_pair(px, py)?;
    let d = sub(&py.x, &px.x);
    let dist_sq = norm_sq(&d);
    if dist_sq == 0.0 {
        return Err(Error::Degenerate("global bound needs x != y".into()));
    }
    let dg = sub(&py.g, &px.g);
    let curvature = dot(&dg, &d).powi(2) / (2.0 * l * dist_sq);
    let lo = px.f + dot(&px.g, &d) + curvature;
    let hi = px.f + dot(&py.g, &d) - curvature;
    Ok(Interval::new(lo, hi))
}

/// Whether `||x - y|| < dist_y`, the condition under which co-coercivity is
/// guaranteed on an open domain. Equality returns `false`.
pub fn local_condition(x: &[f64], y: &[f64], dist_y: f64) -> bool {
    norm(&sub(x, y)) < dist_y
}

/// Smallest `N` with `N > ||y - x|| / min(dist_x, dist_y)`.
pub fn min_chain_length(x: &[f64], y: &[f64], dist_x: f64, dist_y: f64) -> Result<usize> {
    let m = dist_x.min(dist_y);
    if !(m > 0.0) {
        return Err(Error::Range(format!("distances must be positive, got {dist_x} and {dist_y}")));
    }
    let ratio = norm(&sub(y, x)) / m;
    Ok(ratio.floor() as usize + 1)
}

/// Endpoints and chain length of an equally spaced chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub n: usize,
}

impl ChainConfig {
    pub fn new(x: Vec<f64>, y: Vec<f64>, n: usize) -> Result<Self> {
        check_dims(x.len(), y.len())?;
        if x == y {
            return Err(Error::Degenerate("chain endpoints coincide".into()));
        }
        if n == 0 {
            return Err(Error::Range("chain length must be at least 1".into()));
        }
        Ok(Self { x, y, n })
    }
}

/// `x_i = x + (i/N)(y - x)` for `i = 0..=N`, with exact endpoints.
pub fn make_chain(cfg: &ChainConfig) -> Vec<Vec<f64>> {
    chain_points(&cfg.x, &cfg.y, cfg.n)
}

pub(crate) fn chain_points(x: &[f64], y: &[f64], n: usize) -> Vec<Vec<f64>> {
    (0..=n)
        .map(|i| {
            if i == n {
                return y.to_vec();
            }
            let t = i as f64 / n as f64;
            x.iter().zip(y).map(|(a, b)| a + t * (b - a)).collect()
        })
        .collect()
}

/// Weights `alpha_i = max(0, xi - i - 1, i - xi)` and the first zero index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaWeights {
    pub n: usize,
    pub xi: f64,
    pub alpha: Vec<f64>,
    pub n1: usize,
}

fn check_xi(n: usize, xi: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::Range("N must be at least 1".into()));
    }
    if !(0.0..=n as f64).contains(&xi) {
        return Err(Error::Range(format!("xi = {xi} outside [0, {n}]")));
    }
    Ok(())
}

pub fn alpha_weights(n: usize, xi: f64) -> Result<AlphaWeights> {
    check_xi(n, xi)?;
    let alpha: Vec<f64> = (0..n)
        .map(|i| {
            let i = i as f64;
            0f64.max(xi - i - 1.0).max(i - xi)
        })
        .collect();
    let n1 = alpha.iter().position(|&a| a == 0.0).expect("some weight vanishes when 0 <= xi <= N");
    Ok(AlphaWeights { n, xi, alpha, n1 })
}

/// Direct sum `sum_i (alpha_i - xi + i + 1)^2 / (2 alpha_i + 1)` and its closed form `(xi - N)^2`.
pub fn sum_identity(n: usize, xi: f64) -> Result<(f64, f64)> {
    let w = alpha_weights(n, xi)?;
    let direct = w
        .alpha
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let num = a - xi + i as f64 + 1.0;
            num * num / (2.0 * a + 1.0)
        })
        .sum();
    Ok((direct, (xi - n as f64).powi(2)))
}

/// Admissible `f(y) - f(x)` under `L = 1`, `f'(x) = 0`, `||y - x|| = 1`, with
/// `t = <f'(y), y - x>`: the global open-domain bound (inner) and the
/// descent lemma (outer).
pub fn analytical_region(t: f64) -> Result<(Interval, Interval)> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Range(format!("t = {t} outside [0, 1]")));
    }
    let inner = Interval::new(0.5 * t * t, t - 0.5 * t * t);
    let outer = Interval::new(0f64.max(t - 0.5), 0.5f64.min(t));
    Ok((inner, outer))
}

/// Distance to the complement of the open half-plane `<normal, z> < offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfPlaneDistance {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl HalfPlaneDistance {
    /// The counterexample domain `x1 > -23/240`.
    pub fn counterexample_domain() -> Self {
        Self { normal: vec![0.0, -1.0], offset: 23.0 / 240.0 }
    }

    /// Signed distance; positive inside.
    pub fn distance(&self, z: &[f64]) -> f64 {
        (self.offset - dot(&self.normal, z)) / norm(&self.normal)
    }
}
