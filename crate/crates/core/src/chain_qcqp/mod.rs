//! Chain programs bounding `f(y)` from endpoint data.
//!
//! Given `x, f(x), f'(x), y, f'(y)` and a chain length `N`, the unknowns are the
//! values `f_1..f_N` and gradients `g_1..g_{N-1}` at the equally spaced points
//! between `x` and `y`. Each adjacent pair must satisfy both two-point
//! co-coercivity inequalities; maximizing (minimizing) `f_N` bounds `f(y)` from
//! above (below).

mod banded;
mod oracle;
mod problem;
mod solver;
mod sweep;

pub use oracle::oracle_grid_n2;
pub use problem::{build_problem, build_problem_with, ChainProblem, ConstraintKind, PairConstraint};
pub use solver::{solve, BoundResult, SolverConfig, Status};
pub use sweep::{linspace, sweep, SweepRow};

use serde::{Deserialize, Serialize};

use crate::bounds::Interval;
use crate::error::{Error, Result};
use crate::vector::{check_dims, dot, norm_sq, sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(alias = "upper", alias = "U")]
    Upper,
    #[serde(alias = "lower", alias = "B")]
    Lower,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::Upper => Direction::Lower,
            Direction::Lower => Direction::Upper,
        }
    }
}

/// Endpoint data of a chain program.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    #[serde(rename = "L")]
    pub l: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub f_x: f64,
    pub g_x: Vec<f64>,
    pub g_y: Vec<f64>,
    #[serde(rename = "N")]
    pub n: usize,
    pub direction: Direction,
}

impl ChainSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.l > 0.0 && self.l.is_finite()) {
            return Err(Error::Range(format!("L must be positive, got {}", self.l)));
        }
        if self.n == 0 {
            return Err(Error::Range("N must be at least 1".into()));
        }
        let d = self.x.len();
        if d == 0 {
            return Err(Error::InvalidInput("empty location vector".into()));
        }
        check_dims(d, self.y.len())?;
        check_dims(d, self.g_x.len())?;
        check_dims(d, self.g_y.len())?;
        let all = self.x.iter().chain(&self.y).chain(&self.g_x).chain(&self.g_y);
        if !self.f_x.is_finite() || all.into_iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite entry in chain data".into()));
        }
        if self.x == self.y {
            return Err(Error::Degenerate("x and y coincide".into()));
        }
        Ok(())
    }

    pub fn with_direction(&self, direction: Direction) -> Self {
        Self { direction, ..self.clone() }
    }

    pub fn with_n(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }

    /// The same data read from `y` back to `x`; `f_y` becomes the known value.
    pub fn reversed(&self, f_y: f64) -> Self {
        Self {
            l: self.l,
            x: self.y.clone(),
            y: self.x.clone(),
            f_x: f_y,
            g_x: self.g_y.clone(),
            g_y: self.g_x.clone(),
            n: self.n,
            direction: self.direction.flipped(),
        }
    }
}

/// The normalization `x = 0`, `f(x) = 0`, `f'(x) = 0` with fixed `||y||`, `||f'(y)||`, `L`,
/// parametrized by `s = <f'(y), y>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub norm_y_sq: f64,
    pub norm_gy_sq: f64,
    #[serde(rename = "L")]
    pub l: f64,
}

impl Default for Normalization {
    fn default() -> Self {
        Self { norm_y_sq: 1.0, norm_gy_sq: 0.5, l: 1.0 }
    }
}

impl Normalization {
    /// Planar instance with `y = (||y||, 0)` and `f'(y)` at inner product `s` with `y`.
    pub fn spec(&self, s: f64, n: usize, direction: Direction) -> Result<ChainSpec> {
        let ny = self.norm_y_sq.sqrt();
        let g0 = s / ny;
        let rest = self.norm_gy_sq - g0 * g0;
        if rest < -1e-12 * self.norm_gy_sq.max(1.0) {
            return Err(Error::Range(format!("no gradient with |g|^2 = {} and <g, y> = {s}", self.norm_gy_sq)));
        }
        Ok(ChainSpec {
            l: self.l,
            x: vec![0.0, 0.0],
            y: vec![ny, 0.0],
            f_x: 0.0,
            g_x: vec![0.0, 0.0],
            g_y: vec![g0, rest.max(0.0).sqrt()],
            n,
            direction,
        })
    }

    /// `[||g_y||^2 / L, ||g_y|| ||y||]`, computed from the squared norms.
    pub fn feasibility_interval(&self) -> Interval {
        let lo = self.norm_gy_sq / self.l;
        let hi = (self.norm_gy_sq * self.norm_y_sq).sqrt();
        if lo > hi {
            Interval::empty()
        } else {
            Interval::new(lo, hi)
        }
    }
}

/// Single-step bounds `(B_1, U_1, B_1 <= U_1)`.
pub fn closed_form_n1(spec: &ChainSpec) -> (f64, f64, bool) {
    let d = sub(&spec.y, &spec.x);
    let dg = sub(&spec.g_y, &spec.g_x);
    let curv = norm_sq(&dg) / (2.0 * spec.l);
    let upper = spec.f_x + dot(&spec.g_y, &d) - curv;
    let lower = spec.f_x + dot(&spec.g_x, &d) + curv;
    (lower, upper, lower <= upper)
}

/// Range of `s = <f'(y), y>` for which the single-step program is feasible when
/// `x = 0`, `f'(x) = 0`: `[||g_y||^2 / L, ||g_y|| ||y||]`.
pub fn feasibility_interval_n1(norm_y: f64, norm_gy: f64, l: f64) -> Interval {
    let lo = norm_gy * norm_gy / l;
    let hi = norm_gy * norm_y;
    if lo > hi {
        Interval::empty()
    } else {
        Interval::new(lo, hi)
    }
}
