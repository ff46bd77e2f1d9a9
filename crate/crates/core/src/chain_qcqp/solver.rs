//! Phase-I slack minimization followed by log-barrier path following.

use serde::{Deserialize, Serialize};

use super::banded::{solve_bordered, BandedSym};
use super::problem::ChainProblem;
use super::Direction;
use crate::bounds::{chain_points, PointData};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Initial barrier weight `mu = 1/t`.
    pub barrier_mu0: f64,
    /// Factor applied to `mu` after each centering.
    pub mu_shrink: f64,
    /// Stop once `2N * mu` drops below this.
    pub newton_tol: f64,
    pub max_outer: usize,
    /// Newton steps allowed per centering.
    pub max_newton: usize,
    /// Largest phase-I slack still treated as feasible.
    pub feas_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { barrier_mu0: 1.0, mu_shrink: 0.2, newton_tol: 1e-8, max_outer: 100, max_newton: 200, feas_tol: 1e-8 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.barrier_mu0, self.newton_tol, self.feas_tol].iter().all(|v| *v > 0.0 && v.is_finite());
        if !positive || !(self.mu_shrink > 0.0 && self.mu_shrink < 1.0) || self.max_outer == 0 || self.max_newton == 0 {
            return Err(Error::InvalidInput(format!("invalid solver configuration {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Optimal,
    Infeasible,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub status: Status,
    /// Optimal `f_N` (in the original max/min sense); `NaN` when infeasible.
    pub value: f64,
    /// Recovered chain `(x_i, f_i, g_i)`, `i = 0..=N`, in ambient coordinates.
    pub chain: Vec<PointData>,
    pub max_constraint_violation: f64,
    pub duality_gap_estimate: f64,
    /// Smallest uniform constraint slack reached in phase I.
    pub phase_one_slack: f64,
    /// Uniform relaxation applied to the constraints when the feasible set has
    /// (numerically) empty interior; zero otherwise.
    pub relaxation: f64,
    pub newton_steps: usize,
}

impl BoundResult {
    fn infeasible(slack: f64, steps: usize) -> Self {
        Self {
            status: Status::Infeasible,
            value: f64::NAN,
            chain: Vec::new(),
            max_constraint_violation: slack.max(0.0),
            duality_gap_estimate: f64::NAN,
            phase_one_slack: slack,
            relaxation: 0.0,
            newton_steps: steps,
        }
    }
}

/// Phase-I slack below which the start is treated as strictly feasible.
const STRICT_MARGIN: f64 = 1e-12;
/// Phase I stops early once the slack is this negative.
const PHASE_ONE_EXIT: f64 = 1e-6;
const CENTERING_TOL: f64 = 1e-6;
/// Decrement below which a run of non-improving steps counts as centered.
const STAGNATION_DEC: f64 = 0.25;

#[derive(Clone, Copy)]
enum Phase {
    /// Minimize a uniform slack `s` with `c_j(z) <= s`; `s` is the last variable.
    One,
    /// Minimize `sign * f_N` subject to `c_j(z) <= relax`.
    Two { relax: f64, sign: f64 },
}

struct Barrier<'a> {
    p: &'a ChainProblem,
    phase: Phase,
    grad_buf: std::cell::RefCell<Vec<(usize, f64)>>,
}

enum Centering {
    Converged,
    Budget,
}

impl<'a> Barrier<'a> {
    fn new(p: &'a ChainProblem, phase: Phase) -> Self {
        Self { p, phase, grad_buf: Default::default() }
    }

    fn nz(&self) -> usize {
        self.p.num_vars()
    }

    fn dim(&self) -> usize {
        match self.phase {
            Phase::One => self.nz() + 1,
            Phase::Two { .. } => self.nz(),
        }
    }

    fn bound(&self, w: &[f64]) -> f64 {
        match self.phase {
            Phase::One => w[self.nz()],
            Phase::Two { relax, .. } => relax,
        }
    }

    /// Slacks `bound - c_j`, or `None` outside the barrier domain.
    fn slacks(&self, w: &[f64]) -> Option<Vec<f64>> {
        let b = self.bound(w);
        let z = &w[..self.nz()];
        let u: Vec<f64> = self.p.constraints.iter().map(|c| b - self.p.constraint_value(c, z)).collect();
        u.iter().all(|&v| v > 0.0 && v.is_finite()).then_some(u)
    }

    /// Newton direction and squared decrement at `w`.
    fn newton_direction(&self, w: &[f64], t: f64) -> Option<(Vec<f64>, f64)> {
        let nz = self.nz();
        let z = &w[..nz];
        let u = self.slacks(w)?;
        let mut grad = vec![0.0; self.dim()];
        let mut hess = BandedSym::zeros(nz, self.p.bandwidth());
        let mut border = vec![0.0; nz];
        let mut corner = 0.0;
        match self.phase {
            Phase::One => grad[nz] = t,
            Phase::Two { sign, .. } => grad[self.p.objective_index()] += t * sign,
        }
        let mut cg = self.grad_buf.borrow_mut();
        for (c, &uj) in self.p.constraints.iter().zip(&u) {
            self.p.constraint_gradient(c, z, &mut cg);
            let inv = 1.0 / uj;
            let inv2 = inv * inv;
            for &(i, gi) in cg.iter() {
                grad[i] += gi * inv;
                for &(j, gj) in cg.iter() {
                    if j <= i {
                        hess.add(i, j, gi * gj * inv2);
                    }
                }
            }
            self.p.add_constraint_hessian(c, inv, |i, j, v| hess.add(i, j, v));
            if let Phase::One = self.phase {
                grad[nz] -= inv;
                corner += inv2;
                for &(i, gi) in cg.iter() {
                    border[i] -= gi * inv2;
                }
            }
        }
        let neg: Vec<f64> = grad.iter().map(|g| -g).collect();
        let step = match self.phase {
            Phase::One => {
                let (mut dz, ds) = solve_bordered(&hess, &border, corner, &neg[..nz], neg[nz])?;
                dz.push(ds);
                dz
            }
            Phase::Two { .. } => hess.factor_regularized()?.solve(&neg),
        };
        let dec = -grad.iter().zip(&step).map(|(a, b)| a * b).sum::<f64>();
        Some((step, dec))
    }

    /// Damped Newton on the self-concordant centering objective: step `1/(1+lambda)`
    /// while the decrement is large, full steps once it is small. No function
    /// values are compared, so rounding in `t * objective` cannot stall it.
    fn center(&self, w: &mut Vec<f64>, t: f64, max_newton: usize, steps: &mut usize) -> Centering {
        let mut best = f64::INFINITY;
        let mut stale = 0;
        for _ in 0..max_newton {
            let Some((dir, dec)) = self.newton_direction(w, t) else {
                return Centering::Converged;
            };
            if !dec.is_finite() || dec / 2.0 <= CENTERING_TOL {
                return Centering::Converged;
            }
            // Decrements can plateau at the rounding floor when the feasible set is thin.
            if dec < best {
                best = dec;
                stale = 0;
            } else {
                stale += 1;
                if best < STAGNATION_DEC && stale >= 10 {
                    return Centering::Converged;
                }
            }
            let lambda = dec.max(0.0).sqrt();
            let mut alpha = if lambda > 0.25 { 1.0 / (1.0 + lambda) } else { 1.0 };
            let mut moved = false;
            while alpha > 1e-16 {
                let trial: Vec<f64> = w.iter().zip(&dir).map(|(a, d)| a + alpha * d).collect();
                if self.slacks(&trial).is_some() {
                    *w = trial;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            *steps += 1;
            if !moved {
                return Centering::Converged;
            }
        }
        Centering::Budget
    }
}

/// Solves the chain program.
///
/// Infeasibility is declared when phase I cannot push the uniform slack below
/// `feas_tol`. When the best slack lies in `[-1e-12, feas_tol)` the feasible set
/// has no usable interior and the constraints are relaxed by `feas_tol` before
/// path following.
pub fn solve(problem: &ChainProblem, config: &SolverConfig) -> BoundResult {
    let m = problem.num_constraints() as f64;
    let nz = problem.num_vars();
    let mut steps = 0usize;

    let z0 = problem.initial_point();
    let start_max = problem.constraint_values(&z0).into_iter().fold(f64::NEG_INFINITY, f64::max);

    let (z_start, slack) = if start_max < -PHASE_ONE_EXIT {
        (z0, start_max)
    } else {
        let barrier = Barrier::new(problem, Phase::One);
        let mut w = z0;
        w.push(start_max + 1.0);
        let mut t = 1.0 / config.barrier_mu0;
        let mut outer = 0;
        loop {
            if let Centering::Budget = barrier.center(&mut w, t, config.max_newton, &mut steps) {
                return iteration_limit(problem, None, f64::NAN, steps);
            }
            let s = w[nz];
            if s < -PHASE_ONE_EXIT || (m + 1.0) / t <= 1e-3 * config.feas_tol {
                break;
            }
            outer += 1;
            if outer >= config.max_outer {
                return iteration_limit(problem, None, s, steps);
            }
            t /= config.mu_shrink;
        }
        let s = w.pop().expect("slack variable");
        (w, s)
    };

    if slack >= config.feas_tol {
        return BoundResult::infeasible(slack, steps);
    }
    let relax = if slack < -STRICT_MARGIN { 0.0 } else { config.feas_tol.min(2.0 * slack.max(0.0) + 2e-12) };

    let sign = match problem.direction {
        Direction::Upper => -1.0,
        Direction::Lower => 1.0,
    };
    let barrier = Barrier::new(problem, Phase::Two { relax, sign });
    let mut z = z_start;
    let mut t = 1.0 / config.barrier_mu0;
    let mut outer = 0;
    loop {
        let centered = barrier.center(&mut z, t, config.max_newton, &mut steps);
        let gap = m / t;
        if let Centering::Converged = centered {
            if gap <= config.newton_tol {
                break;
            }
        }
        outer += 1;
        if outer >= config.max_outer {
            let mut r = finish(problem, &z, gap, slack, relax, steps);
            r.status = Status::IterationLimit;
            return r;
        }
        t /= config.mu_shrink;
    }
    finish(problem, &z, m / t, slack, relax, steps)
}

fn iteration_limit(problem: &ChainProblem, z: Option<&[f64]>, slack: f64, steps: usize) -> BoundResult {
    match z {
        Some(z) => {
            let mut r = finish(problem, z, f64::NAN, slack, 0.0, steps);
            r.status = Status::IterationLimit;
            r
        }
        None => BoundResult { status: Status::IterationLimit, ..BoundResult::infeasible(slack, steps) },
    }
}

fn finish(problem: &ChainProblem, z: &[f64], gap: f64, slack: f64, relax: f64, steps: usize) -> BoundResult {
    let xs = chain_points(&problem.x, &problem.y, problem.n);
    let chain = xs
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            let g = if i == 0 {
                problem.g_x_ambient.clone()
            } else if i == problem.n {
                problem.g_y_ambient.clone()
            } else {
                problem.lift(problem.g_value(z, i))
            };
            PointData { x, f: problem.f_value(z, i), g }
        })
        .collect();
    BoundResult {
        status: Status::Optimal,
        value: z[problem.objective_index()],
        chain,
        max_constraint_violation: problem.max_violation(z),
        duality_gap_estimate: gap,
        phase_one_slack: slack,
        relaxation: relax,
        newton_steps: steps,
    }
}
