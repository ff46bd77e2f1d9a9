use serde::Serialize;

use super::ChainSpec;
use super::Direction;
use crate::error::Result;
use crate::vector::{dot, norm, sub};

/// Which of the two two-point inequalities a constraint encodes for pair `(i, i+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConstraintKind {
    /// `||g_i - g_{i+1}||^2 / 2L <= f_i - f_{i+1} - <g_{i+1}, x_i - x_{i+1}>`
    Backward,
    /// `||g_i - g_{i+1}||^2 / 2L <= f_{i+1} - f_i - <g_i, x_{i+1} - x_i>`
    Forward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairConstraint {
    pub pair: usize,
    pub kind: ConstraintKind,
}

/// A chain program expressed in an orthonormal basis of the data span.
///
/// Variables are laid out node by node: `f_1, g_1, f_2, g_2, ..., f_{N-1}, g_{N-1}, f_N`,
/// with every `g_i` stored as `reduced_dim` coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainProblem {
    pub l: f64,
    pub n: usize,
    pub direction: Direction,
    pub f_x: f64,
    pub reduced_dim: usize,
    /// Orthonormal basis vectors in the ambient space.
    pub basis: Vec<Vec<f64>>,
    /// `y - x` in basis coordinates.
    pub delta: Vec<f64>,
    pub g_x: Vec<f64>,
    pub g_y: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub g_x_ambient: Vec<f64>,
    pub g_y_ambient: Vec<f64>,
    pub constraints: Vec<PairConstraint>,
}

/// Builds the program in the span of `{y - x, g_x, g_y}`.
pub fn build_problem(spec: &ChainSpec) -> Result<ChainProblem> {
    build_problem_with(spec, true)
}

/// Builds the program, optionally keeping the full ambient dimension.
pub fn build_problem_with(spec: &ChainSpec, reduce: bool) -> Result<ChainProblem> {
    spec.validate()?;
    let d = spec.x.len();
    let dxy = sub(&spec.y, &spec.x);
    let basis = if reduce {
        orthonormal_basis(&[&dxy, &spec.g_x, &spec.g_y])
    } else {
        (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
    };
    let project = |v: &[f64]| basis.iter().map(|b| dot(b, v)).collect::<Vec<f64>>();
    let constraints = (0..spec.n)
        .flat_map(|i| {
            [
                PairConstraint { pair: i, kind: ConstraintKind::Backward },
                PairConstraint { pair: i, kind: ConstraintKind::Forward },
            ]
        })
        .collect();
    Ok(ChainProblem {
        l: spec.l,
        n: spec.n,
        direction: spec.direction,
        f_x: spec.f_x,
        reduced_dim: basis.len(),
        delta: project(&dxy),
        g_x: project(&spec.g_x),
        g_y: project(&spec.g_y),
        basis,
        x: spec.x.clone(),
        y: spec.y.clone(),
        g_x_ambient: spec.g_x.clone(),
        g_y_ambient: spec.g_y.clone(),
        constraints,
    })
}

/// Modified Gram-Schmidt, dropping vectors already (numerically) in the span.
fn orthonormal_basis(vectors: &[&[f64]]) -> Vec<Vec<f64>> {
    let scale = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = v.to_vec();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                w.iter_mut().zip(b).for_each(|(wi, bi)| *wi -= c * bi);
            }
        }
        let nw = norm(&w);
        if nw > 1e-10 * scale {
            basis.push(w.into_iter().map(|wi| wi / nw).collect());
        }
    }
    basis
}

impl ChainProblem {
    pub fn num_vars(&self) -> usize {
        self.n + (self.n - 1) * self.reduced_dim
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Half-bandwidth of the barrier Hessian under the node-major layout.
    pub(crate) fn bandwidth(&self) -> usize {
        2 * self.reduced_dim + 1
    }

    fn offset(&self, node: usize) -> usize {
        (node - 1) * (self.reduced_dim + 1)
    }

    /// Index of `f_node`, `None` for the fixed `f_0`.
    pub fn f_index(&self, node: usize) -> Option<usize> {
        (node >= 1).then(|| self.offset(node))
    }

    /// First index of `g_node`, `None` for the fixed endpoints.
    pub fn g_index(&self, node: usize) -> Option<usize> {
        (node >= 1 && node < self.n).then(|| self.offset(node) + 1)
    }

    pub fn f_value(&self, z: &[f64], node: usize) -> f64 {
        self.f_index(node).map_or(self.f_x, |i| z[i])
    }

    pub fn g_value<'a>(&'a self, z: &'a [f64], node: usize) -> &'a [f64] {
        match self.g_index(node) {
            Some(i) => &z[i..i + self.reduced_dim],
            None if node == 0 => &self.g_x,
            None => &self.g_y,
        }
    }

    /// Index of `f_N`, the objective variable.
    pub fn objective_index(&self) -> usize {
        self.offset(self.n)
    }

    /// Constraint value; feasible iff `<= 0`.
    pub fn constraint_value(&self, c: &PairConstraint, z: &[f64]) -> f64 {
        let i = c.pair;
        let (fi, fj) = (self.f_value(z, i), self.f_value(z, i + 1));
        let (gi, gj) = (self.g_value(z, i), self.g_value(z, i + 1));
        let curv = gi.iter().zip(gj).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / (2.0 * self.l);
        let inv_n = 1.0 / self.n as f64;
        match c.kind {
            ConstraintKind::Backward => curv - fi + fj - inv_n * dot(gj, &self.delta),
            ConstraintKind::Forward => curv + fi - fj + inv_n * dot(gi, &self.delta),
        }
    }

    pub fn constraint_values(&self, z: &[f64]) -> Vec<f64> {
        self.constraints.iter().map(|c| self.constraint_value(c, z)).collect()
    }

    pub fn max_violation(&self, z: &[f64]) -> f64 {
        self.constraint_values(z).into_iter().fold(0.0, f64::max)
    }

    /// Sparse gradient of a constraint over the free variables.
    pub(crate) fn constraint_gradient(&self, c: &PairConstraint, z: &[f64], out: &mut Vec<(usize, f64)>) {
        out.clear();
        let i = c.pair;
        let k = self.reduced_dim;
        let inv_n = 1.0 / self.n as f64;
        let (gi, gj) = (self.g_value(z, i), self.g_value(z, i + 1));
        let (sf, gi_extra, gj_extra) = match c.kind {
            ConstraintKind::Backward => (-1.0, 0.0, -inv_n),
            ConstraintKind::Forward => (1.0, inv_n, 0.0),
        };
        if let Some(fi) = self.f_index(i) {
            out.push((fi, sf));
        }
        if let Some(fj) = self.f_index(i + 1) {
            out.push((fj, -sf));
        }
        if let Some(gi_idx) = self.g_index(i) {
            for a in 0..k {
                out.push((gi_idx + a, (gi[a] - gj[a]) / self.l + gi_extra * self.delta[a]));
            }
        }
        if let Some(gj_idx) = self.g_index(i + 1) {
            for a in 0..k {
                out.push((gj_idx + a, (gj[a] - gi[a]) / self.l + gj_extra * self.delta[a]));
            }
        }
    }

    /// Adds `w` times the constant Hessian of a constraint via `add(i, j, v)` for `i >= j`.
    pub(crate) fn add_constraint_hessian(&self, c: &PairConstraint, w: f64, mut add: impl FnMut(usize, usize, f64)) {
        let k = self.reduced_dim;
        let h = w / self.l;
        let gi = self.g_index(c.pair);
        let gj = self.g_index(c.pair + 1);
        for a in 0..k {
            if let Some(p) = gi {
                add(p + a, p + a, h);
            }
            if let Some(q) = gj {
                add(q + a, q + a, h);
            }
            if let (Some(p), Some(q)) = (gi, gj) {
                add(q + a, p + a, -h);
            }
        }
    }

    /// Starting point: `f_i` interpolated from `f_x` to the midpoint of the
    /// single-step interval, `g_i` interpolated from `g_x` to `g_y`.
    pub fn initial_point(&self) -> Vec<f64> {
        let dg: Vec<f64> = sub(&self.g_y, &self.g_x);
        let curv = dot(&dg, &dg) / (2.0 * self.l);
        let upper = self.f_x + dot(&self.g_y, &self.delta) - curv;
        let lower = self.f_x + dot(&self.g_x, &self.delta) + curv;
        let target = 0.5 * (upper + lower);
        let mut z = vec![0.0; self.num_vars()];
        for node in 1..=self.n {
            let t = node as f64 / self.n as f64;
            z[self.offset(node)] = self.f_x + t * (target - self.f_x);
            if let Some(gi) = self.g_index(node) {
                for a in 0..self.reduced_dim {
                    z[gi + a] = self.g_x[a] + t * (self.g_y[a] - self.g_x[a]);
                }
            }
        }
        z
    }

    /// Maps a reduced gradient back to the ambient space.
    pub fn lift(&self, coords: &[f64]) -> Vec<f64> {
        let d = self.x.len();
        let mut out = vec![0.0; d];
        for (b, c) in self.basis.iter().zip(coords) {
            out.iter_mut().zip(b).for_each(|(o, bi)| *o += c * bi);
        }
        out
    }
}
