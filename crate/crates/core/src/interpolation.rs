//! Smooth convex interpolants of chain data along a segment.
//!
//! Two data points `(x_i, f_i, g_i)` that satisfy both two-point inequalities are
//! interpolated by the convex envelope of their quadratic upper surrogates
//! `q_i(z) = f_i + <g_i, z - x_i> + (L/2) ||z - x_i||^2`. Gluing the envelopes of
//! adjacent chain points gives a function along `[x, y]` that is convex,
//! L-smooth and reproduces every knot value and gradient.

use serde::Serialize;

use crate::bounds::PointData;
use crate::error::{Error, Result};
use crate::vector::{axpy, check_dims, dot, norm_sq, sub};

/// Absolute slack allowed in the two-point inequalities.
pub const FEASIBILITY_SLACK: f64 = 1e-12;
const KNOT_TOL: f64 = 1e-9;

/// `q(z) = value + <slope, z - center> + (L/2) ||z - center||^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticSurrogate {
    pub center: Vec<f64>,
    pub value: f64,
    pub slope: Vec<f64>,
    #[serde(rename = "L")]
    pub l: f64,
}

impl QuadraticSurrogate {
    pub fn new(p: &PointData, l: f64) -> Result<Self> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::Range(format!("L must be positive, got {l}")));
        }
        Ok(Self { center: p.x.clone(), value: p.f, slope: p.g.clone(), l })
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        let d = sub(z, &self.center);
        self.value + dot(&self.slope, &d) + 0.5 * self.l * norm_sq(&d)
    }

    pub fn grad(&self, z: &[f64]) -> Vec<f64> {
        axpy(&self.slope, self.l, &sub(z, &self.center))
    }
}

/// Both two-point inequalities between `p0` and `p1`:
/// `f_j >= f_i + <g_i, x_j - x_i> + ||g_j - g_i||^2 / (2L)` for `(i, j) = (0, 1), (1, 0)`.
pub fn two_point_feasible(l: f64, p0: &PointData, p1: &PointData) -> Result<bool> {
    check_dims(p0.dim(), p1.dim())?;
    check_dims(p0.dim(), p0.g.len())?;
    check_dims(p1.dim(), p1.g.len())?;
    let curv = norm_sq(&sub(&p1.g, &p0.g)) / (2.0 * l);
    let dx = sub(&p1.x, &p0.x);
    let forward = p1.f - p0.f - dot(&p0.g, &dx) - curv;
    let backward = p0.f - p1.f + dot(&p1.g, &dx) - curv;
    Ok(forward >= -FEASIBILITY_SLACK && backward >= -FEASIBILITY_SLACK)
}

/// Convex envelope of `min(q_0, q_1)` for interpolable two-point data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoPointEnvelope {
    pub p0: PointData,
    pub p1: PointData,
    #[serde(rename = "L")]
    pub l: f64,
    /// Parameters `tau` along `p0.x + tau (p1.x - p0.x)` where the envelope leaves
    /// `q_0` and joins `q_1`; between them it is the common tangent region.
    /// `None` when the surrogates differ by a constant.
    pub touch: Option<(f64, f64)>,
    /// `(g_1 - g_0)/L + x_0 - x_1`: offset between the contact points of a tangent plane.
    #[serde(skip)]
    w: Vec<f64>,
    #[serde(skip)]
    q: [QuadraticSurrogate; 2],
}

impl TwoPointEnvelope {
    pub fn new(l: f64, p0: PointData, p1: PointData) -> Result<Self> {
        if !two_point_feasible(l, &p0, &p1)? {
            return Err(Error::InfeasibleData(0, 1));
        }
        let q = [QuadraticSurrogate::new(&p0, l)?, QuadraticSurrogate::new(&p1, l)?];
        let w = axpy(&sub(&p0.x, &p1.x), 1.0 / l, &sub(&p1.g, &p0.g));
        let mut env = Self { p0, p1, l, touch: None, w, q };
        let (lam0, lam1) = (env.raw_weight(&env.p0.x), env.raw_weight(&env.p1.x));
        if lam0.is_finite() && lam1.is_finite() && lam0 != lam1 {
            let at = |lam: f64| (lam - lam0) / (lam1 - lam0);
            env.touch = Some((at(1.0), at(0.0)));
        }
        Ok(env)
    }

    /// Unclamped minimizer over `lambda` of
    /// `lambda q_0(z) + (1 - lambda) q_1(z) - (L/2) ||w||^2 lambda (1 - lambda)`.
    fn raw_weight(&self, z: &[f64]) -> f64 {
        let lw2 = self.l * norm_sq(&self.w);
        if lw2 <= f64::MIN_POSITIVE {
            return f64::NAN;
        }
        (self.q[1].eval(z) - self.q[0].eval(z) + 0.5 * lw2) / lw2
    }

    /// Weight on `q_0` in the infimal combination at `z`.
    pub fn weight(&self, z: &[f64]) -> f64 {
        let lam = self.raw_weight(z);
        if lam.is_nan() {
            return if self.q[0].eval(z) <= self.q[1].eval(z) { 1.0 } else { 0.0 };
        }
        lam.clamp(0.0, 1.0)
    }

    /// Value of the combination objective for a fixed weight.
    pub fn combination_value(&self, z: &[f64], lambda: f64) -> f64 {
        lambda * self.q[0].eval(z) + (1.0 - lambda) * self.q[1].eval(z)
            - 0.5 * self.l * norm_sq(&self.w) * lambda * (1.0 - lambda)
    }

    pub fn surrogates(&self) -> &[QuadraticSurrogate; 2] {
        &self.q
    }
}

/// Envelope value and gradient at `z`.
pub fn envelope_eval(env: &TwoPointEnvelope, z: &[f64]) -> Result<(f64, Vec<f64>)> {
    check_dims(env.p0.dim(), z.len())?;
    let lam = env.weight(z);
    let value = env.combination_value(z, lam);
    let g0 = env.q[0].grad(z);
    let g1 = env.q[1].grad(z);
    let grad = g0.iter().zip(&g1).map(|(a, b)| lam * a + (1.0 - lam) * b).collect();
    Ok((value, grad))
}

/// Piecewise interpolant along `[x, y]`: on the `k`-th segment it is a weighted sum
/// of envelopes, one per layer. Built interpolants have one layer; [`combine`]
/// produces two.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentInterpolant {
    /// Data at `x + (i/N)(y - x)`; for combined interpolants the weighted data.
    pub knots: Vec<PointData>,
    pub layers: Vec<Layer>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Layer {
    pub weight: f64,
    pub segments: Vec<TwoPointEnvelope>,
}

impl SegmentInterpolant {
    pub fn n(&self) -> usize {
        self.knots.len() - 1
    }

    fn start(&self) -> &[f64] {
        &self.knots[0].x
    }

    fn direction(&self) -> Vec<f64> {
        sub(&self.knots[self.n()].x, self.start())
    }

    pub fn segments(&self) -> &[TwoPointEnvelope] {
        &self.layers[0].segments
    }
}

/// Glues the envelopes of adjacent chain points.
pub fn build_segment_interpolant(l: f64, chain: &[PointData]) -> Result<SegmentInterpolant> {
    if chain.len() < 2 {
        return Err(Error::InvalidInput("a chain needs at least two points".into()));
    }
    let mut segments = Vec::with_capacity(chain.len() - 1);
    for (k, pair) in chain.windows(2).enumerate() {
        let env = TwoPointEnvelope::new(l, pair[0].clone(), pair[1].clone()).map_err(|e| match e {
            Error::InfeasibleData(..) => Error::InfeasibleData(k, k + 1),
            other => other,
        })?;
        segments.push(env);
    }
    let direction = sub(&chain[chain.len() - 1].x, &chain[0].x);
    for (k, env) in segments.iter().enumerate() {
        for p in [&env.p0, &env.p1] {
            let (v, g) = envelope_eval(env, &p.x)?;
            let scale = 1.0 + p.f.abs() + dot(&p.g, &direction).abs();
            if (v - p.f).abs() > KNOT_TOL * scale || (dot(&g, &direction) - dot(&p.g, &direction)).abs() > KNOT_TOL * scale {
                return Err(Error::InfeasibleData(k, k + 1));
            }
        }
    }
    Ok(SegmentInterpolant { knots: chain.to_vec(), layers: vec![Layer { weight: 1.0, segments }] })
}

/// Value and derivative in `t` of the interpolant at `x + t (y - x)`.
pub fn eval_interpolant(interp: &SegmentInterpolant, t: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Range(format!("t = {t} outside [0, 1]")));
    }
    let n = interp.n();
    let k = ((t * n as f64).floor() as usize).min(n - 1);
    let dir = interp.direction();
    let z = axpy(interp.start(), t, &dir);
    let mut value = 0.0;
    let mut slope = 0.0;
    for layer in &interp.layers {
        let (v, g) = envelope_eval(&layer.segments[k], &z)?;
        value += layer.weight * v;
        slope += layer.weight * dot(&g, &dir);
    }
    Ok((value, slope))
}

/// Pointwise `lambda * fu + (1 - lambda) * fb`.
pub fn combine(fu: &SegmentInterpolant, fb: &SegmentInterpolant, lambda: f64) -> Result<SegmentInterpolant> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Range(format!("lambda = {lambda} outside [0, 1]")));
    }
    if fu.knots.len() != fb.knots.len() {
        return Err(Error::Mismatch(format!("{} knots vs {}", fu.knots.len(), fb.knots.len())));
    }
    if fu.knots.iter().zip(&fb.knots).any(|(a, b)| a.x != b.x) {
        return Err(Error::Mismatch("knot locations differ".into()));
    }
    let knots = fu
        .knots
        .iter()
        .zip(&fb.knots)
        .map(|(a, b)| PointData {
            x: a.x.clone(),
            f: lambda * a.f + (1.0 - lambda) * b.f,
            g: a.g.iter().zip(&b.g).map(|(u, v)| lambda * u + (1.0 - lambda) * v).collect(),
        })
        .collect();
    let layers = [(fu, lambda), (fb, 1.0 - lambda)]
        .into_iter()
        .flat_map(|(src, w)| src.layers.iter().map(move |layer| Layer { weight: w * layer.weight, segments: layer.segments.clone() }))
        .filter(|layer| layer.weight != 0.0)
        .collect();
    Ok(SegmentInterpolant { knots, layers })
}

/// `(t, value, d value / dt)` at `steps + 1` equally spaced parameters.
pub fn sample(interp: &SegmentInterpolant, steps: usize) -> Result<Vec<(f64, f64, f64)>> {
    let steps = steps.max(1);
    (0..=steps)
        .map(|i| {
            let t = if i == steps { 1.0 } else { i as f64 / steps as f64 };
            eval_interpolant(interp, t).map(|(v, d)| (t, v, d))
        })
        .collect()
}
