//! Brute-force reference values for two-step chains.

use super::problem::build_problem;
use super::ChainSpec;
use crate::error::{Error, Result};
use crate::vector::{dot, norm};

/// Grid search for `(B_2, U_2)`.
///
/// The free gradient `g_1` ranges over a square of half-width
/// `||g_x|| + ||g_y|| + L ||y - x||` around the origin of the reduced plane, with
/// `resolution` samples per axis. For a fixed `g_1` both pairs leave an interval for
/// the next value, so `f_2` ranges over `f_x + [a_0 + a_1, b_0 + b_1]`.
///
/// Both extremes are convex problems in `g_1`, so the grid is then re-centred on the
/// best sample and shrunk a fixed number of times. If no sample satisfies the
/// constraints exactly, the grid is instead re-centred on the sample of least
/// violation, which locates feasible sets thinner than a grid cell. When even the finest grid misses, every constraint is relaxed by
/// the amount it can change within half a cell; this resolves instances whose
/// feasible gradient set has empty interior.
pub fn oracle_grid_n2(spec: &ChainSpec, resolution: usize) -> Result<(f64, f64)> {
    if spec.n != 2 {
        return Err(Error::InvalidInput(format!("oracle needs N = 2, got {}", spec.n)));
    }
    if resolution < 2 {
        return Err(Error::InvalidInput("resolution must be at least 2".into()));
    }
    let p = build_problem(spec)?;
    if p.reduced_dim > 2 {
        return Err(Error::InvalidInput(format!("oracle needs reduced dimension <= 2, got {}", p.reduced_dim)));
    }
    let pad = |v: &[f64]| {
        let mut out = [0.0; 2];
        out[..v.len()].copy_from_slice(v);
        out
    };
    let delta = pad(&p.delta);
    let g0 = pad(&p.g_x);
    let g2 = pad(&p.g_y);
    let radius = norm(&p.g_x_ambient) + norm(&p.g_y_ambient) + p.l * norm(&delta);

    let data = Data { l: p.l, delta, g0, g2 };

    let coarse = Grid { center: [0.0, 0.0], half: radius, resolution };
    let found = match (coarse.extreme(&data, Extreme::Lower), coarse.extreme(&data, Extreme::Upper)) {
        (Some(lo), Some(hi)) => Some((coarse.refine(&data, Extreme::Lower, lo), coarse.refine(&data, Extreme::Upper, hi))),
        _ => thin_search(&data, coarse),
    };
    let (lo, hi) = found.ok_or(Error::NoFeasiblePoint)?;
    Ok((p.f_x + lo, p.f_x + hi))
}

/// Zooms onto the least violated sample until a feasible one appears, then relaxes.
fn thin_search(data: &Data, mut grid: Grid) -> Option<(f64, f64)> {
    for _ in 0..ZOOM_LEVELS {
        if let Some(band) = grid.search(data, 0.0) {
            return Some(band);
        }
        grid = Grid { center: grid.least_violated(data), half: ZOOM_MARGIN * grid.spacing(), ..grid };
    }
    // A sample at distance r from a feasible disc violates it by ||delta|| r / 2 + r^2 / L.
    let r = grid.spacing() * std::f64::consts::FRAC_1_SQRT_2;
    grid.search(data, norm(&data.delta) * r / 2.0 + r * r / data.l)
}

const ZOOM_LEVELS: usize = 12;
/// Half-width of a zoomed grid, in cells of the previous one.
const ZOOM_MARGIN: f64 = 4.0;

struct Data {
    l: f64,
    delta: [f64; 2],
    g0: [f64; 2],
    g2: [f64; 2],
}

impl Data {
    /// Unrelaxed bounds `(a, b)` on `f_{i+1} - f_i` for one half step.
    fn step(&self, gi: &[f64; 2], gj: &[f64; 2]) -> (f64, f64) {
        let diff = [gj[0] - gi[0], gj[1] - gi[1]];
        let q = dot(&diff, &diff) / (2.0 * self.l);
        (0.5 * dot(gi, &self.delta) + q, 0.5 * dot(gj, &self.delta) - q)
    }

    /// Range of `f_2 - f_0` for a fixed middle gradient, with constraints relaxed by `eps`.
    fn f2_range(&self, g1: &[f64; 2], eps: f64) -> Option<(f64, f64)> {
        let (a0, b0) = self.step(&self.g0, g1);
        let (a1, b1) = self.step(g1, &self.g2);
        (a0 - eps <= b0 + eps && a1 - eps <= b1 + eps).then_some((a0 + a1 - 2.0 * eps, b0 + b1 + 2.0 * eps))
    }

    fn violation(&self, g1: &[f64; 2]) -> f64 {
        let (a0, b0) = self.step(&self.g0, g1);
        let (a1, b1) = self.step(g1, &self.g2);
        (a0 - b0).max(a1 - b1)
    }
}

#[derive(Clone, Copy)]
enum Extreme {
    Lower,
    Upper,
}

impl Extreme {
    fn better(self, a: f64, b: f64) -> bool {
        match self {
            Extreme::Lower => a < b,
            Extreme::Upper => a > b,
        }
    }

    fn pick(self, band: (f64, f64)) -> f64 {
        match self {
            Extreme::Lower => band.0,
            Extreme::Upper => band.1,
        }
    }
}

#[derive(Clone, Copy)]
struct Grid {
    center: [f64; 2],
    half: f64,
    resolution: usize,
}

impl Grid {
    fn spacing(&self) -> f64 {
        2.0 * self.half / (self.resolution - 1) as f64
    }

    fn samples(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        let h = self.spacing();
        let n = self.resolution;
        (0..n).flat_map(move |i| {
            (0..n).map(move |j| [self.center[0] - self.half + i as f64 * h, self.center[1] - self.half + j as f64 * h])
        })
    }

    fn search(&self, data: &Data, eps: f64) -> Option<(f64, f64)> {
        self.samples()
            .filter_map(|g1| data.f2_range(&g1, eps))
            .reduce(|(b, u), (lo, hi)| (b.min(lo), u.max(hi)))
    }

    /// Best feasible sample and its value.
    fn extreme(&self, data: &Data, which: Extreme) -> Option<(f64, [f64; 2])> {
        self.samples()
            .filter_map(|g1| data.f2_range(&g1, 0.0).map(|band| (which.pick(band), g1)))
            .reduce(|best, cur| if which.better(cur.0, best.0) { cur } else { best })
    }

    fn refine(&self, data: &Data, which: Extreme, start: (f64, [f64; 2])) -> f64 {
        let mut best = start;
        let mut grid = *self;
        for _ in 0..ZOOM_LEVELS {
            grid = Grid { center: best.1, half: ZOOM_MARGIN * grid.spacing(), ..grid };
            if let Some(cur) = grid.extreme(data, which) {
                if which.better(cur.0, best.0) {
                    best = cur;
                }
            }
        }
        best.0
    }

    fn least_violated(&self, data: &Data) -> [f64; 2] {
        self.samples()
            .map(|g1| (data.violation(&g1), g1))
            .fold((f64::INFINITY, self.center), |best, cur| if cur.0 < best.0 { cur } else { best })
            .1
    }
}
