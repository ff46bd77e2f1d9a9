//! Exact checks of convexity and 1-smoothness of the spline over a rational lattice.

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::exact::{int, rat, ExactPoint, ExactScalar};
use super::PiecewiseQuadratic;
use crate::report::VerificationReport;

/// Rational lattice `x0_min + i*spacing`, `x1_min + j*spacing` clipped to the box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    pub spacing: ExactScalar,
    pub x0_min: ExactScalar,
    pub x0_max: ExactScalar,
    pub x1_min: ExactScalar,
    pub x1_max: ExactScalar,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            spacing: rat(1, 16),
            x0_min: int(-2),
            x0_max: int(3),
            x1_min: rat(-1, 12),
            x1_max: int(2),
        }
    }
}

impl GridSpec {
    pub fn with_spacing(spacing: ExactScalar) -> Self {
        Self { spacing, ..Self::default() }
    }

    fn axis(lo: &ExactScalar, hi: &ExactScalar, step: &ExactScalar) -> Vec<ExactScalar> {
        let mut out = Vec::new();
        let mut v = lo.clone();
        while v <= *hi {
            out.push(v.clone());
            v += step;
        }
        out
    }

    /// Row-major lattice points together with the row length.
    pub fn points(&self) -> (Vec<ExactPoint>, usize) {
        assert!(self.spacing.is_positive(), "grid spacing must be positive");
        let xs = Self::axis(&self.x0_min, &self.x0_max, &self.spacing);
        let ys = Self::axis(&self.x1_min, &self.x1_max, &self.spacing);
        let pts = ys
            .iter()
            .flat_map(|y| xs.iter().map(move |x| ExactPoint::new(x.clone(), y.clone())))
            .collect();
        (pts, xs.len())
    }
}

#[derive(Debug, Clone)]
pub struct SampledConfig {
    pub grid: GridSpec,
    /// Random lattice pairs on top of the nearest-neighbour pairs.
    pub random_pairs: usize,
    pub seed: u64,
}

impl Default for SampledConfig {
    fn default() -> Self {
        Self { grid: GridSpec::default(), random_pairs: 20_000, seed: 0 }
    }
}

struct Sample {
    p: ExactPoint,
    f: ExactScalar,
    g: ExactPoint,
}

/// Partition, gradient monotonicity, 1-smoothness and both descent-lemma bounds,
/// all decided in exact arithmetic.
pub fn verify_sampled(f: &PiecewiseQuadratic, cfg: &SampledConfig) -> VerificationReport {
    let mut report = VerificationReport::new("sampled lattice");
    let (points, row) = cfg.grid.points();

    let mut samples = Vec::with_capacity(points.len());
    let mut unclaimed = 0usize;
    let mut seam_disagreements = 0usize;
    let mut multi = 0usize;
    for p in points.into_iter().filter(|p| f.in_domain(p)) {
        let owners = f.claiming_pieces(&p);
        if owners.is_empty() {
            unclaimed += 1;
            continue;
        }
        if owners.len() > 1 {
            multi += 1;
            let v0 = f.piece(owners[0]).eval(&p);
            let g0 = f.piece(owners[0]).grad(&p);
            if owners[1..].iter().any(|&k| f.piece(k).eval(&p) != v0 || f.piece(k).grad(&p) != g0) {
                seam_disagreements += 1;
            }
        }
        let quad = f.piece(owners[0]);
        samples.push(Sample { f: quad.eval(&p), g: quad.grad(&p), p });
    }
    report.push(
        "region partition",
        unclaimed == 0,
        format!("{} lattice points, {} unclaimed", samples.len() + unclaimed, unclaimed),
    );
    report.push(
        "seam agreement",
        seam_disagreements == 0,
        format!("{multi} points on seams, {seam_disagreements} disagreements"),
    );

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    if row > 0 {
        for i in 0..samples.len() {
            for j in [i + 1, i + row, i + row + 1] {
                if j < samples.len() {
                    pairs.push((i, j));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    if samples.len() > 1 {
        for _ in 0..cfg.random_pairs {
            let i = rng.gen_range(0..samples.len());
            let j = rng.gen_range(0..samples.len());
            pairs.push((i, j));
        }
    }

    let half = rat(1, 2);
    let (mut monotone_bad, mut smooth_bad, mut lower_bad, mut upper_bad) = (0, 0, 0, 0);
    for &(i, j) in &pairs {
        let (a, b) = (&samples[i], &samples[j]);
        let dp = b.p.sub(&a.p);
        let dg = b.g.sub(&a.g);
        let dist_sq = dp.norm_sq();
        if dg.dot(&dp).is_negative() {
            monotone_bad += 1;
        }
        if dg.norm_sq() > dist_sq {
            smooth_bad += 1;
        }
        let gap = &b.f - &a.f - a.g.dot(&dp);
        if gap.is_negative() {
            lower_bad += 1;
        }
        if gap > &half * &dist_sq {
            upper_bad += 1;
        }
    }
    let n = pairs.len();
    report.push("gradient monotonicity", monotone_bad == 0, format!("{n} pairs, {monotone_bad} violations"));
    report.push("1-smoothness", smooth_bad == 0, format!("{n} pairs, {smooth_bad} violations"));
    report.push(
        "descent lemma",
        lower_bad == 0 && upper_bad == 0 && !pairs.is_empty(),
        format!("{n} pairs, {lower_bad} lower and {upper_bad} upper violations"),
    );
    report
}

/// Number of lattice points inside the domain.
pub fn lattice_size(f: &PiecewiseQuadratic, grid: &GridSpec) -> usize {
    grid.points().0.iter().filter(|p| f.in_domain(p)).count()
}
