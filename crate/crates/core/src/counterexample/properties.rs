//! Randomized checks of the analytical bounds on the spline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ExactPoint, PiecewiseQuadratic};
use crate::bounds::{cocoercivity_gap, global_bound_interval, local_condition, HalfPlaneDistance, PointData};
use crate::numfmt::rational_to_f64;
use crate::report::VerificationReport;

/// Absolute tolerance for inequalities evaluated on float conversions of exact data.
pub const FLOAT_TOL: f64 = 1e-12;

/// Sampling box for random domain points, `x0` in `[-2, 3]`, `x1` in `(-23/240, 2]`.
const X0_RANGE: (f64, f64) = (-2.0, 3.0);
const X1_MAX: f64 = 2.0;

/// Float data of the spline at `z`, or `None` outside the domain.
pub fn sample_data(f: &PiecewiseQuadratic, z: [f64; 2]) -> Option<PointData> {
    let p = ExactPoint::from_f64(z[0], z[1])?;
    let value = f.eval(&p).ok()?;
    let grad = f.grad(&p).ok()?;
    Some(PointData { x: z.to_vec(), f: rational_to_f64(&value), g: grad.to_f64().to_vec() })
}

fn random_domain_data(f: &PiecewiseQuadratic, rng: &mut ChaCha8Rng) -> PointData {
    let x1_min = -23.0 / 240.0;
    loop {
        let z = [rng.gen_range(X0_RANGE.0..=X0_RANGE.1), rng.gen_range(x1_min..=X1_MAX)];
        if let Some(d) = sample_data(f, z) {
            return d;
        }
    }
}

/// Worst violation of `f(y) in global_bound_interval(1, x, y)` over random domain pairs.
pub fn global_bound_excess(f: &PiecewiseQuadratic, pairs: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    let mut done = 0;
    while done < pairs {
        let px = random_domain_data(f, &mut rng);
        let py = random_domain_data(f, &mut rng);
        let Ok(iv) = global_bound_interval(1.0, &px, &py) else { continue };
        worst = worst.max(iv.lo - py.f).max(py.f - iv.hi);
        done += 1;
    }
    worst
}

/// Most negative co-coercivity gap over random pairs with `||x - y||` below the
/// distance from `y` to the domain boundary.
pub fn local_cocoercivity_worst(f: &PiecewiseQuadratic, pairs: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let boundary = HalfPlaneDistance::counterexample_domain();
    let mut worst = f64::INFINITY;
    let mut done = 0;
    while done < pairs {
        let py = random_domain_data(f, &mut rng);
        let dist = boundary.distance(&py.x);
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        let radius = dist * rng.gen::<f64>();
        let z = [py.x[0] + radius * angle.cos(), py.x[1] + radius * angle.sin()];
        if !local_condition(&z, &py.x, dist) {
            continue;
        }
        let Some(px) = sample_data(f, z) else { continue };
        for (a, b) in [(&px, &py), (&py, &px)] {
            worst = worst.min(cocoercivity_gap(1.0, a, b).expect("planar data"));
        }
        done += 1;
    }
    worst
}

/// Both randomized checks as a report.
pub fn verify_bounds_on_spline(f: &PiecewiseQuadratic, global_pairs: usize, local_pairs: usize, seed: u64) -> VerificationReport {
    let mut report = VerificationReport::new("bounds on F");
    let excess = global_bound_excess(f, global_pairs, seed);
    report.push(
        "global bound",
        excess <= FLOAT_TOL,
        format!("{global_pairs} random pairs, worst excess {excess:.3e}"),
    );
    let gap = local_cocoercivity_worst(f, local_pairs, seed.wrapping_add(1));
    report.push(
        "local co-coercivity",
        gap >= -FLOAT_TOL,
        format!("{local_pairs} random pairs within the boundary distance, worst gap {gap:.3e}"),
    );
    report
}
