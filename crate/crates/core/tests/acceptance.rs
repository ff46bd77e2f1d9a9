//! One line per acceptance criterion; run with `cargo test --test acceptance -- --nocapture`.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smoothcvx::bounds::{analytical_region, global_bound_interval, sum_identity};
use smoothcvx::chain_qcqp::{
    build_problem, closed_form_n1, linspace, oracle_grid_n2, solve, sweep, BoundResult, ChainSpec, Direction,
    Normalization, SolverConfig, Status,
};
use smoothcvx::counterexample::{global_bound_excess, local_cocoercivity_worst, rat, spline, ExactPoint};
use smoothcvx::interpolation::{build_segment_interpolant, combine, eval_interpolant, SegmentInterpolant};
use smoothcvx::PointData;

const SEED: u64 = 20240101;

fn report(n: u32, passed: bool, detail: String) {
    println!("[{}] criterion {n}: {detail}", if passed { "PASS" } else { "FAIL" });
    assert!(passed, "criterion {n} failed: {detail}");
}

fn normalized(s: f64, n: usize, dir: Direction) -> ChainSpec {
    Normalization::default().spec(s, n, dir).unwrap()
}

fn run(spec: &ChainSpec) -> BoundResult {
    solve(&build_problem(spec).unwrap(), &SolverConfig::default())
}

fn band(s: f64, n: usize) -> (f64, f64) {
    (run(&normalized(s, n, Direction::Lower)).value, run(&normalized(s, n, Direction::Upper)).value)
}

fn s_window() -> (f64, f64) {
    let iv = Normalization::default().feasibility_interval();
    (iv.lo, iv.hi)
}

#[test]
fn criterion_01_counterexample() {
    let start = Instant::now();
    let f = spline();
    let y = ExactPoint::from_ratios((2, 1), (0, 1));
    let fy = f.eval(&y).unwrap();
    let g = f.grad(&y).unwrap();
    let w = f.violation_witness().unwrap();
    let lhs = rat(1, 2) * g.norm_sq();
    let elapsed = start.elapsed();
    let passed = fy == rat(16991, 23040)
        && (g.x0.clone(), g.x1.clone()) == (rat(253, 240), rat(77, 120))
        && lhs == rat(17545, 23040)
        && w.lhs == lhs
        && w.lhs > w.rhs
        && elapsed < Duration::from_secs(1);
    report(1, passed, format!("F(2,0) = {fy}, F'(2,0) = ({}, {}), LHS = {lhs} > RHS = {} in {elapsed:.2?}", g.x0, g.x1, w.rhs));
}

#[test]
fn criterion_02_seams_and_spectra() {
    let f = spline();
    let seams = f.verify_c1_seams();
    let spectra = f.verify_smooth_convex_pieces();
    let mut eig_ok = true;
    for (k, want) in [(1, [1, 1]), (2, [0, 1]), (3, [1, 1]), (4, [0, 1])] {
        let h = &f.piece(k).a;
        // Eigenvalues {a, b} are fixed by the trace a + b and the determinant a b.
        eig_ok &= h.trace() == rat(want[0] + want[1], 1) && h.det() == rat(want[0] * want[1], 1);
    }
    let passed = seams.checks.len() == 3 && seams.all_passed() && spectra.all_passed() && eig_ok;
    report(2, passed, format!("{} seam identities, piece spectra {{1,1}},{{0,1}},{{1,1}},{{0,1}} exact: {}", seams.checks.len(), eig_ok));
}

#[test]
fn criterion_03_global_bound_on_spline() {
    let start = Instant::now();
    let excess = global_bound_excess(&spline(), 10_000, SEED);
    let elapsed = start.elapsed();
    let passed = excess <= 1e-12 && elapsed < Duration::from_secs(10);
    report(3, passed, format!("10000 pairs, worst excess {excess:.3e} (tol 1e-12) in {elapsed:.2?}"));
}

#[test]
fn criterion_04_local_cocoercivity_on_spline() {
    let worst = local_cocoercivity_worst(&spline(), 1000, SEED);
    report(4, worst >= -1e-12, format!("1000 pairs within the boundary distance, worst gap {worst:.3e} (tol -1e-12)"));
}

#[test]
fn criterion_05_sum_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for n in 1..=50usize {
        for _ in 0..100 {
            let xi = rng.gen_range(0.0..=n as f64);
            let (direct, closed) = sum_identity(n, xi).unwrap();
            worst = worst.max((direct - closed).abs() / (n * n) as f64);
        }
    }
    let close = |a: (f64, f64), v: f64| (a.0 - v).abs() <= 1e-12 && (a.1 - v).abs() <= 1e-12;
    let mut hand = close(sum_identity(4, 1.5).unwrap(), 6.25);
    for n in 1..=50usize {
        hand &= close(sum_identity(n, n as f64).unwrap(), 0.0) && close(sum_identity(n, 0.0).unwrap(), (n * n) as f64);
    }
    report(5, worst <= 1e-9 && hand, format!("5000 random cases, worst |direct - closed| / N^2 = {worst:.3e}; hand cases exact: {hand}"));
}

#[test]
fn criterion_06_region() {
    let mut nested = true;
    let mut strict = true;
    for i in 0..=1000 {
        let t = i as f64 / 1000.0;
        let (inner, outer) = analytical_region(t).unwrap();
        nested &= outer.lo <= inner.lo && inner.lo <= inner.hi && inner.hi <= outer.hi;
        if i > 0 && i < 1000 {
            strict &= outer.lo < inner.lo || inner.hi < outer.hi;
        }
    }
    let collapse = [0.0, 1.0].iter().all(|&t| {
        let (inner, outer) = analytical_region(t).unwrap();
        inner.lo == inner.hi && outer.lo == outer.hi && inner.lo == outer.lo
    });
    report(6, nested && strict && collapse, format!("1001 rows: nested {nested}, strict inside {strict}, endpoints collapse {collapse}"));
}

#[test]
fn criterion_07_solver_vs_closed_form() {
    let (lo, hi) = s_window();
    let mut worst = 0.0f64;
    for s in linspace(lo, hi, 50) {
        for dir in [Direction::Upper, Direction::Lower] {
            let spec = normalized(s, 1, dir);
            let (b, u, _) = closed_form_n1(&spec);
            let want = if dir == Direction::Upper { u } else { b };
            let r = run(&spec);
            worst = worst.max(if r.status == Status::Optimal { (r.value - want).abs() } else { f64::INFINITY });
        }
    }
    let flagged = [Direction::Upper, Direction::Lower].iter().all(|&d| run(&normalized(0.45, 1, d)).status == Status::Infeasible);
    report(7, worst <= 1e-6 && flagged, format!("50 s-values x 2 directions, worst deviation {worst:.3e}; s = 0.45 infeasible: {flagged}"));
}

/// Ten seeded N = 2 instances: normalized data at random `s`, and data of
/// random 1-smooth convex quadratics in the plane with nonzero `g_x`.
fn oracle_instances() -> Vec<ChainSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (lo, hi) = s_window();
    let mut out = Vec::new();
    for _ in 0..5 {
        out.push(normalized(rng.gen_range(lo..hi), 2, Direction::Upper));
    }
    for _ in 0..5 {
        let (a, b, c): (f64, f64, f64) = (rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5), rng.gen_range(-0.25..0.25));
        let lin = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        // Hessian [[a + |c|, c], [c, b + |c|]] has eigenvalues in [0, 1].
        let h = [[a + c.abs(), c], [c, b + c.abs()]];
        let grad = |z: [f64; 2]| vec![h[0][0] * z[0] + h[0][1] * z[1] + lin[0], h[1][0] * z[0] + h[1][1] * z[1] + lin[1]];
        let value = |z: [f64; 2]| 0.5 * (z[0] * (h[0][0] * z[0] + h[0][1] * z[1]) + z[1] * (h[1][0] * z[0] + h[1][1] * z[1])) + lin[0] * z[0] + lin[1] * z[1];
        let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let y = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        out.push(ChainSpec { l: 1.0, x: x.to_vec(), y: y.to_vec(), f_x: value(x), g_x: grad(x), g_y: grad(y), n: 2, direction: Direction::Upper });
    }
    out
}

#[test]
fn criterion_08_solver_vs_oracle() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for spec in oracle_instances() {
        let (ob, ou) = oracle_grid_n2(&spec, 200).unwrap();
        let b = run(&spec.with_direction(Direction::Lower)).value;
        let u = run(&spec.with_direction(Direction::Upper)).value;
        worst = worst.max((b - ob).abs()).max((u - ou).abs());
    }
    let elapsed = start.elapsed();
    report(8, worst <= 2e-3 && elapsed < Duration::from_secs(60), format!("10 instances, worst |solver - oracle| = {worst:.3e} (tol 2e-3) in {elapsed:.2?}"));
}

#[test]
fn criterion_09_sandwich() {
    let (lo, hi) = s_window();
    let base = Normalization::default();
    let rows = sweep(&base, &linspace(lo, hi, 60), &[1, 2, 5, 50], &SolverConfig::default(), 4);
    let mut worst = f64::NEG_INFINITY;
    let mut checked = 0;
    for row in rows.iter().filter(|r| r.status == Status::Optimal) {
        let spec = base.spec(row.s, row.n, Direction::Upper).unwrap();
        let px = PointData::new(spec.x.clone(), spec.f_x, spec.g_x.clone()).unwrap();
        let py = PointData::new(spec.y.clone(), 0.0, spec.g_y.clone()).unwrap();
        let iv = global_bound_interval(spec.l, &px, &py).unwrap();
        worst = worst.max(iv.lo - row.lower).max(row.upper - iv.hi);
        checked += 1;
    }
    report(9, checked == rows.len() && worst <= 1e-6, format!("{checked}/{} Optimal rows, worst excursion {worst:.3e} (tol 1e-6)", rows.len()));
}

#[test]
fn criterion_10_band_nesting() {
    let mut nested = true;
    let mut overlap = true;
    let mut detail = Vec::new();
    for s in [0.55, 0.6, 0.65] {
        let (b1, u1) = band(s, 1);
        let (b5, u5) = band(s, 5);
        let (b50, u50) = band(s, 50);
        nested &= b1 <= b5 + 1e-6 && u5 <= u1 + 1e-6;
        let width = 0.02 * (u1 - b1);
        overlap &= (u50 - u5).abs() <= width && (b50 - b5).abs() <= width;
        detail.push(format!("s={s}: B1={b1:.4} B5={b5:.4} B50={b50:.4} U1={u1:.4} U5={u5:.4} U50={u50:.4}"));
    }
    report(10, nested && overlap, format!("B1 <= B5 and U5 <= U1: {nested}; N=5/N=50 overlap: {overlap}; {}", detail.join("; ")));
}

fn shape(interp: &SegmentInterpolant, l: f64, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let dir: Vec<f64> = interp.knots[interp.n()].x.iter().zip(&interp.knots[0].x).map(|(a, b)| a - b).collect();
    let lip = l * dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    let (mut convex, mut smooth) = (0.0f64, 0.0f64);
    let mut triples = 0;
    while triples < 1000 {
        let mut t = [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()];
        t.sort_by(f64::total_cmp);
        if t[1] - t[0] < 1e-3 || t[2] - t[1] < 1e-3 {
            continue;
        }
        triples += 1;
        let e: Vec<(f64, f64)> = t.iter().map(|&u| eval_interpolant(interp, u).unwrap()).collect();
        convex = convex.max((e[1].0 - e[0].0) / (t[1] - t[0]) - (e[2].0 - e[1].0) / (t[2] - t[1]));
        smooth = smooth.max((e[2].1 - e[0].1).abs() - lip * (t[2] - t[0]));
    }
    (convex, smooth)
}

#[test]
fn criterion_11_interpolation_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut knots, mut convex, mut smooth, mut endpoint, mut mid) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut built = true;
    for s in [0.55, 0.65] {
        for n in [2, 5] {
            let mut pair = Vec::new();
            for dir in [Direction::Upper, Direction::Lower] {
                let r = run(&normalized(s, n, dir));
                let Ok(interp) = build_segment_interpolant(1.0, &r.chain) else {
                    built = false;
                    continue;
                };
                let d: Vec<f64> = r.chain[n].x.iter().zip(&r.chain[0].x).map(|(a, b)| a - b).collect();
                for (i, p) in r.chain.iter().enumerate() {
                    let (v, dv) = eval_interpolant(&interp, i as f64 / n as f64).unwrap();
                    let dg: f64 = p.g.iter().zip(&d).map(|(a, b)| a * b).sum();
                    knots = knots.max((v - p.f).abs()).max((dv - dg).abs());
                }
                let (c, m) = shape(&interp, 1.0, &mut rng);
                convex = convex.max(c);
                smooth = smooth.max(m);
                endpoint = endpoint.max((eval_interpolant(&interp, 1.0).unwrap().0 - r.value).abs());
                pair.push((interp, r.value));
            }
            if let [(fu, u), (fb, b)] = &pair[..] {
                let half = combine(fu, fb, 0.5).unwrap();
                mid = mid.max((eval_interpolant(&half, 1.0).unwrap().0 - 0.5 * (u + b)).abs());
            }
        }
    }
    let passed = built && knots <= 1e-10 && convex <= 1e-9 && smooth <= 1e-9 && endpoint <= 1e-6 && mid <= 1e-6;
    report(11, passed, format!("built {built}; knots {knots:.1e}, convexity {convex:.1e}, smoothness {smooth:.1e}, endpoint {endpoint:.1e}, midpoint {mid:.1e}"));
}

#[test]
fn criterion_12_determinism() {
    let csv = || {
        let out = Command::new(env!("CARGO_BIN_EXE_smoothcvx")).args(["sweep", "--seed", "42"]).output().unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let (a, b) = (csv(), csv());
    report(12, a == b && !a.is_empty(), format!("two default sweeps, {} bytes each, identical: {}", a.len(), a == b));
}
