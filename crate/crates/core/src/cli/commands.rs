use std::fmt::Write as _;
use std::path::Path;

use num_traits::Signed;
use serde::Serialize;

use super::svg::{ramp, Plot, PALETTE};
use super::{Cli, Command, Failure, Format, Outcome, EXIT_ALL_INFEASIBLE, EXIT_OK, EXIT_SOLVER_FAILURE, EXIT_VERIFY_FAILED};
use crate::bounds::analytical_region;
use crate::chain_qcqp::{build_problem, linspace, solve, sweep, BoundResult, ChainSpec, Direction, Normalization, SolverConfig, Status, SweepRow};
use crate::counterexample::{rat, spline, verify_bounds_on_spline, verify_sampled, ExactPoint, ExactScalar, GridSpec, SampledConfig};
use crate::interpolation::{build_segment_interpolant, combine, sample, SegmentInterpolant};
use crate::numfmt::{fmt17, parse_rational, rational_to_f64};
use crate::report::VerificationReport;

const GLOBAL_BOUND_PAIRS: usize = 10_000;
const LOCAL_PAIRS: usize = 1_000;
/// Upper limit on SVG heat-map cells per axis.
const SVG_CELLS: usize = 120;

pub(super) fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Verify { grid_spacing, perturb_piece } => verify(cli, grid_spacing, *perturb_piece),
        Command::Contour { xmin, xmax, ymin, ymax, nx, ny } => contour(cli.format, [xmin, xmax, ymin, ymax], *nx, *ny),
        Command::Region { steps } => region(cli.format, *steps),
        Command::Sweep { s_min, s_max, s_steps, n_list, workers, solver } => {
            let window = Normalization::default().feasibility_interval();
            let grid = linspace(s_min.unwrap_or(window.lo), s_max.unwrap_or(window.hi), *s_steps);
            run_sweep(cli.format, &grid, n_list, &solver.config()?, *workers)
        }
        Command::Solve { input, solver } => run_solve(cli.format, input, &solver.config()?),
        Command::Interpolate { input, t_steps, lambda, solver } => {
            interpolate(cli.format, input, *t_steps, *lambda, &solver.config()?)
        }
    }
}

fn reject_svg(format: Format, command: &str) -> Result<(), Failure> {
    if format == Format::Svg {
        return Err(Failure::usage(format!("--format svg is not available for {command}")));
    }
    Ok(())
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn verify(cli: &Cli, spacing: &str, perturb: Option<usize>) -> Result<Outcome, Failure> {
    reject_svg(cli.format, "verify")?;
    let spacing = parse_rational(spacing).map_err(|e| Failure::usage(e.to_string()))?;
    if !spacing.is_positive() {
        return Err(Failure::usage("--grid-spacing must be positive"));
    }
    let mut f = spline();
    if let Some(k) = perturb {
        if !(1..=f.pieces.len()).contains(&k) {
            return Err(Failure::usage(format!("--perturb-piece must be in 1..={}", f.pieces.len())));
        }
        f = f.with_constant_offset(k, rat(1, 100));
    }
    let mut report = VerificationReport::new("verify");
    report.extend(f.verify_c1_seams());
    report.extend(f.verify_smooth_convex_pieces());
    report.extend(f.verify_violation());
    let cfg = SampledConfig { grid: GridSpec::with_spacing(spacing), seed: cli.seed, ..SampledConfig::default() };
    report.extend(verify_sampled(&f, &cfg));
    report.extend(verify_bounds_on_spline(&f, GLOBAL_BOUND_PAIRS, LOCAL_PAIRS, cli.seed));
    let text = match cli.format {
        Format::Json => format!("{}\n", report.to_json()),
        _ => format!("{report}\n"),
    };
    let code = if report.all_passed() { EXIT_OK } else { EXIT_VERIFY_FAILED };
    Ok(Outcome { text, code })
}

#[derive(Serialize)]
struct ContourRow {
    x0: f64,
    x1: f64,
    piece: usize,
    value: f64,
}

fn contour(format: Format, bounds: [&String; 4], nx: usize, ny: usize) -> Result<Outcome, Failure> {
    if nx < 2 || ny < 2 {
        return Err(Failure::usage("--nx and --ny must be at least 2"));
    }
    let parsed: Vec<ExactScalar> = bounds
        .iter()
        .map(|s| parse_rational(s).map_err(|e| Failure::usage(e.to_string())))
        .collect::<Result<_, _>>()?;
    let [xmin, xmax, ymin, ymax] = <[ExactScalar; 4]>::try_from(parsed).expect("four bounds");
    if xmin >= xmax || ymin >= ymax {
        return Err(Failure::usage("contour bounds must satisfy min < max"));
    }
    let axis = |lo: &ExactScalar, hi: &ExactScalar, n: usize| -> Vec<ExactScalar> {
        let step = (hi - lo) / ExactScalar::from_integer((n - 1).into());
        (0..n).map(|i| lo + &step * ExactScalar::from_integer(i.into())).collect()
    };
    let xs = axis(&xmin, &xmax, nx);
    let ys = axis(&ymin, &ymax, ny);
    let f = spline();
    let mut rows = Vec::with_capacity(nx * ny);
    for y in &ys {
        for x in &xs {
            let p = ExactPoint::new(x.clone(), y.clone());
            let (Ok(piece), Ok(value)) = (f.classify_region(&p), f.eval(&p)) else { continue };
            rows.push(ContourRow { x0: rational_to_f64(x), x1: rational_to_f64(y), piece, value: rational_to_f64(&value) });
        }
    }
    let text = match format {
        Format::Csv => {
            let mut s = String::from("x0,x1,piece,value\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{}", fmt17(r.x0), fmt17(r.x1), r.piece, fmt17(r.value));
            }
            s
        }
        Format::Json => json(&rows),
        Format::Svg => contour_svg(&rows, nx, ny, [&xmin, &xmax, &ymin, &ymax]),
    };
    Ok(Outcome { text, code: EXIT_OK })
}

fn contour_svg(rows: &[ContourRow], nx: usize, ny: usize, b: [&ExactScalar; 4]) -> String {
    let [x0, x1, y0, y1] = b.map(rational_to_f64);
    let mut plot = Plot::new((x0, x1), (y0, y1));
    let (vlo, vhi) = Plot::range(rows.iter().map(|r| r.value));
    let (cx, cy) = (nx.min(SVG_CELLS), ny.min(SVG_CELLS));
    let (wx, wy) = ((x1 - x0) / cx as f64, (y1 - y0) / cy as f64);
    let mut sum = vec![(0.0, 0usize); cx * cy];
    for r in rows {
        let i = (((r.x0 - x0) / wx) as usize).min(cx - 1);
        let j = (((r.x1 - y0) / wy) as usize).min(cy - 1);
        sum[j * cx + i].0 += r.value;
        sum[j * cx + i].1 += 1;
    }
    for j in 0..cy {
        for i in 0..cx {
            let (s, n) = sum[j * cx + i];
            if n > 0 {
                let u = (s / n as f64 - vlo) / (vhi - vlo).max(f64::MIN_POSITIVE);
                let xa = x0 + i as f64 * wx;
                let ya = y0 + j as f64 * wy;
                plot.cell(xa, xa + wx, ya, ya + wy, &ramp(u));
            }
        }
    }
    plot.render("F on x1 > -23/240", "x0", "x1")
}

fn region(format: Format, steps: usize) -> Result<Outcome, Failure> {
    if steps == 0 {
        return Err(Failure::usage("--steps must be positive"));
    }
    let rows: Vec<[f64; 5]> = (0..=steps)
        .map(|i| {
            let t = if i == steps { 1.0 } else { i as f64 / steps as f64 };
            let (inner, outer) = analytical_region(t).expect("t in [0, 1]");
            [t, inner.lo, inner.hi, outer.lo, outer.hi]
        })
        .collect();
    let text = match format {
        Format::Csv => {
            let mut s = String::from("t,inner_lo,inner_hi,outer_lo,outer_hi\n");
            for r in &rows {
                let cells: Vec<String> = r.iter().map(|v| fmt17(*v)).collect();
                let _ = writeln!(s, "{}", cells.join(","));
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                t: f64,
                inner_lo: f64,
                inner_hi: f64,
                outer_lo: f64,
                outer_hi: f64,
            }
            let rows: Vec<Row> =
                rows.iter().map(|r| Row { t: r[0], inner_lo: r[1], inner_hi: r[2], outer_lo: r[3], outer_hi: r[4] }).collect();
            json(&rows)
        }
        Format::Svg => {
            let mut plot = Plot::new((0.0, 1.0), (0.0, 0.5));
            let col = |k: usize| -> Vec<(f64, f64)> { rows.iter().map(|r| (r[0], r[k])).collect() };
            plot.band(&col(3), &col(4), PALETTE[0], "descent lemma");
            plot.band(&col(1), &col(2), PALETTE[1], "global bound");
            plot.render("Allowed f(y) - f(x)", "<f'(y), y - x>", "f(y) - f(x)")
        }
    };
    Ok(Outcome { text, code: EXIT_OK })
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Optimal => "Optimal",
        Status::Infeasible => "Infeasible",
        Status::IterationLimit => "IterationLimit",
    }
}

fn run_sweep(format: Format, grid: &[f64], ns: &[usize], cfg: &SolverConfig, workers: usize) -> Result<Outcome, Failure> {
    if grid.is_empty() || ns.is_empty() || ns.contains(&0) {
        return Err(Failure::usage("sweep needs at least one s value and positive chain lengths"));
    }
    let rows = sweep(&Normalization::default(), grid, ns, cfg, workers);
    let text = match format {
        Format::Csv => sweep_csv(&rows),
        Format::Json => json(&rows),
        Format::Svg => sweep_svg(&rows, ns),
    };
    let code = if rows.iter().all(|r| r.status == Status::Infeasible) {
        EXIT_ALL_INFEASIBLE
    } else if rows.iter().any(|r| r.status == Status::IterationLimit) {
        EXIT_SOLVER_FAILURE
    } else {
        EXIT_OK
    };
    Ok(Outcome { text, code })
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("s,N,B,U,status\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{},{},{}", fmt17(r.s), r.n, fmt17(r.lower), fmt17(r.upper), status_name(r.status));
    }
    s
}

fn sweep_svg(rows: &[SweepRow], ns: &[usize]) -> String {
    let ok: Vec<&SweepRow> = rows.iter().filter(|r| r.status != Status::Infeasible).collect();
    let (slo, shi) = Plot::range(ok.iter().map(|r| r.s));
    let (vlo, vhi) = Plot::range(ok.iter().flat_map(|r| [r.lower, r.upper]));
    let mut plot = Plot::new((slo, shi), (vlo, vhi));
    for (k, n) in ns.iter().enumerate().rev() {
        let mine: Vec<&&SweepRow> = ok.iter().filter(|r| r.n == *n).collect();
        let lower: Vec<(f64, f64)> = mine.iter().map(|r| (r.s, r.lower)).collect();
        let upper: Vec<(f64, f64)> = mine.iter().map(|r| (r.s, r.upper)).collect();
        plot.band(&lower, &upper, PALETTE[k % PALETTE.len()], &format!("N = {n}"));
    }
    plot.render("Bounds on f(y)", "<f'(y), y>", "f(y)")
}

fn read_spec(path: &Path) -> Result<ChainSpec, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let spec: ChainSpec =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("malformed problem in {}: {e}", path.display())))?;
    spec.validate().map_err(|e| Failure::input(format!("invalid problem in {}: {e}", path.display())))?;
    Ok(spec)
}

fn solve_spec(spec: &ChainSpec, cfg: &SolverConfig) -> Result<BoundResult, Failure> {
    let problem = build_problem(spec).map_err(|e| Failure::input(e.to_string()))?;
    Ok(solve(&problem, cfg))
}

fn status_code(status: Status) -> i32 {
    match status {
        Status::Optimal => EXIT_OK,
        Status::Infeasible => EXIT_ALL_INFEASIBLE,
        Status::IterationLimit => EXIT_SOLVER_FAILURE,
    }
}

fn run_solve(format: Format, input: &Path, cfg: &SolverConfig) -> Result<Outcome, Failure> {
    reject_svg(format, "solve")?;
    let spec = read_spec(input)?;
    let result = solve_spec(&spec, cfg)?;
    Ok(Outcome { text: json(&result), code: status_code(result.status) })
}

fn interpolant(spec: &ChainSpec, cfg: &SolverConfig) -> Result<(SegmentInterpolant, f64), Failure> {
    let result = solve_spec(spec, cfg)?;
    if result.status != Status::Optimal {
        return Err(Failure {
            code: status_code(result.status),
            message: format!("{:?} solve ended with status {}", spec.direction, status_name(result.status)),
        });
    }
    let interp = build_segment_interpolant(spec.l, &result.chain)
        .map_err(|e| Failure { code: EXIT_SOLVER_FAILURE, message: e.to_string() })?;
    Ok((interp, result.value))
}

fn interpolate(format: Format, input: &Path, steps: usize, lambda: Option<f64>, cfg: &SolverConfig) -> Result<Outcome, Failure> {
    if steps == 0 {
        return Err(Failure::usage("--t-steps must be positive"));
    }
    let spec = read_spec(input)?;
    let interp = match lambda {
        None => interpolant(&spec, cfg)?.0,
        Some(lam) => {
            if !(0.0..=1.0).contains(&lam) {
                return Err(Failure::usage("--lambda must lie in [0, 1]"));
            }
            let (fu, _) = interpolant(&spec.with_direction(Direction::Upper), cfg)?;
            let (fb, _) = interpolant(&spec.with_direction(Direction::Lower), cfg)?;
            combine(&fu, &fb, lam).map_err(|e| Failure { code: EXIT_SOLVER_FAILURE, message: e.to_string() })?
        }
    };
    let rows = sample(&interp, steps).expect("t grid inside [0, 1]");
    let text = match format {
        Format::Csv => {
            let mut s = String::from("t,value,dvalue\n");
            for (t, v, d) in &rows {
                let _ = writeln!(s, "{},{},{}", fmt17(*t), fmt17(*v), fmt17(*d));
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                t: f64,
                value: f64,
                dvalue: f64,
            }
            json(&rows.iter().map(|&(t, value, dvalue)| Row { t, value, dvalue }).collect::<Vec<_>>())
        }
        Format::Svg => {
            let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.0, r.1)).collect();
            let mut plot = Plot::new((0.0, 1.0), Plot::range(pts.iter().map(|p| p.1)));
            plot.polyline(&pts, PALETTE[0], None);
            plot.render("Interpolant along [x, y]", "t", "value")
        }
    };
    Ok(Outcome { text, code: EXIT_OK })
}
