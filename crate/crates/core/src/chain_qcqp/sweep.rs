//! Bands `[B_N, U_N]` over a range of `s = <f'(y), y>`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use super::problem::build_problem;
use super::solver::{solve, BoundResult, SolverConfig, Status};
use super::{Direction, Normalization};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub s: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "B")]
    pub lower: f64,
    #[serde(rename = "U")]
    pub upper: f64,
    pub status: Status,
}

impl SweepRow {
    fn combine(s: f64, n: usize, lower: &BoundResult, upper: &BoundResult) -> Self {
        let status = match (lower.status, upper.status) {
            (Status::Optimal, Status::Optimal) => Status::Optimal,
            (Status::Infeasible, _) | (_, Status::Infeasible) => Status::Infeasible,
            _ => Status::IterationLimit,
        };
        let (lower, upper) = if status == Status::Infeasible { (f64::NAN, f64::NAN) } else { (lower.value, upper.value) };
        Self { s, n, lower, upper, status }
    }

    fn infeasible(s: f64, n: usize) -> Self {
        Self { s, n, lower: f64::NAN, upper: f64::NAN, status: Status::Infeasible }
    }
}

/// Solves both directions for every `(s, N)` pair, ordered by `s` then by `N` as given.
///
/// `s` values outside the normalization's feasibility interval are reported as
/// infeasible without solving. Up to `workers` threads share the solves; the output
/// does not depend on the worker count.
pub fn sweep(base: &Normalization, s_grid: &[f64], ns: &[usize], config: &SolverConfig, workers: usize) -> Vec<SweepRow> {
    let window = base.feasibility_interval();
    let jobs: Vec<(f64, usize, Direction)> = s_grid
        .iter()
        .flat_map(|&s| ns.iter().flat_map(move |&n| [(s, n, Direction::Lower), (s, n, Direction::Upper)]))
        .collect();
    let results: Vec<Mutex<Option<BoundResult>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);

    let run = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        let Some(&(s, n, dir)) = jobs.get(i) else { break };
        if !window.contains_within(s, 1e-12) {
            continue;
        }
        let result = base.spec(s, n, dir).and_then(|spec| build_problem(&spec)).map(|p| solve(&p, config));
        if let Ok(r) = result {
            *results[i].lock().expect("result slot") = Some(r);
        }
    };
    let workers = workers.clamp(1, jobs.len().max(1));
    if workers == 1 {
        run();
    } else {
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(run);
            }
        });
    }

    let results: Vec<Option<BoundResult>> = results.into_iter().map(|m| m.into_inner().expect("result slot")).collect();
    jobs.chunks(2)
        .zip(results.chunks(2))
        .map(|(job, res)| {
            let (s, n, _) = job[0];
            match (&res[0], &res[1]) {
                (Some(lo), Some(hi)) => SweepRow::combine(s, n, lo, hi),
                _ => SweepRow::infeasible(s, n),
            }
        })
        .collect()
}

/// `count` equally spaced points over `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count).map(|i| if i + 1 == count { hi } else { lo + (hi - lo) * i as f64 / (count - 1) as f64 }).collect(),
    }
}
