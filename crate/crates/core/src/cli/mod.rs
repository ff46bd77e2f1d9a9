//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification, 2 every solve infeasible,
//! 3 solver failure, 4 unreadable or malformed input, 64 usage error.

mod commands;
mod svg;

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::chain_qcqp::SolverConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_ALL_INFEASIBLE: i32 = 2;
pub const EXIT_SOLVER_FAILURE: i32 = 3;
pub const EXIT_BAD_INPUT: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "smoothcvx", version, about = "Smooth convex functions over open convex sets: verification and bound computation")]
pub struct Cli {
    /// Write the artifact here instead of stdout (atomically).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact and sampled checks of the counterexample spline and the bounds on it.
    Verify {
        /// Lattice spacing for the sampled checks, as a rational such as 1/32.
        #[arg(long, default_value = "1/16")]
        grid_spacing: String,
        /// Adds 1/100 to the constant of the given piece (1-based).
        #[arg(long, hide = true)]
        perturb_piece: Option<usize>,
    },
    /// Values of the spline on a rational grid: `x0,x1,piece,value`.
    Contour {
        #[arg(long, default_value = "-3/2", allow_hyphen_values = true)]
        xmin: String,
        #[arg(long, default_value = "5/2", allow_hyphen_values = true)]
        xmax: String,
        #[arg(long, default_value = "-9/100", allow_hyphen_values = true)]
        ymin: String,
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        ymax: String,
        #[arg(long, default_value_t = 401)]
        nx: usize,
        #[arg(long, default_value_t = 419)]
        ny: usize,
    },
    /// Allowed region for f(y) - f(x) against t = <f'(y), y - x>.
    Region {
        #[arg(long, default_value_t = 1000)]
        steps: usize,
    },
    /// Bands [B_N, U_N] over s = <f'(y), y> with ||y||^2 = 1, ||f'(y)||^2 = 0.5, L = 1.
    Sweep {
        #[arg(long)]
        s_min: Option<f64>,
        #[arg(long)]
        s_max: Option<f64>,
        #[arg(long, default_value_t = 60)]
        s_steps: usize,
        #[arg(long = "N-list", value_delimiter = ',', default_value = "1,2,5,50")]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Solves one chain program given as JSON and prints the result as JSON.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Samples the interpolant built from a solved chain: `t,value,dvalue`.
    Interpolate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        t_steps: usize,
        /// Combine the upper and lower interpolants with this weight on the upper one.
        #[arg(long)]
        lambda: Option<f64>,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct SolverArgs {
    #[arg(long)]
    pub newton_tol: Option<f64>,
    #[arg(long)]
    pub feas_tol: Option<f64>,
    #[arg(long)]
    pub mu_shrink: Option<f64>,
    #[arg(long)]
    pub max_outer: Option<usize>,
    #[arg(long)]
    pub max_newton: Option<usize>,
}

impl SolverArgs {
    pub fn config(&self) -> Result<SolverConfig, Failure> {
        let d = SolverConfig::default();
        let cfg = SolverConfig {
            newton_tol: self.newton_tol.unwrap_or(d.newton_tol),
            feas_tol: self.feas_tol.unwrap_or(d.feas_tol),
            mu_shrink: self.mu_shrink.unwrap_or(d.mu_shrink),
            max_outer: self.max_outer.unwrap_or(d.max_outer),
            max_newton: self.max_newton.unwrap_or(d.max_newton),
            ..d
        };
        cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
        Ok(cfg)
    }
}

/// A finished artifact and the exit code it carries.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

/// A run that produced no artifact.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_BAD_INPUT, message: message.into() }
    }
}

/// Runs a parsed command without touching the output destination.
pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    commands::dispatch(cli)
}

/// Parses `args`, runs the command and writes its artifact; returns the exit code.
pub fn execute<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(outcome) => match emit(cli.out.as_deref(), &outcome.text) {
            Ok(()) => outcome.code,
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                EXIT_BAD_INPUT
            }
        },
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> std::io::Result<()> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
        Some(path) => write_atomic(path, text.as_bytes()),
    }
}

/// Writes through a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
