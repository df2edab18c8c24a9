mod output;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use capamp_core::bounds::{
    beta_witness_private, depolarizing_breakpoint, depolarizing_upper, erasure_capacity,
    transposition_bound_closed, transposition_coefficients, verify_beta_witness,
};
use capamp_core::channels::private_channel;
use capamp_core::thresholds::{superactivation_plan, sweep, MarginKind};
use capamp_core::{Error, C64};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::suites::{Settings, Suite};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "capamp", version, about = "Capacity amplification by private channels")]
struct Cli {
    /// Cap on the total dimension of constructed states and channels.
    #[arg(long, global = true)]
    dimension_cap: Option<usize>,

    /// Report wall time (in the JSON report for `verify`, on stderr otherwise).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite and print a JSON report.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write amplification margins on a grid as CSV.
    Sweep {
        #[arg(value_enum)]
        kind: SweepKind,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 200)]
        resolution: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a capacity bound and print it as JSON.
    Bound {
        #[command(subcommand)]
        kind: BoundKind,
    },
    /// Plan a superactivation construction and print it as JSON.
    Superactivate {
        #[arg(long, allow_negative_numbers = true)]
        epsilon: f64,
        #[arg(long)]
        n: usize,
        /// Magnitude of the key overlap `c`.
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SweepKind {
    Erasure,
    Depol,
}

#[derive(Subcommand, Debug)]
enum BoundKind {
    /// Transposition bound on Q of the private channel N_{q,d}.
    Transposition {
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
        #[arg(long)]
        d: usize,
    },
    /// Upper bound on Q of the depolarizing channel.
    DepolUpper {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long)]
        d: usize,
    },
    /// Quantum capacity of the erasure channel.
    Erasure {
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long)]
        d: usize,
    },
    /// β witness bound on the private capacity of N_{(d+1)/(2d),d}.
    Beta {
        #[arg(long)]
        d: usize,
    },
}

/// Failure of a command, mapped to an exit code.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InfeasibleParams(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    let start = Instant::now();
    let result = dispatch(&cli, start);
    if cli.timing && !matches!(cli.command, Command::Verify { .. }) {
        eprintln!("wall time: {:.3}s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

/// Applies `CAPAMP_THREADS` to the global thread pool.
fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("CAPAMP_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("CAPAMP_THREADS = {raw:?} is not a positive integer"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn dispatch(cli: &Cli, start: Instant) -> Result<u8, Failure> {
    match &cli.command {
        Command::Verify {
            suite,
            tol,
            seed,
            out,
        } => {
            if !(*tol >= 0.0) {
                return Err(Failure::Usage(format!("tolerance {tol} must be nonnegative")));
            }
            let settings = Settings {
                tol: *tol,
                seed: *seed,
                dimension_cap: cli.dimension_cap,
            };
            let checks = suites::run(*suite, &settings)?;
            let pass = checks.iter().all(|c| c.pass);
            let mut report = json!({
                "suite": suite.name(),
                "seed": seed,
                "tolerance": tol,
                "checks": checks,
                "pass": pass,
            });
            if cli.timing {
                report["wall_time_s"] = json!(start.elapsed().as_secs_f64());
            }
            output::emit_json(&report, out.as_deref())?;
            Ok(if pass { 0 } else { EXIT_FAILURE })
        }
        Command::Sweep {
            kind,
            d,
            resolution,
            out,
        } => {
            let kind = match kind {
                SweepKind::Erasure => MarginKind::Erasure,
                SweepKind::Depol => MarginKind::Depolarizing,
            };
            let grid = sweep(kind, *d, *resolution)?;
            output::emit_csv(&grid, out.as_deref())?;
            Ok(0)
        }
        Command::Bound { kind } => {
            output::emit_json(&bound(kind, cli.dimension_cap)?, None)?;
            Ok(0)
        }
        Command::Superactivate { epsilon, n, c } => {
            if !(*c >= 0.0 && *c <= 1.0) {
                return Err(Failure::Usage(format!("|c| = {c} is not in [0, 1]")));
            }
            if !(*epsilon >= 0.0) {
                return Err(Failure::Usage(format!("epsilon = {epsilon} must be nonnegative")));
            }
            let plan = superactivation_plan(*epsilon, *n, C64::new(*c, 0.0))?;
            let value = json!({
                "epsilon": epsilon,
                "n": n,
                "c_abs": c,
                "kappa": plan.kappa,
                "lambda": plan.lambda,
                "N": plan.big_n,
                "certificates": {
                    "additivity_margins": plan.additivity_margins,
                    "activation_value": plan.activation_value,
                },
            });
            output::emit_json(&value, None)?;
            Ok(0)
        }
    }
}

fn bound(kind: &BoundKind, cap: Option<usize>) -> Result<Value, Failure> {
    Ok(match *kind {
        BoundKind::Transposition { q, d } => {
            let (r0, r1) = transposition_coefficients(q, d)?;
            json!({
                "kind": "transposition",
                "q": q,
                "d": d,
                "r0": r0,
                "r1": r1,
                "value": transposition_bound_closed(q, d)?,
            })
        }
        BoundKind::DepolUpper { p, d } => {
            let value = depolarizing_upper(p, d)?;
            json!({
                "kind": "depol-upper",
                "p": p,
                "d": d,
                "case": if p < depolarizing_breakpoint(d) { 1 } else { 2 },
                "value": value,
            })
        }
        BoundKind::Erasure { lambda, d } => json!({
            "kind": "erasure",
            "lambda": lambda,
            "d": d,
            "value": erasure_capacity(lambda, d)?,
        }),
        BoundKind::Beta { d } => {
            if let Some(cap) = cap {
                let requested = (2 * d).saturating_mul(2 * d);
                if requested > cap {
                    return Err(Error::DimensionCap { requested, cap }.into());
                }
            }
            let q = (d + 1) as f64 / (2 * d) as f64;
            let verdict = verify_beta_witness(&private_channel(q, d)?, &beta_witness_private(d)?)?;
            json!({
                "kind": "beta",
                "d": d,
                "q": q,
                "feasible": verdict.feasible,
                "min_eigenvalue": verdict.min_eigenvalue,
                "trX": verdict.value,
                "P_upper": verdict.value.log2(),
            })
        }
    })
}
