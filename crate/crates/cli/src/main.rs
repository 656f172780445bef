mod commands;
mod json;
mod parse;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use commands::{CliError, CliResult, IdentityArgs, Method, Query, RawQuery};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_CHECK: u8 = 4;

/// Exact autocorrelations of characteristic polynomials over U(N), USp(2N), SO(2N) and O⁻(2N).
#[derive(Parser)]
#[command(name = "rmt-autocorr", version)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "RMT_AUTOCORR_THREADS")]
    threads: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Add wall-clock times to the report; the output is then no longer reproducible.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one route.
    Compute(ComputeArgs),
    /// Evaluate several routes and compare them.
    Crosscheck(CrosscheckArgs),
    /// Random trials of the supporting polynomial identities.
    Identities(IdentitiesArgs),
    /// Haar-sampled average against the exact value.
    Montecarlo(MonteCarloArgs),
    /// Symplectic large-N ratio table (CSV).
    Scaling(ScalingArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Group {
    U,
    Usp,
    So,
    Ominus,
}

impl Group {
    fn name(self) -> &'static str {
        match self {
            Group::U => "u",
            Group::Usp => "usp",
            Group::So => "so",
            Group::Ominus => "ominus",
        }
    }
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long, value_enum)]
    group: Group,
    /// Size parameter N.
    #[arg(long = "N")]
    size: usize,
    /// Unitary only: number of unconjugated factors.
    #[arg(long = "m")]
    m: Option<usize>,
    /// Unitary only: total number of shifts (checked against --shifts).
    #[arg(long = "n")]
    n: Option<usize>,
    /// Comma-separated complex shifts, e.g. `0.5,1+0.2i`.
    #[arg(long, allow_hyphen_values = true)]
    shifts: Option<String>,
    /// Comma-separated α; w = e^{-α} for u and usp, w = e^{α} for so and ominus.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Decimal digits for extended precision (exact routes only).
    #[arg(long)]
    digits: Option<u32>,
}

impl QueryArgs {
    fn raw(&self, tol: Option<f64>) -> RawQuery<'_> {
        RawQuery {
            group: self.group.name(),
            size: self.size,
            m: self.m,
            n: self.n,
            shifts: self.shifts.as_deref(),
            alpha: self.alpha.as_deref(),
            digits: self.digits,
            tol,
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long, value_enum)]
    method: Method,
    /// Nodes per dimension for contour and quadrature routes.
    #[arg(long)]
    nodes: Option<usize>,
}

#[derive(Args)]
struct CrosscheckArgs {
    #[command(flatten)]
    query: QueryArgs,
    /// Routes to compare (default: every exact route of the group).
    #[arg(long, value_enum, value_delimiter = ',')]
    routes: Vec<Method>,
    /// Maximum pairwise relative deviation.
    #[arg(long)]
    tol: Option<f64>,
    /// Draw this many seed-pinned shifts instead of --shifts.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    nodes: Option<usize>,
}

#[derive(Args)]
struct IdentitiesArgs {
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest number of shifts per trial.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=10))]
    max_n: u64,
    #[arg(long)]
    digits: Option<u32>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct MonteCarloArgs {
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(100..))]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ScalingArgs {
    /// Comma-separated b_j.
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    /// Values of N.
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000,10000")]
    sizes: Vec<usize>,
}

/// Text to emit and whether the command's check passed.
fn run(cli: &Cli) -> CliResult<(String, bool)> {
    let canon = |v: serde_json::Value| json::to_canonical(&v) + "\n";
    match &cli.command {
        Command::Compute(a) => {
            let q = Query::resolve(a.query.raw(None), None)?;
            Ok((canon(commands::compute(&q, a.method, a.nodes, cli.timing)?), true))
        }
        Command::Crosscheck(a) => {
            let random = a.random.map(|k| (k, a.seed));
            let q = Query::resolve(a.query.raw(a.tol), random)?;
            let routes = if a.routes.is_empty() { commands::default_routes(q.family) } else { a.routes.clone() };
            let (v, pass) = commands::crosscheck(&q, &routes, a.nodes, cli.timing)?;
            Ok((canon(v), pass))
        }
        Command::Identities(a) => {
            let args =
                IdentityArgs { trials: a.trials, seed: a.seed, max_n: a.max_n as usize, digits: a.digits, tol: a.tol };
            let (v, pass) = commands::identities(&args, cli.timing)?;
            Ok((canon(v), pass))
        }
        Command::Montecarlo(a) => {
            let q = Query::resolve(a.query.raw(None), None)?;
            let (v, pass) = commands::montecarlo(&q, a.samples as usize, a.seed, cli.timing)?;
            Ok((canon(v), pass))
        }
        Command::Scaling(a) => Ok((commands::scaling(&a.b, &a.sizes)?, true)),
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: could not size the thread pool: {e}");
        }
    }
    let (text, code) = match run(&cli) {
        Ok((text, pass)) => (text, if pass { 0 } else { EXIT_CHECK }),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(CliError::Numeric(e)) => {
            eprintln!("error: {e}");
            let v = json!({ "error": e.name(), "message": e.to_string() });
            (json::to_canonical(&v) + "\n", EXIT_NUMERIC)
        }
    };
    if let Err(e) = emit(&cli, &text) {
        eprintln!("error: could not write output: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(code)
}
