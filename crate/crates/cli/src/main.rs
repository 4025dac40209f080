mod cache;
mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cache::{write_atomic, Cache};
use commands::{cmd_gw, cmd_series, cmd_table, cmd_verify, Column, Outcome};
use config::{ChiArg, Format, MethodArg, OrderArg, RunConfig, SeriesKind, Suite};
use error::CliError;

/// Exact D0-D6 BPS and Donaldson-Thomas invariants.
#[derive(Parser, Debug)]
#[command(name = "d0d6", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Write output here instead of stdout (atomically).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for cached tables.
    #[arg(long, env = "D0D6_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,
    /// Ignore the cache even if a directory is configured.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads for independent cells and suites.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Integer Euler characteristic or "sym".
    #[arg(long)]
    chi: ChiArg,
    #[arg(long)]
    amax: u32,
    #[arg(long)]
    rmax: u32,
    #[arg(long, value_enum, default_value = "desc")]
    order: OrderArg,
    #[arg(long, value_enum, default_value = "factorization")]
    method: MethodArg,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long)]
    chi: Option<ChiArg>,
    #[arg(long)]
    amax: Option<u32>,
    #[arg(long)]
    rmax: Option<u32>,
    /// Congruence modulus (4 or 9); both when omitted.
    #[arg(long = "mod")]
    modulus: Option<u32>,
    #[arg(long, requires = "r")]
    a: Option<u32>,
    #[arg(long, requires = "a")]
    r: Option<u32>,
    #[arg(long)]
    hmax: Option<u32>,
    /// Also run the refined check with grades up to d1.
    #[arg(long)]
    d1: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cases: Option<usize>,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[arg(value_enum)]
    which: SeriesKind,
    /// Highest power of t.
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    chi: Option<ChiArg>,
}

#[derive(Args, Debug)]
struct GwArgs {
    #[arg(long, requires = "r")]
    a: Option<u32>,
    #[arg(long, requires = "a")]
    r: Option<u32>,
    #[arg(long)]
    chi: Option<ChiArg>,
    #[arg(long)]
    hmax: Option<u32>,
    /// Refined run with grades 1..=d1 instead of aggregates.
    #[arg(long, conflicts_with_all = ["a", "hmax"])]
    d1: Option<u32>,
    #[arg(long, requires = "d1")]
    amax: Option<u32>,
    #[arg(long, requires = "d1")]
    rmax: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of BPS invariants Ω(a, r).
    Bps(TableArgs),
    /// Table of DT-bar invariants.
    Dt(TableArgs),
    /// Run a verification suite; exit 1 on any failed assertion.
    Verify(VerifyArgs),
    /// Print generating-series coefficients.
    Series(SeriesArgs),
    /// GW numbers from the D0-D6 commutator.
    Gw(GwArgs),
}

fn build_config(cli: &Cli) -> RunConfig {
    let name = match &cli.command {
        Command::Bps(_) => "bps",
        Command::Dt(_) => "dt",
        Command::Verify(_) => "verify",
        Command::Series(_) => "series",
        Command::Gw(_) => "gw",
    };
    let mut c = RunConfig::new(name, cli.format);
    match &cli.command {
        Command::Bps(t) | Command::Dt(t) => {
            c.chi = Some(t.chi);
            c.a_max = Some(t.amax);
            c.r_max = Some(t.rmax);
            c.order = Some(t.order);
            c.method = Some(t.method);
        }
        Command::Verify(v) => {
            c.suite = Some(v.suite);
            c.chi = v.chi;
            c.a_max = v.amax;
            c.r_max = v.rmax;
            c.modulus = v.modulus;
            c.ray = v.a.zip(v.r);
            c.h_max = v.hmax;
            c.d1 = v.d1;
            c.seed = v.seed;
            c.cases = v.cases;
        }
        Command::Series(s) => {
            c.series = Some(s.which);
            c.n = Some(s.n);
            c.rank = s.r;
            c.chi = s.chi;
        }
        Command::Gw(g) => {
            c.chi = g.chi;
            c.ray = g.a.zip(g.r);
            c.h_max = g.hmax;
            c.d1 = g.d1;
            c.a_max = g.amax;
            c.r_max = g.rmax;
        }
    }
    c
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let config = build_config(cli);
    let cache = match (&cli.cache_dir, cli.no_cache) {
        (Some(dir), false) => Some(Cache::new(dir)),
        _ => None,
    };
    match &cli.command {
        Command::Bps(_) => cmd_table(&config, Column::Omega, cache.as_ref()),
        Command::Dt(_) => cmd_table(&config, Column::Dtbar, cache.as_ref()),
        Command::Verify(_) => cmd_verify(&config),
        Command::Series(_) => cmd_series(&config),
        Command::Gw(_) => cmd_gw(&config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool");
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let written = match &cli.out {
        Some(path) => write_atomic(path, outcome.text.as_bytes()),
        None => {
            print!("{}", outcome.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if let Some(f) = &outcome.first_failure {
        eprintln!("FAIL {f}");
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
