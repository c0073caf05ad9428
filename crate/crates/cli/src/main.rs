use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod benchmark;
mod generate;
mod kp;
mod orderstats;
mod output;
mod solve;
mod spec;
mod svg;

use output::{Format, Provenance};

/// Hardware-native Ising instances, solver benchmarks and hardness reports.
#[derive(Debug, Parser)]
#[command(name = "isingbench", version)]
struct Cli {
    /// Master seed; recorded in every artifact.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Format of tabular reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample an instance on a hardware graph.
    Generate(generate::Args),
    /// Run one solver on one instance.
    Solve(solve::SolveArgs),
    /// Re-check the energies of a sample file against an instance.
    Verify(solve::VerifyArgs),
    /// Compare candidate solvers with a baseline over instances.
    Benchmark(benchmark::Args),
    /// Hardness ratios of knapsack QUBOs.
    Kp(kp::Args),
    /// Quadrature and simulated laws of weight-range statistics.
    Orderstats(orderstats::Args),
}

/// Shared state handed to every command.
pub struct Ctx {
    pub seed: u64,
    pub out: PathBuf,
    pub format: Format,
    pub prov: Provenance,
}

/// Bad input detected after argument parsing; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let ctx = Ctx {
        seed: cli.seed,
        out: cli.out,
        format: cli.format,
        prov: Provenance::from_args(std::env::args(), cli.seed),
    };
    let result = match cli.command {
        Command::Generate(a) => generate::run(&ctx, a),
        Command::Solve(a) => solve::run_solve(&ctx, a),
        Command::Verify(a) => solve::run_verify(&ctx, a),
        Command::Benchmark(a) => benchmark::run(&ctx, a),
        Command::Kp(a) => kp::run(&ctx, a),
        Command::Orderstats(a) => orderstats::run(&ctx, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
