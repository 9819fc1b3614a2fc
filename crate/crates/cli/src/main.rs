//! `chloc`: command-line front end for the chloc library.
//!
//! Exit status: 0 when every check passes, 1 for usage, schema or input
//! errors, 2 when the computation ran but reported a mathematical failure.

mod commands;
mod job;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use chloc::exec::Strategy;
use commands::{ClassesJob, MathError, Outcome};

#[derive(Parser)]
#[command(name = "chloc", version, about = "Exact equivariant characteristic classes and I-functions")]
struct Cli {
    /// Print a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Chain polynomials.
    Chain {
        #[command(subcommand)]
        command: ChainCommand,
    },
    /// Coefficients of the equivariant small I-function.
    Ifunction(IfunctionArgs),
    /// Jobs over K-theory classes read from a JSON file.
    Classes(ClassesArgs),
}

#[derive(Subcommand)]
enum ChainCommand {
    /// Weights, charges, symmetry group and q-weights of x_1^a_1 x_2 + ... + x_N^a_N.
    Analyze {
        #[arg(required = true, value_name = "A")]
        exponents: Vec<u64>,
    },
}

#[derive(Args)]
struct IfunctionArgs {
    #[arg(required = true, value_name = "A")]
    exponents: Vec<u64>,
    #[arg(long, value_name = "K")]
    k_max: u64,
    /// Check the Picard-Fuchs equation on every t^m, m <= K + d.
    #[arg(long)]
    verify_pf: bool,
    /// Also print each coefficient at q = 0.
    #[arg(long)]
    limit: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum JobKind {
    Hodge,
    General,
    Identity,
    Tautrel,
}

#[derive(Args)]
struct ClassesArgs {
    #[arg(value_enum)]
    kind: JobKind,
    #[arg(long, value_name = "FILE")]
    job: PathBuf,
    /// Truncation order in q; overrides the job file and CHLOC_Q_MAX.
    #[arg(long, value_name = "Q", allow_negative_numbers = true)]
    q_max: Option<i64>,
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let strategy = if cli.sequential { Strategy::Sequential } else { Strategy::Parallel };
    match &cli.command {
        Command::Chain { command: ChainCommand::Analyze { exponents } } => commands::chain_analyze(exponents),
        Command::Ifunction(a) => commands::ifunction(&a.exponents, a.k_max, a.verify_pf, a.limit, strategy),
        Command::Classes(a) => {
            let kind = match a.kind {
                JobKind::Hodge => ClassesJob::Hodge,
                JobKind::General => ClassesJob::General,
                JobKind::Identity => ClassesJob::Identity,
                JobKind::Tautrel => ClassesJob::Tautrel,
            };
            commands::classes(kind, &a.job, a.q_max, strategy)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("reports serialize"));
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<MathError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
