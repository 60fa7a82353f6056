//! `alpp`: solve, verify, generate, reduce and benchmark path packing
//! instances.
//!
//! Exit codes: 0 when a decision was computed (yes or no), 1 when `verify`
//! rejects a packing, 2 for usage or input errors, 3 when a resource limit
//! was hit, 4 when solvers disagree, 5 when `bench` skipped unreadable files.

mod bench;
mod generate;
mod reduce;
mod report;
mod solve;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use alpp_core::Error;

#[derive(Parser)]
#[command(name = "alpp", version, about = "Packing vertex-disjoint paths of fixed length between terminals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance and print a report.
    Solve(solve::SolveArgs),
    /// Check a packing against an instance.
    Verify {
        instance: PathBuf,
        /// `path` lines; a `solve` report is accepted as is.
        packing: PathBuf,
    },
    /// Write a generated instance.
    Generate(generate::GenerateArgs),
    /// Apply a reduction to an input file.
    Reduce(reduce::ReduceArgs),
    /// Run several algorithms over a directory of instances and compare.
    Bench(bench::BenchArgs),
}

/// An error with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

fn verify(instance: &PathBuf, packing: &PathBuf) -> CliResult<u8> {
    let (inst, labels) = alpp_core::io::parse_instance_labeled(&std::fs::read_to_string(instance)?)?;
    let (_, p) = alpp_core::io::parse_packing(&std::fs::read_to_string(packing)?, Some(&labels))?;
    match alpp_core::verify(&inst, &p)? {
        alpp_core::Verdict::Valid => {
            println!("valid");
            Ok(0)
        }
        alpp_core::Verdict::Invalid(v) => {
            println!("invalid: {v}");
            Ok(1)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve(args) => solve::run(args),
        Command::Verify { instance, packing } => verify(instance, packing),
        Command::Generate(args) => generate::run(args),
        Command::Reduce(args) => reduce::run(args),
        Command::Bench(args) => bench::run(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
