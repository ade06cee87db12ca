//! `rosen-lab`: exact Rosen continued fraction experiments from the shell.
//!
//! Exit codes: 0 on success or a passing suite, 1 when a verification suite
//! fails, 2 on usage and input errors.

mod criteria;
mod expand;
mod output;
mod sturmian;
mod verify;

use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "rosen-lab", version, about = "Exact Rosen continued fractions over Q(2cos(pi/m))")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalArgs {
    /// Index m >= 3 of the field Q(lambda_m), lambda_m = 2cos(pi/m).
    #[arg(short = 'm', global = true, value_parser = clap::value_parser!(u32).range(3..))]
    m: Option<u32>,

    /// Arithmetic mode for `expand`.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,

    /// Letters to compute (expand, sturmian, criteria) or random cases per
    /// suite (verify).
    #[arg(short = 'n', long = "steps", global = true, value_parser = clap::value_parser!(u64).range(1..))]
    steps: Option<u64>,

    /// Working precision in bits for certified-real mode.
    #[arg(long, global = true, default_value_t = 256, value_parser = clap::value_parser!(u32).range(32..))]
    precision: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand x, print quotients, convergents and growth statistics.
    Expand(expand::ExpandArgs),
    /// Run verification suites.
    Verify(verify::VerifyArgs),
    /// Generate a Sturmian word over two Rosen letters and evaluate it.
    Sturmian(sturmian::SturmianArgs),
    /// Evaluate both transcendence criteria on an expansion file.
    Criteria(criteria::CriteriaArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    CertifiedReal,
}

/// Resolved global settings, echoed into every JSON document.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub m: Option<u32>,
    pub mode: Mode,
    pub max_steps: Option<u64>,
    pub precision: u32,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn require_m(&self) -> Result<u32> {
        match self.m {
            Some(m) => Ok(m),
            None => bail!("this command needs -m <index>"),
        }
    }

    pub fn steps_or(&self, default: usize) -> usize {
        self.max_steps.map_or(default, |n| n as usize)
    }
}

/// Whether a command's own checks passed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = cli.global;
    let cfg = RunConfig {
        m: g.m,
        mode: g.mode,
        max_steps: g.steps,
        precision: g.precision,
        format: g.format,
        seed: g.seed,
    };
    let result = match &cli.command {
        Command::Expand(a) => expand::run(&cfg, a),
        Command::Verify(a) => verify::run(&cfg, a),
        Command::Sturmian(a) => sturmian::run(&cfg, a),
        Command::Criteria(a) => criteria::run(&cfg, a),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
