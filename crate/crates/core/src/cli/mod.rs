//! Batch driver: one subcommand per experiment, each writing a manifest
//! before computing and one or more CSV files after.
//!
//! Exit status is [`EXIT_OK`] when every check passes, [`EXIT_FAILURE`] when
//! a check fails or a run diverges, and [`EXIT_USAGE`] for invalid input.

mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::Error;
pub use commands::{
    ANDERSON_KEYS, BONY_KEYS, ENHANCE_KEYS, GALERKIN_KEYS, RENORM_KEYS, SOLVER_KEYS,
};
use config::{parse_overrides, Config, Key};
use output::{write_failures, Failure, RunDir};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("{} check(s) failed", .0.len())]
    Check(Vec<Failure>),

    #[error(transparent)]
    Run(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Run(Error::Contract(_) | Error::InvalidGrid(_) | Error::InvalidIndex(_)) => EXIT_USAGE,
            CliError::Check(_) | CliError::Run(_) => EXIT_FAILURE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "burgers", version, about = "Stochastic Burgers simulation and verification experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Wick identity Monte Carlo and logarithmic bound scan.
    RenormVerify(Common),
    /// Decomposed simulation with schedule and diagnostics.
    BurgersRun(Common),
    /// Coupled-seed Galerkin refinement.
    GalerkinConverge(Common),
    /// Enhanced-noise convergence over the level schedule.
    EnhanceConverge(Common),
    /// Measured ratios of the paraproduct estimates.
    BonyCheck(Common),
    /// Paracontrolled resolvent fixed point.
    AndersonSolve(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the `seed` key.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads for Monte Carlo fan-out.
    #[arg(long)]
    threads: Option<usize>,
    /// Further `--key value` overrides of configuration keys.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, hide = true)]
    overrides: Vec<String>,
}

type Handler = fn(&Config, &RunDir) -> commands::Outcome;

impl Command {
    fn parts(&self) -> (&'static str, &'static [Key], Handler, &Common) {
        match self {
            Command::RenormVerify(c) => ("renorm-verify", RENORM_KEYS, commands::renorm_verify, c),
            Command::BurgersRun(c) => ("burgers-run", SOLVER_KEYS, commands::burgers_run, c),
            Command::GalerkinConverge(c) => ("galerkin-converge", GALERKIN_KEYS, commands::galerkin_converge, c),
            Command::EnhanceConverge(c) => ("enhance-converge", ENHANCE_KEYS, commands::enhance_converge, c),
            Command::BonyCheck(c) => ("bony-check", BONY_KEYS, commands::bony_check, c),
            Command::AndersonSolve(c) => ("anderson-solve", ANDERSON_KEYS, commands::anderson_solve, c),
        }
    }
}

fn unsigned<T: std::str::FromStr>(name: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::Usage(format!("--{name} expects an unsigned integer, got {v:?}")))
}

/// Common flags given after the first key override arrive among the
/// overrides; moves them back.
fn split_common(common: &Common) -> Result<(Common, Vec<(String, String)>), CliError> {
    let mut out = Common {
        config: common.config.clone(),
        seed: common.seed,
        out: common.out.clone(),
        threads: common.threads,
        overrides: Vec::new(),
    };
    let mut rest = Vec::new();
    for (k, v) in parse_overrides(&common.overrides)? {
        match k.as_str() {
            "config" => out.config = Some(PathBuf::from(v)),
            "out" => out.out = PathBuf::from(v),
            "threads" => out.threads = Some(unsigned("threads", &v)?),
            "seed" => out.seed = Some(unsigned("seed", &v)?),
            _ => rest.push((k, v)),
        }
    }
    Ok((out, rest))
}

fn execute(cmd: &Command) -> Result<(), CliError> {
    let (name, keys, handler, common) = cmd.parts();
    let (common, mut overrides) = split_common(common)?;
    if let Some(seed) = common.seed {
        if !keys.iter().any(|k| k.name == "seed") {
            return Err(CliError::Usage(format!("{name} has no seed")));
        }
        overrides.push(("seed".into(), seed.to_string()));
    }
    let cfg = Config::resolve(keys, common.config.as_deref(), &overrides)?;
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        // a second configuration in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let dir = RunDir::create(&common.out)?;
    dir.write_manifest(name, &cfg, rayon::current_num_threads())?;
    let failures = handler(&cfg, &dir)?;
    if failures.is_empty() {
        Ok(())
    } else {
        write_failures(&dir, &failures)?;
        Err(CliError::Check(failures))
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            if let CliError::Check(failures) = &e {
                for f in failures {
                    eprintln!("{}", f.line());
                }
            }
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
