use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod config;

#[derive(Parser)]
#[command(name = "miniw", version, about = "BRST reduction and W-algebra characters for small Lie superalgebras")]
struct Cli {
    /// JSON file whose keys override the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Subcommand)]
pub enum Command {
    /// Dimensions, h^v, superdimension, gradation and c(1)
    Info(InfoArgs),
    /// Weight multiplicities of M(λ) or L(λ) as JSON
    Char(CharArgs),
    /// W-Verma or predicted irreducible W-characters
    Wchar(WcharArgs),
    /// Stabilized H^i for one t-weight class
    Cohomology(CohomologyArgs),
    /// Algebra checks and nilpotency of d, d^chi, d^st
    Verify(VerifyArgs),
    /// Acceptance criteria as a pass/fail table
    Suite(SuiteArgs),
}

#[derive(Args)]
pub struct InfoArgs {
    pub algebra: String,
}

#[derive(Args)]
pub struct CharArgs {
    #[arg(long)]
    pub algebra: String,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    #[arg(long, default_value = "verma")]
    pub which: String,
    #[arg(long, default_value_t = 2)]
    pub depth: u32,
    /// Bound on the finite height of λ − μ
    #[arg(long, default_value_t = 2)]
    pub height: u32,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args)]
pub struct WcharArgs {
    #[arg(long)]
    pub algebra: String,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(short = 'k', long = "level", allow_hyphen_values = true)]
    pub k: Option<String>,
    #[arg(long)]
    pub max_level: String,
    #[arg(long)]
    pub compare_brst: bool,
    /// Chain depth for the multiplicity inversion
    #[arg(long, default_value_t = 4)]
    pub depth: u32,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args)]
pub struct CohomologyArgs {
    #[arg(long)]
    pub algebra: String,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    #[arg(long, default_value = "verma")]
    pub which: String,
    /// D^W-offset of ξ below ξ_λ
    #[arg(long)]
    pub xi_level: String,
    /// h^f-part of ξ, e.g. "[1/3]"; needed when several classes share the offset
    #[arg(long, allow_hyphen_values = true)]
    pub xi_hf: Option<String>,
    /// Starting chain length
    #[arg(long, default_value_t = 0)]
    pub chain: u32,
    /// Largest chain length tried
    #[arg(long, default_value_t = 10)]
    pub depth: u32,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub algebra: String,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long, default_value = "verma")]
    pub which: String,
    #[arg(long, default_value_t = 2)]
    pub depth: u32,
}

#[derive(Args)]
pub struct SuiteArgs {
    /// Comma-separated criterion numbers
    #[arg(long)]
    pub criteria: Option<String>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let mut cli = Cli::parse();
    let mut run = || -> miniw_core::Result<bool> {
        if let Some(path) = &cli.config {
            config::apply_config(path, &mut cli.cmd, &mut cli.format)?;
        }
        if let Some(n) = config::threads_from_env()? {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| miniw_core::MiniwError::InvalidConfig {
                    field: "MINIW_THREADS".into(),
                    reason: e.to_string(),
                })?;
        }
        commands::run(&cli.cmd, cli.format)
    };
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
