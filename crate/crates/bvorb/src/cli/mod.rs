//! Command-line front end: `state-space`, `i-function` and `verify`.
//!
//! Exit codes: 0 success, 2 bad input, 3 internal inconsistency or failed
//! check, 4 unsupported hypotheses.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::continuation::{ContinuationError, Side};
use crate::statespace::Theory;

pub use commands::{cmd_i_function, cmd_state_space, cmd_verify, Check, Outcome, VerifyOptions};
pub use config::{Format, RunConfig};
pub use output::Document;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadInput(_) => 2,
            CliError::Internal(_) => 3,
            CliError::Unsupported(_) => 4,
        }
    }
}

impl From<ContinuationError> for CliError {
    fn from(e: ContinuationError) -> Self {
        match e {
            ContinuationError::UnsupportedCurve(_) | ContinuationError::UnsupportedHypotheses(_) => CliError::Unsupported(e.to_string()),
            ContinuationError::NonConvergent(_) => CliError::BadInput(e.to_string()),
            e => CliError::Internal(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bvorb", version, about = "State spaces, I-functions and LG/CY checks for Borcea-Voisin orbifolds")]
pub struct Cli {
    /// TOML configuration file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// K3 weights, e.g. 3,1,1,1.
    #[arg(long, global = true)]
    pub k3: Option<String>,
    /// quartic or cubic-sextic.
    #[arg(long, global = true)]
    pub curve: Option<String>,
    /// Novikov degree truncation.
    #[arg(long = "max-deg", global = true)]
    pub max_deg: Option<u32>,
    /// Order in z kept by series expansions.
    #[arg(long = "z-order", global = true)]
    pub z_order: Option<u32>,
    /// Working precision in bits.
    #[arg(long, global = true)]
    pub prec: Option<usize>,
    /// Tolerance for the selected check, e.g. 1e-40.
    #[arg(long, global = true)]
    pub tol: Option<String>,
    /// json, csv or table.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Recorded in the output; no command samples randomly.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graded basis and Hodge diamond of one theory.
    StateSpace {
        /// gw, fjrw, mixed-fg or mixed-gf.
        #[arg(long, default_value = "gw")]
        theory: String,
        /// Narrow (FJRW) or ambient (GW) part only.
        #[arg(long)]
        narrow: bool,
    },
    /// I-function terms up to the Novikov truncation.
    IFunction {
        #[arg(long, default_value = "gw")]
        theory: String,
    },
    /// Runs a consistency check; exit status 0 iff it passes.
    Verify {
        /// homogeneity, oracle, symplectic, continuation or statespace-iso.
        #[arg(long)]
        check: String,
        /// e, k or both (continuation and symplectic checks).
        #[arg(long)]
        side: Option<String>,
        /// |q̃| for the contour-integral check.
        #[arg(long)]
        point: Option<String>,
    },
}

fn build_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))?;
            RunConfig::from_toml_str(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(k) = &cli.k3 {
        cfg.set_k3(k)?;
    }
    if let Some(c) = &cli.curve {
        cfg.orbifold.curve = c.clone();
    }
    if let Some(d) = cli.max_deg {
        cfg.truncation.novikov_degree = d;
    }
    if let Some(z) = cli.z_order {
        cfg.truncation.z_order = z;
    }
    if let Some(p) = cli.prec {
        cfg.precision_bits = p;
    }
    if let Some(t) = &cli.tol {
        for key in ["symplectic", "continuation", "contour"] {
            cfg.tolerances.insert(key.into(), t.clone());
        }
    }
    if let Some(f) = &cli.format {
        cfg.output.format = Format::parse(f).ok_or_else(|| CliError::BadInput(format!("unknown format {f:?}")))?;
    }
    if let Some(o) = &cli.out {
        cfg.output.path = Some(o.display().to_string());
    }
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn theory(s: &str) -> Result<Theory, CliError> {
    Theory::parse(s).ok_or_else(|| CliError::BadInput(format!("unknown theory {s:?}")))
}

/// Runs a parsed command; returns the rendered output and the exit code.
pub fn execute(cli: &Cli) -> Result<(String, i32, Option<String>), CliError> {
    let cfg = build_config(cli)?;
    let (doc, code) = match &cli.command {
        Command::StateSpace { theory: t, narrow } => (cmd_state_space(&cfg, theory(t)?, *narrow)?, 0),
        Command::IFunction { theory: t } => (cmd_i_function(&cfg, theory(t)?)?, 0),
        Command::Verify { check, side, point } => {
            let check = Check::parse(check).ok_or_else(|| CliError::BadInput(format!("unknown check {check:?}")))?;
            let side = side.as_deref().map(|s| Side::parse(s).ok_or_else(|| CliError::BadInput(format!("unknown side {s:?}")))).transpose()?;
            let o = cmd_verify(&cfg, check, &VerifyOptions { side, point: point.clone() })?;
            (o.doc, if o.passed { 0 } else { 3 })
        }
    };
    Ok((doc.render(cfg.output.format)?, code, cfg.output.path))
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code, path)) => {
            let written = match path {
                Some(p) => std::fs::write(&p, text.as_bytes()).map_err(|e| format!("{p}: {e}")),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => code,
                Err(m) => {
                    let _ = writeln!(stderr, "error: {m}");
                    2
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
