//! The `kostka` command-line tool: Ehrhart polynomials and h*-vectors of GT
//! polytopes, order polytopes and Birkhoff polytopes, with a JSONL results
//! store for batch runs.

mod commands;
pub mod inputs;
pub mod record;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::run;

#[derive(Debug, Parser)]
#[command(name = "kostka", version, about = "Exact Ehrhart polynomials via reciprocity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ehrhart polynomial of the GT polytope GT(λ/μ, w).
    Ehrhart(GtArgs),
    /// h*-vector and coefficient properties of GT(λ/μ, w).
    Hstar(GtArgs),
    /// Order polytopes of finite posets.
    Order {
        #[command(subcommand)]
        what: OrderCommand,
    },
    /// Ehrhart polynomial of the Birkhoff polytope B_ℓ.
    Birkhoff {
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        json: bool,
    },
    /// Permutation posets near a base permutation whose h* is not real-rooted.
    PermSearch {
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long, default_value = "4,3,2,1")]
        avoid: String,
        #[arg(long)]
        jobs: Option<usize>,
        /// Append finds to this store instead of printing them.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every straight shape λ ⊢ N with a weight pattern such as "1^N" or
    /// "2,1^(N-2)"; results are appended to the store, skipping stored inputs.
    Batch {
        #[arg(long)]
        size: u32,
        #[arg(long)]
        weight_pattern: String,
        #[arg(long, env = "KOSTKA_STORE")]
        out: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Re-checks every record of a store against its own transcript.
    Check {
        #[arg(long, env = "KOSTKA_STORE")]
        store: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct GtArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    #[arg(long, default_value = "")]
    pub mu: String,
    #[arg(short = 'w', long = "weight")]
    pub weight: String,
    #[arg(long)]
    pub json: bool,
    /// Check the polynomial at two fresh dilations (the default).
    #[arg(long, overrides_with = "no_verify")]
    pub verify: bool,
    #[arg(long)]
    pub no_verify: bool,
    /// Cross-check L(1) and L*(1) by brute-force enumeration.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Subcommand)]
pub enum OrderCommand {
    /// Ehrhart polynomial of O(P).
    Ehrhart {
        #[arg(long)]
        poset: String,
        #[arg(long)]
        json: bool,
    },
    /// h*-vector of O(P) and its properties.
    Hstar {
        #[arg(long)]
        poset: String,
        #[arg(long)]
        json: bool,
        /// Tally descents of linear extensions instead of interpolating.
        #[arg(long)]
        linext: bool,
    },
    /// Number of linear extensions and their descent distribution.
    Linext {
        #[arg(long)]
        poset: String,
        #[arg(long)]
        json: bool,
    },
}

/// A failure with its process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub const INPUT: u8 = 1;
    pub const VERIFICATION: u8 = 2;
    pub const RESOURCE: u8 = 3;

    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: Self::INPUT,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<ehrhart_core::Error> for CliError {
    fn from(e: ehrhart_core::Error) -> Self {
        use ehrhart_core::Error as E;
        let code = match e {
            E::VerificationFailed { .. } | E::NonIntegralHStar { .. } => CliError::VERIFICATION,
            E::ResourceGuard(_) | E::BudgetExceeded(_) | E::Cancelled => CliError::RESOURCE,
            _ => CliError::INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}
