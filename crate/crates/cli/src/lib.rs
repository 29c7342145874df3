//! Command line driver: every subcommand runs one family of checks and
//! produces a JSON artifact whose content depends only on the arguments.

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

pub mod commands;

#[derive(Debug, Parser)]
#[command(name = "dp-hlog", version, about = "Lines, conic fibrations and hyperlogarithm identities on del Pezzo surfaces")]
pub struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, env = "DP_HLOG_THREADS")]
    pub threads: Option<usize>,
    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON artifact here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Lines, conic classes and reducible fibers.
    Enumerate {
        #[arg(long)]
        rank: usize,
    },
    /// The Weyl group as a permutation group on lines.
    Group {
        #[arg(long)]
        rank: usize,
        /// Report only the group order.
        #[arg(long)]
        count_only: bool,
        /// Orbit and stabilizer of a line or conic class, given as a JSON
        /// array of coefficients in the basis (h, l_1, ..., l_r).
        #[arg(long)]
        orbit: Option<String>,
    },
    /// Exact kernel certificate for the wedge vectors of all conic fibrations.
    Certify {
        #[arg(long)]
        rank: usize,
        /// Allow the rank-8 attempt under a memory budget.
        #[arg(long)]
        stretch: bool,
        /// Entry budget for the stretch run.
        #[arg(long, default_value_t = dp_hlog_core::wedge_kernel::DEFAULT_STRETCH_BUDGET)]
        budget: usize,
        /// Repeat with this many randomized fiber orderings (seeds start at --seed).
        #[arg(long, default_value_t = 0)]
        stability_seeds: u64,
    },
    /// Re-verify a certificate written by `certify`.
    Replay { certificate: PathBuf },
    /// Character inner products over the full group.
    Characters {
        #[arg(long)]
        rank: usize,
        /// Also reproduce the D5 computation on the 18 class representatives.
        #[arg(long)]
        d5_full: bool,
    },
    /// Exact symbol computations. Without selection flags all parts run.
    Symbols {
        /// Antisymmetrization identities of weights 3, 4 and 5.
        #[arg(long)]
        check_asym: bool,
        /// Exact shuffle laws on random word triples.
        #[arg(long)]
        check_shuffle: bool,
        /// Residue and tensor checks of the ten-term identity.
        #[arg(long)]
        check_dp4: bool,
        #[arg(long, default_value_t = 100)]
        shuffle_pairs: usize,
        /// Number of random (gamma, pi) instances when none is given.
        #[arg(long, default_value_t = 5)]
        dp4_instances: usize,
        /// Random evaluation points per residue.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        pi: Option<String>,
    },
    /// Numerical evaluation of the identity along planar segments.
    Numeric {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        pi: Option<String>,
        /// Sample points; defaults to 20 for rank 4 and 10 for rank 5.
        #[arg(long)]
        samples: Option<usize>,
        /// Residual threshold; defaults to 1e-8 for rank 4 and 1e-6 for rank 5.
        #[arg(long)]
        tol: Option<f64>,
        /// Random word pairs for the numeric shuffle check.
        #[arg(long, default_value_t = 50)]
        shuffle_pairs: usize,
    },
    /// Every route applicable to the rank.
    All {
        #[arg(long)]
        rank: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Enumerate { .. } => "enumerate",
            Command::Group { .. } => "group",
            Command::Certify { .. } => "certify",
            Command::Replay { .. } => "replay",
            Command::Characters { .. } => "characters",
            Command::Symbols { .. } => "symbols",
            Command::Numeric { .. } => "numeric",
            Command::All { .. } => "all",
        }
    }
}

/// Failure families, each with its own exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Io,
    Usage,
    Enumeration,
    Kernel,
    Character,
    Numeric,
    Symbolic,
}

impl Family {
    pub fn exit_code(self) -> i32 {
        match self {
            Family::Io => 1,
            Family::Usage => 2,
            Family::Enumeration => 3,
            Family::Kernel => 4,
            Family::Character => 5,
            Family::Numeric => 6,
            Family::Symbolic => 7,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Io => "io",
            Family::Usage => "usage",
            Family::Enumeration => "enumeration",
            Family::Kernel => "kernel",
            Family::Character => "character",
            Family::Numeric => "numeric",
            Family::Symbolic => "symbolic",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CliError {
    pub family: Family,
    pub message: String,
}

impl CliError {
    pub fn new(family: Family, message: impl Into<String>) -> Self {
        Self { family, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(Family::Usage, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.family.name(), self.message)
    }
}

impl std::error::Error for CliError {}

/// Result of one route: whether its checks passed and what it computed.
#[derive(Clone, Debug)]
pub struct Section {
    pub family: Family,
    pub pass: bool,
    pub result: Value,
}

/// The artifact and the exit status of a run.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub artifact: Value,
    pub exit_code: i32,
}

/// Settings shared by all subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
}

impl From<&Cli> for RunConfig {
    fn from(cli: &Cli) -> Self {
        Self { command: cli.command.clone(), seed: cli.seed }
    }
}

fn config_json(config: &RunConfig) -> Value {
    let c = &config.command;
    let mut v = match c {
        Command::Enumerate { rank } => json!({ "rank": rank }),
        Command::Group { rank, count_only, orbit } => {
            json!({ "rank": rank, "count_only": count_only, "orbit": orbit })
        }
        Command::Certify { rank, stretch, budget, stability_seeds } => {
            json!({ "rank": rank, "stretch": stretch, "budget": budget, "stability_seeds": stability_seeds })
        }
        Command::Replay { certificate } => json!({ "certificate": certificate.display().to_string() }),
        Command::Characters { rank, d5_full } => json!({ "rank": rank, "d5_full": d5_full }),
        Command::Symbols { check_asym, check_shuffle, check_dp4, shuffle_pairs, dp4_instances, trials, gamma, pi } => {
            json!({
                "check_asym": check_asym,
                "check_shuffle": check_shuffle,
                "check_dp4": check_dp4,
                "shuffle_pairs": shuffle_pairs,
                "dp4_instances": dp4_instances,
                "trials": trials,
                "gamma": gamma,
                "pi": pi,
            })
        }
        Command::Numeric { rank, gamma, pi, samples, tol, shuffle_pairs } => json!({
            "rank": rank,
            "gamma": gamma,
            "pi": pi,
            "samples": samples,
            "tol": tol,
            "shuffle_pairs": shuffle_pairs,
        }),
        Command::All { rank } => json!({ "rank": rank }),
    };
    v["seed"] = json!(config.seed);
    v
}

/// Runs one subcommand. The artifact is produced on success and on failure.
pub fn run(config: &RunConfig) -> Outcome {
    let outcome = commands::dispatch(config);
    let mut artifact = json!({
        "command": config.command.name(),
        "config": config_json(config),
        "version": env!("CARGO_PKG_VERSION"),
    });
    let exit_code = match outcome {
        Ok(section) => {
            artifact["pass"] = json!(section.pass);
            artifact["result"] = section.result;
            if section.pass {
                0
            } else {
                section.family.exit_code()
            }
        }
        Err(e) => {
            artifact["pass"] = json!(false);
            artifact["error"] = json!({ "family": e.family.name(), "message": e.message });
            e.family.exit_code()
        }
    };
    Outcome { artifact, exit_code }
}

/// Serialized artifact: pretty JSON with sorted keys and a trailing newline.
pub fn render(artifact: &Value) -> String {
    let mut s = serde_json::to_string_pretty(artifact).expect("JSON values serialize");
    s.push('\n');
    s
}
