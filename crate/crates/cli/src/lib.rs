//! Command-line frontend for `fujita-core`.

pub mod commands;
pub mod descriptor;
pub mod envelope;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use fujita_core::oracle::DEFAULT_SEED;

use crate::commands::{ConeClass, Report, WitnessSelection, DEFAULT_SPLIT_BOUND};
use crate::envelope::{ResultEnvelope, Status};

#[derive(Debug, Parser)]
#[command(name = "fujita", version, about = "Convex Fujita numbers and positivity on projective bundles")]
pub struct Cli {
    /// Emit the JSON result envelope instead of the table.
    #[arg(long, global = true)]
    pub structured: bool,
    /// Seed for randomized oracle batches.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Search bound: Θ splitting for `pushforward`, suite size for `verify`.
    #[arg(long, global = true)]
    pub bound: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WitnessArg {
    Lower,
    Upper,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide conFN(P(E)) for the descriptor's base and bundle.
    Confn { descriptor: PathBuf },
    /// Test nefness and ampleness of π*M(a) on P(E).
    ConeTest {
        descriptor: PathBuf,
        /// Base class M, comma separated, e.g. `2` or `1/2,-1`.
        #[arg(long, allow_hyphen_values = true, required_unless_present = "lambda")]
        m: Option<String>,
        /// Fiber degree a.
        #[arg(long, allow_hyphen_values = true, required_unless_present = "lambda")]
        a: Option<String>,
        /// Test r·λ_E instead of an explicit class.
        #[arg(long, conflicts_with_all = ["m", "a"])]
        lambda: bool,
    },
    /// Describe F = π_*(ω_{P(E)/S} ⊗ L) for the descriptor's twists.
    Pushforward { descriptor: PathBuf },
    /// Find a nonempty proper subset summing to 0 modulo r.
    Partition {
        #[arg(required = true, value_delimiter = ',')]
        values: Vec<u64>,
        #[arg(long, short = 'r')]
        modulus: u64,
    },
    /// Construct witnesses for the bounds on conFN(P(E)).
    Witness {
        descriptor: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        kind: WitnessArg,
        /// Twist M for the lower bound witness (required off curves).
        #[arg(long, allow_hyphen_values = true)]
        m: Option<String>,
    },
    /// Run brute-force oracle suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Confn { .. } => "confn",
            Command::ConeTest { .. } => "cone-test",
            Command::Pushforward { .. } => "pushforward",
            Command::Partition { .. } => "partition",
            Command::Witness { .. } => "witness",
            Command::Verify { .. } => "verify",
        }
    }

    fn input(&self) -> Option<String> {
        match self {
            Command::Confn { descriptor }
            | Command::ConeTest { descriptor, .. }
            | Command::Pushforward { descriptor }
            | Command::Witness { descriptor, .. } => Some(descriptor.display().to_string()),
            _ => None,
        }
    }
}

fn dispatch(cli: &Cli) -> anyhow::Result<Report> {
    match &cli.command {
        Command::Confn { descriptor } => commands::cmd_confn(descriptor),
        Command::ConeTest { descriptor, m, a, lambda } => {
            let class = if *lambda {
                ConeClass::ScaledLambda
            } else {
                let m = commands::parse_class(m.as_deref().unwrap_or_default())?;
                let a = commands::parse_rational(a.as_deref().unwrap_or_default())?;
                ConeClass::Explicit { m, a }
            };
            commands::cmd_cone_test(descriptor, class)
        }
        Command::Pushforward { descriptor } => {
            commands::cmd_pushforward(descriptor, cli.bound.unwrap_or(DEFAULT_SPLIT_BOUND))
        }
        Command::Partition { values, modulus } => commands::cmd_partition(values, *modulus),
        Command::Witness { descriptor, kind, m } => {
            let which = match kind {
                WitnessArg::Lower => WitnessSelection::Lower,
                WitnessArg::Upper => WitnessSelection::Upper,
                WitnessArg::All => WitnessSelection::All,
            };
            let m = m.as_deref().map(commands::parse_class).transpose()?;
            commands::cmd_witness(descriptor, which, m)
        }
        Command::Verify { suite } => commands::cmd_verify(suite, cli.seed.unwrap_or(DEFAULT_SEED), cli.bound),
    }
}

/// Runs a parsed command; errors become an error envelope with status 1.
pub fn run(cli: &Cli) -> Report {
    let outcome = std::panic::catch_unwind(|| dispatch(cli)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "internal failure".into());
        Err(anyhow::anyhow!("{msg} (inputs too large for 64-bit rationals?)"))
    });
    outcome.unwrap_or_else(|err| Report {
        envelope: ResultEnvelope::error(cli.command.name(), cli.command.input(), format!("{err:#}")),
        status: Status::Error,
    })
}

/// What to print: the JSON envelope or the table.
pub fn render(cli: &Cli, report: &Report) -> String {
    if cli.structured {
        report.envelope.to_json() + "\n"
    } else {
        report.envelope.render_table()
    }
}
