//! `onesided`: one-sided polynomial approximation from the command line.

mod commands;
mod config;
mod expr;
mod output;
mod registry;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, Outcome, SpaceArgs};
use config::{parse_k_values, OutputFormat};

#[derive(Parser)]
#[command(
    name = "onesided",
    version,
    about = "One-sided polynomial approximation in weighted integral norms",
    propagate_version = true
)]
struct Cli {
    /// Print the resolved run configuration as JSON and exit.
    #[arg(long, global = true)]
    dump_config: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output format for tables.
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Write the table to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reserved for future randomized pipelines; recorded, not used.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SpaceFlags {
    /// Norm exponent p (1 <= p < infinity).
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Weight id (unit, invsqrt) or an expression in x; defaults to the
    /// function's natural weight.
    #[arg(long)]
    weight: Option<String>,
    /// Quadrature panels per norm integral.
    #[arg(long)]
    panels: Option<usize>,
    /// Gauss nodes per quadrature panel.
    #[arg(long)]
    nodes: Option<usize>,
}

impl SpaceFlags {
    fn as_args(&self) -> SpaceArgs<'_> {
        SpaceArgs {
            weight: self.weight.as_deref(),
            p: self.p,
            panels: self.panels,
            nodes: self.nodes,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Averaged modulus of smoothness of a function.
    Tau {
        /// Function id (constant, identity, abs03, sin10, exp, singular) or
        /// an expression in x.
        #[arg(long = "fn")]
        function: String,
        /// Difference order of the modulus.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Window width(s), comma separated.
        #[arg(long)]
        delta: String,
        #[command(flatten)]
        space: SpaceFlags,
        #[command(flatten)]
        common: Common,
    },
    /// Certified polynomial enclosures of the unit step on [-1, 1].
    SandwichStep {
        /// Degree(s): an integer, a range like 2..40, or a comma list.
        #[arg(long)]
        k: String,
        /// Certification grid size (default scales with the degree).
        #[arg(long)]
        cert_nodes: Option<usize>,
        /// Constraint slack pushing the enclosure strictly one-sided.
        #[arg(long)]
        safety: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// One-sided polynomial sandwich of a function, with error norms.
    Approximate {
        /// Function id or an expression in x.
        #[arg(long = "fn")]
        function: String,
        /// Degree(s): an integer, a range, or a comma list.
        #[arg(long)]
        k: String,
        /// Smoothing width; defaults to 1/k.
        #[arg(long)]
        y: Option<f64>,
        #[command(flatten)]
        space: SpaceFlags,
        #[command(flatten)]
        common: Common,
    },
    /// Grid lower bounds: best one-sided and best unrestricted approximation.
    Oracle {
        /// Function id or an expression in x.
        #[arg(long = "fn")]
        function: String,
        /// Degree(s): an integer, a range, or a comma list.
        #[arg(long)]
        k: String,
        /// Number of grid nodes.
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[command(flatten)]
        space: SpaceFlags,
        #[command(flatten)]
        common: Common,
    },
    /// Run the inequality suite and report every check.
    Verify {
        /// Suite name; only 'default' exists.
        #[arg(long, default_value = "default")]
        suite: String,
        /// Degrees to run, as a range or comma list.
        #[arg(long, default_value = "2,4,8,16")]
        k: String,
        #[command(flatten)]
        common: Common,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let dump = cli.dump_config;
    let (outcome, common) = match dispatch(cli.command) {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return e.exit_code();
        }
    };
    if dump {
        match serde_json::to_string_pretty(&outcome.config) {
            Ok(text) => {
                println!("{text}");
                return 0;
            }
            Err(e) => {
                eprintln!("error: {e}");
                return 1;
            }
        }
    }
    deliver(&outcome, &common)
}

fn dispatch(command: Command) -> Result<(Outcome, Common), CliError> {
    match command {
        Command::Tau { function, k, delta, space, common } => {
            let deltas = commands::parse_deltas(&delta)?;
            let outcome = commands::run_tau(
                &function,
                k,
                &deltas,
                &space.as_args(),
                common.format,
                common.out.as_deref().and_then(|p| p.to_str()),
                common.seed,
            )?;
            Ok((outcome, common))
        }
        Command::SandwichStep { k, cert_nodes, safety, common } => {
            let k_values = parse_k_values(&k).map_err(CliError::Usage)?;
            let outcome = commands::run_sandwich_step(
                &k_values,
                cert_nodes,
                safety,
                common.format,
                common.out.as_deref().and_then(|p| p.to_str()),
                common.seed,
            )?;
            Ok((outcome, common))
        }
        Command::Approximate { function, k, y, space, common } => {
            let k_values = parse_k_values(&k).map_err(CliError::Usage)?;
            let outcome = commands::run_approximate(
                &function,
                &k_values,
                y,
                &space.as_args(),
                common.format,
                common.out.as_deref().and_then(|p| p.to_str()),
                common.seed,
            )?;
            Ok((outcome, common))
        }
        Command::Oracle { function, k, grid, space, common } => {
            let k_values = parse_k_values(&k).map_err(CliError::Usage)?;
            let outcome = commands::run_oracle(
                &function,
                &k_values,
                grid,
                &space.as_args(),
                common.format,
                common.out.as_deref().and_then(|p| p.to_str()),
                common.seed,
            )?;
            Ok((outcome, common))
        }
        Command::Verify { suite, k, common } => {
            let k_values = parse_k_values(&k).map_err(CliError::Usage)?;
            let outcome = commands::run_verify(
                &suite,
                &k_values,
                common.format,
                common.out.as_deref().and_then(|p| p.to_str()),
                common.seed,
            )?;
            Ok((outcome, common))
        }
    }
}

fn deliver(outcome: &Outcome, common: &Common) -> i32 {
    if let Some(path) = &common.out {
        if let Err(e) = std::fs::write(path, &outcome.rendered) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 1;
        }
    }
    for line in &outcome.bare_lines {
        println!("{line}");
    }
    if common.out.is_none() && outcome.bare_lines.is_empty() {
        print!("{}", outcome.rendered);
    }
    if outcome.failures > 0 {
        eprintln!("error: {} verification check(s) failed", outcome.failures);
        return 1;
    }
    0
}
