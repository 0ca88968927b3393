use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use inlimit::cli;

#[derive(Parser)]
#[command(name = "inlimit", about = "Bounded simulation and verification of learning in the limit")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse an experiment spec, run every job, and report verdicts.
    Run {
        spec: PathBuf,
        /// Override the semantic universe bound.
        #[arg(long)]
        bound: Option<u32>,
        /// Override the default text horizon.
        #[arg(long)]
        horizon: Option<usize>,
        /// Use a single seed for seeded texts instead of the default list.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the full reports as JSON to this path.
        #[arg(long)]
        json: Option<String>,
    },
    /// Re-check a dumped trace against the restriction verifiers.
    Verify {
        trace: PathBuf,
        /// Restriction tags and convergence modes to check, e.g. Cons,Ex.
        #[arg(long, value_delimiter = ',')]
        check: Option<Vec<String>>,
        /// Target language, `finite:{..}` or `cofinite:{..}`.
        #[arg(long)]
        target: Option<String>,
    },
    /// List the built-in families, learners, and transforms.
    Catalog,
    /// Search for a pair of texts an iterative learner cannot distinguish.
    FalsifyIt {
        learner: String,
        #[arg(long, default_value_t = 30)]
        horizon: usize,
    },
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { cli::EXIT_USAGE as u8 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match args.cmd {
        Cmd::Run {
            spec,
            bound,
            horizon,
            seed,
            json,
        } => cli::cmd_run(
            &spec,
            &cli::RunOpts {
                bound,
                horizon,
                seed,
                json,
            },
        ),
        Cmd::Verify { trace, check, target } => {
            cli::cmd_verify(&trace, check.as_deref(), target.as_deref())
        }
        Cmd::Catalog => cli::cmd_catalog(),
        Cmd::FalsifyIt { learner, horizon } => cli::cmd_falsify_it(&learner, horizon),
    };
    ExitCode::from(code as u8)
}
