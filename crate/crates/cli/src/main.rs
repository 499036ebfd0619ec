//! `rainbow`: generate colorings of K_N, build rainbow spanning-tree families,
//! and re-check certificates.
//!
//! Exit codes: 0 when every verifier run passed, 1 when one failed, 2 on
//! invalid input or an unsupported order.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rainbow_core::latin::TransversalStrategy;

#[derive(Parser, Debug)]
#[command(
    name = "rainbow",
    version,
    about = "Rainbow spanning-tree families in edge-colored complete graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Roundrobin,
    Xor,
    Random,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a proper (N-1)-edge-coloring of K_N.
    Gen {
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "roundrobin")]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Kempe moves applied by `--kind random`.
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two or three edge-disjoint isomorphic rainbow spanning trees.
    Trees {
        /// Coloring file; omit with `--instances`.
        #[arg(required_unless_present = "instances")]
        input: Option<PathBuf>,
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        count: u8,
        #[arg(long, conflicts_with = "instances")]
        out: Option<PathBuf>,
        /// Batch mode: random colorings with seeds `seed..seed + instances`.
        #[arg(long, requires = "order", conflicts_with = "input")]
        instances: Option<usize>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
    },
    /// Partition of E(K_N) into N/2 isomorphic rainbow spanning trees for a
    /// coloring whose color pairs all form 4-cycles.
    Decompose {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a coloring and optionally a forest (plain or DOT).
    Verify {
        coloring: PathBuf,
        forest: Option<PathBuf>,
        #[arg(long)]
        disjoint: bool,
        #[arg(long)]
        isomorphic: bool,
        #[arg(long)]
        partition: bool,
    },
    /// 2^n disjoint transversals of the group square of Z_2^n.
    Latin {
        #[arg(long)]
        n: u32,
        /// recursive or orthomorphism; chosen by size when omitted.
        #[arg(long)]
        strategy: Option<TransversalStrategy>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive search for k disjoint rainbow spanning trees, or a full
    /// partition with `--partition`.
    Oracle {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        isomorphic: bool,
        #[arg(long)]
        partition: bool,
        /// Node budget.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// DOT description of a forest, one cluster per tree.
    Export {
        forest: PathBuf,
        coloring: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let start = Instant::now();
    let result = match cli.command {
        Command::Gen { order, kind, seed, steps, out } => {
            commands::gen(order, kind, seed, steps).map(|o| (o, out))
        }
        Command::Trees { input, count, out, instances, order, seed, steps } => match instances {
            Some(k) => commands::trees_batch(count, k, order.unwrap_or(0), seed, steps).map(|o| (o, None)),
            None => commands::trees(&input.expect("required by clap"), count).map(|o| (o, out)),
        },
        Command::Decompose { input, out } => commands::decompose(&input).map(|o| (o, out)),
        Command::Verify { coloring, forest, disjoint, isomorphic, partition } => {
            commands::verify(&coloring, forest.as_deref(), disjoint, isomorphic, partition).map(|o| (o, None))
        }
        Command::Latin { n, strategy, out } => commands::latin(n, strategy).map(|o| (o, out)),
        Command::Oracle { input, k, isomorphic, partition, budget, out } => {
            commands::oracle(&input, k, isomorphic, partition, budget).map(|o| (o, out))
        }
        Command::Export { forest, coloring, out } => commands::export(&forest, &coloring).map(|o| (o, out)),
    };
    let (mut output, out) = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    output.report.command = echo;
    match output.emit(out.as_deref()) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    if output.report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
