use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use vho_core::report;
use vho_core::{parse_scenario, Direction, Scheme};

#[derive(Parser)]
#[command(name = "vho", version, about = "Vertical handover decision simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank the networks in a decision-matrix CSV with TOPSIS.
    Decide {
        #[arg(long)]
        matrix: PathBuf,
        /// Comma-separated weights, one per criterion column.
        #[arg(long, value_delimiter = ',')]
        weights: Vec<f64>,
        /// Comma-separated `b` (benefit) or `c` (cost), one per criterion.
        #[arg(long, value_delimiter = ',')]
        directions: Vec<String>,
    },
    /// Run one scenario and write events.csv and summary.csv.
    Simulate {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Override the scenario's scheme (CVHD, DVHD or TDVHD).
        #[arg(long)]
        scheme: Option<Scheme>,
    },
    /// Run every scheme on 2, 3 and 4 stations and write compare.csv.
    Compare {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Decide {
            matrix,
            weights,
            directions,
        } => {
            let dirs = directions
                .iter()
                .map(|d| {
                    Direction::parse(d)
                        .with_context(|| format!("direction {d:?} is not `b` or `c`"))
                })
                .collect::<Result<Vec<_>>>()?;
            print!("{}", report::decide(&matrix, &weights, &dirs)?);
        }
        Command::Simulate {
            scenario,
            out,
            seed,
            scheme,
        } => {
            let mut sc = parse_scenario(&scenario)?;
            if let Some(seed) = seed {
                sc.seed = seed;
            }
            if let Some(scheme) = scheme {
                sc.scheme = scheme;
            }
            let row = report::simulate_to_dir(&sc, &out)?;
            eprintln!(
                "{}: {} handover(s), {} blocked, results in {}",
                row.scheme,
                row.handover_events,
                row.blocked_handovers,
                out.display()
            );
        }
        Command::Compare {
            scenario,
            out,
            seed,
        } => {
            let mut sc = parse_scenario(&scenario)?;
            if let Some(seed) = seed {
                sc.seed = seed;
            }
            if sc.stations.len() < 4 {
                bail!(
                    "{}: compare needs at least 4 stations, found {}",
                    scenario.display(),
                    sc.stations.len()
                );
            }
            let rows = report::compare_to_dir(&sc, &out)?;
            eprintln!(
                "{} runs written to {}",
                rows.len(),
                out.join("compare.csv").display()
            );
        }
    }
    Ok(())
}
