//! Batch front end: reads a JSON file, runs one construction or check, and
//! prints a canonical JSON report. Exit code 0 on pass, 1 on fail, 2 on bad input.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hyperideal::angles::TOL_EQ;
use hyperideal::conemetric::Budget;

use commands::{run, Output, Settings};

#[derive(Parser)]
#[command(
    name = "hyperideal",
    version,
    about = "Hyperbolic polyhedra, their duals and dihedral angles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Triangle crossings per saddle connection in the geodesic search.
    #[arg(long, global = true, default_value_t = Budget::default().depth)]
    budget_depth: usize,
    /// Random shots in the geodesic search.
    #[arg(long, global = true, default_value_t = Budget::default().shots)]
    budget_shots: usize,
    /// Width of the band around 2π read as an equality.
    #[arg(long, global = true, default_value_t = TOL_EQ)]
    tol_eq: f64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the invariants of a polyhedron file.
    Validate { input: PathBuf },
    /// Dual polyhedron, dual edge lengths and cone angles.
    Dual { input: PathBuf },
    /// Cut off every hyperideal vertex.
    Truncate { input: PathBuf },
    /// Recover a hyperideal polyhedron from a truncation file.
    Untruncate { input: PathBuf },
    /// Dihedral and exterior angles of every edge.
    Angles { input: PathBuf },
    /// Membership of a weighted graph in K_Γ.
    CheckAngles { input: PathBuf },
    /// Build the dual metric of a weighted graph.
    Metric { input: PathBuf },
    /// Search for short closed geodesics on a metric or a weighted graph.
    GeodesicSearch { input: PathBuf },
    /// Numerical checks of the Pogorelov maps.
    PogorelovSelftest {
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Klein-model OBJ of a polyhedron.
    ExportObj { input: PathBuf },
}

impl Command {
    fn name_and_input(&self) -> (&'static str, Option<&PathBuf>) {
        match self {
            Command::Validate { input } => ("validate", Some(input)),
            Command::Dual { input } => ("dual", Some(input)),
            Command::Truncate { input } => ("truncate", Some(input)),
            Command::Untruncate { input } => ("untruncate", Some(input)),
            Command::Angles { input } => ("angles", Some(input)),
            Command::CheckAngles { input } => ("check-angles", Some(input)),
            Command::Metric { input } => ("metric", Some(input)),
            Command::GeodesicSearch { input } => ("geodesic-search", Some(input)),
            Command::PogorelovSelftest { .. } => ("pogorelov-selftest", None),
            Command::ExportObj { input } => ("export-obj", Some(input)),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, path) = cli.command.name_and_input();
    let settings = Settings {
        seed: cli.seed,
        budget: Budget {
            depth: cli.budget_depth,
            shots: cli.budget_shots,
            seed: cli.seed,
            ..Budget::default()
        },
        tol_eq: cli.tol_eq,
        samples: match cli.command {
            Command::PogorelovSelftest { samples } => samples,
            _ => 0,
        },
    };
    let input = match path {
        Some(path) => match std::fs::read(path) {
            Ok(bytes) => bytes,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        // The self-test has no file; its digest covers the parameters.
        None => format!(
            "pogorelov-selftest seed={} samples={}",
            cli.seed, settings.samples
        )
        .into_bytes(),
    };

    let (text, code) = match run(name, &input, &settings) {
        Ok(Output::Report(r)) => {
            let code = if r.passed { 0 } else { 1 };
            (r.to_canonical_json(), code)
        }
        Ok(Output::Text(t)) => (t, 0),
        Err(e) => {
            eprintln!("error: {}", e.0);
            return ExitCode::from(2);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
