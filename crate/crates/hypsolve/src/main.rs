use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hypsolve::driver::{self, RunField, ScenarioConfig};
use hypsolve::model::MODEL_NAMES;
use hypsolve::SolverError;

#[derive(Parser)]
#[command(name = "hypsolve", version, about = "High-order solver for hyperbolic systems with stiff sources")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario once and report the outcome.
    Run {
        /// TOML scenario config.
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a scenario over its refinement list and print the error table.
    Convergence {
        /// TOML scenario config with a `refinements` list.
        #[arg(long)]
        config: PathBuf,
    },
    /// List the built-in models and scenarios.
    ListModels,
    /// Check the boundary stage solves against closed-form references.
    VerifyOracle,
}

fn load_config(path: &PathBuf) -> Result<ScenarioConfig, SolverError> {
    let mut cfg = ScenarioConfig::from_file(path)?;
    // HYPSOLVE_OUTPUT_DIR overrides the config's output directory.
    if let Ok(dir) = std::env::var("HYPSOLVE_OUTPUT_DIR") {
        if !dir.is_empty() {
            cfg.output_dir = Some(PathBuf::from(dir));
        }
    }
    Ok(cfg)
}

fn exit_for(e: &SolverError) -> ExitCode {
    match e {
        SolverError::Config(_) => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config } => load_config(config).and_then(|cfg| {
            let r = driver::run_scenario(&cfg)?;
            let size = match &r.field {
                RunField::One(grid, _) => format!("{} nodes", grid.n),
                RunField::Two(grid, _) => format!("{} x {} lattice", grid.nx, grid.ny),
            };
            println!(
                "{}: {} steps on {} in {:.2}s",
                cfg.scenario, r.steps, size, r.wall_seconds
            );
            if let Some(n) = r.norms {
                println!("errors: L1 = {:.6e}  L2 = {:.6e}  Linf = {:.6e}", n.l1, n.l2, n.linf);
            }
            if let Some(dir) = &cfg.output_dir {
                println!("output written to {}", dir.display());
            }
            Ok(())
        }),
        Command::Convergence { config } => load_config(config).and_then(|cfg| {
            let report = driver::convergence_study(&cfg)?;
            print!("{}", report.table());
            Ok(())
        }),
        Command::ListModels => {
            println!("models:");
            for name in MODEL_NAMES {
                println!("  {name}");
            }
            println!("scenarios:");
            for (name, _) in driver::scenarios::SCENARIO_NAMES {
                println!("  {name}");
            }
            Ok(())
        }
        Command::VerifyOracle => driver::oracle_report().map(|r| print!("{r}")),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}
