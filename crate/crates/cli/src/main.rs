//! `galqm` command line: `verify`, `spin-rep` and `evolve`.
//!
//! Exit codes: 0 when every check passes, 1 on a failed check or invariant,
//! 2 on usage or configuration errors.

mod config;
mod evolve;
mod report;
mod spin_rep;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "galqm", version, about = "Galilean quantum mechanics checks and grid simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configured random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (report for verify and spin-rep, CSV for evolve).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the JSON report on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Group axioms, cocycle, Jacobi table, spin sweep and sector checks.
    Verify(Common),
    /// Prints the spin-j matrices and their invariant checks as JSON.
    SpinRep {
        /// Spin as `3/2`, `1` or `2.5`.
        j: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evolves the configured initial state and writes a CSV trajectory.
    Evolve(Common),
}

enum Failure {
    Check,
    Usage(String),
}

fn load(common: &Common) -> Result<RunConfig, Failure> {
    let mut config = match &common.config {
        Some(path) => RunConfig::load(path).map_err(Failure::Usage)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn emit(common: &Common, json: &str, path: Option<&PathBuf>, summary: impl FnOnce()) -> Result<(), Failure> {
    if let Some(path) = path {
        report::write(path, json).map_err(Failure::Usage)?;
    }
    if common.json {
        print!("{json}");
    } else {
        summary();
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Verify(common) => {
            let config = load(&common)?;
            let report = verify::run(&config).map_err(Failure::Usage)?;
            let path = common.out.as_ref().or(config.output.report.as_ref());
            emit(&common, &report::to_json(&report), path, || {
                for c in &report.checks {
                    let status = if c.passed { "PASS" } else { "FAIL" };
                    println!("{status} {:<15} max defect {:.3e} (tol {:.0e}): {}", c.name, c.max_defect, c.tolerance, c.detail);
                }
            })?;
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::SpinRep { j, common } => {
            let spin = spin_rep::parse_spin(&j).map_err(Failure::Usage)?;
            let config = load(&common)?;
            let report = spin_rep::run(spin, &config).map_err(Failure::Usage)?;
            let json = report::to_json(&report);
            if let Some(path) = &common.out {
                report::write(path, &json).map_err(Failure::Usage)?;
            }
            print!("{json}");
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Evolve(common) => {
            let config = load(&common)?;
            let trajectory = evolve::run(&config).map_err(Failure::Usage)?;
            match common.out.as_ref().or(config.output.trajectory.as_ref()) {
                Some(path) => {
                    let file = std::fs::File::create(path)
                        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
                    evolve::write_csv(&trajectory.rows, file).map_err(Failure::Usage)?;
                    if let Some(report_path) = &config.output.report {
                        report::write(report_path, &report::to_json(&trajectory.report)).map_err(Failure::Usage)?;
                    }
                    if common.json {
                        print!("{}", report::to_json(&trajectory.report));
                    }
                }
                None if common.json => print!("{}", report::to_json(&trajectory.report)),
                None => evolve::write_csv(&trajectory.rows, std::io::stdout().lock()).map_err(Failure::Usage)?,
            }
            if let Some(reason) = &trajectory.report.failure {
                eprintln!("invariant violated: {reason}");
                return Err(Failure::Check);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(Failure::Check) => 1,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    };
    std::io::stdout().flush().ok();
    ExitCode::from(code)
}
