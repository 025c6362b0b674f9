//! Command-line front end for the squeezing simulator.

mod commands;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CmdResult, Document, Failure, Format};
use scenario::Scenario;

#[derive(Parser)]
#[command(
    name = "levisqueeze",
    version,
    about = "Simulate and design mechanical squeezing from the optomechanical instability"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (JSON).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Use the closed-form reduced model of the unstable mode (simulate only).
    #[arg(long)]
    reduced: bool,
    /// Replace displacement noise with the thermal bath from the scenario.
    #[arg(long)]
    thermal_bath: bool,
    /// Parse and echo the fully resolved scenario instead of running.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evolve the Gaussian state and report squeezing diagnostics over time.
    Simulate(RunArgs),
    /// Report the unstable-regime canonical transformation and rates.
    Normalform(RunArgs),
    /// Sample the mechanical Wigner function on a phase-space grid.
    Wigner(RunArgs),
    /// Tabulate a stability diagram or a squeezing-at-optimal-detuning map.
    Map(RunArgs),
    /// Sweep the cavity length through the physical-setup feasibility table.
    Sweep(RunArgs),
    /// Minimize the asymptotic variance over the detuning.
    Optimize(RunArgs),
    /// Write the bundled figure-reproduction scenarios into a directory.
    Recipes {
        /// Directory receiving one scenario file per recipe.
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
        /// Also run each recipe, writing CSV results next to the scenarios.
        #[arg(long)]
        run: bool,
    },
}

fn load(args: &RunArgs) -> CmdResult<Scenario> {
    Scenario::from_path(&args.config).map_err(Failure::Config)
}

fn dump(args: &RunArgs) -> CmdResult<()> {
    let sc = load(args)?;
    let mut text = serde_json::to_string_pretty(&sc).expect("scenario serializes");
    text.push('\n');
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_table(args: &RunArgs, f: impl FnOnce(&Scenario, &RunArgs) -> CmdResult<Document>) -> CmdResult<()> {
    if args.dump_config {
        return dump(args);
    }
    let sc = load(args)?;
    let doc = f(&sc, args)?;
    doc.write(args.out.as_deref(), args.format)
}

fn reject_reduced(args: &RunArgs, cmd: &str) -> CmdResult<()> {
    if args.reduced {
        return Err(Failure::Config(format!("--reduced only applies to `simulate`, not `{cmd}`")));
    }
    Ok(())
}

fn dispatch(cmd: &Cmd) -> CmdResult<()> {
    match cmd {
        Cmd::Simulate(a) => {
            run_table(a, |sc, a| commands::simulate(sc, a.reduced, a.thermal_bath))
        }
        Cmd::Normalform(a) => {
            reject_reduced(a, "normalform")?;
            run_table(a, |sc, _| commands::normalform(sc))
        }
        Cmd::Wigner(a) => {
            reject_reduced(a, "wigner")?;
            run_table(a, |sc, _| commands::wigner(sc))
        }
        Cmd::Map(a) => {
            reject_reduced(a, "map")?;
            run_table(a, |sc, _| commands::map(sc))
        }
        Cmd::Sweep(a) => {
            reject_reduced(a, "sweep")?;
            run_table(a, |sc, _| commands::sweep(sc))
        }
        Cmd::Optimize(a) => {
            reject_reduced(a, "optimize")?;
            run_table(a, |sc, a| commands::optimize(sc, a.thermal_bath))
        }
        Cmd::Recipes { out, run } => commands::emit_recipes(out, *run),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
