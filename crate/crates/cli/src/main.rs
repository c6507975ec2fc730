use std::path::PathBuf;
use std::process::ExitCode;

use catworld_cli::{run, Command, Overrides};
use clap::Parser;

/// Analog-spacetime cell design and interferometer simulation.
#[derive(Parser)]
#[command(name = "catworld", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Experiment file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding output.directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sampling seed, overriding run.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Emit SVG plots.
    #[arg(long)]
    plots: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let overrides = Overrides {
        out: args.out,
        seed: args.seed,
        plots: args.plots,
    };
    match run(args.command, &args.config, &overrides) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("invariant: {}", e.invariant());
            ExitCode::from(e.exit_code())
        }
    }
}
