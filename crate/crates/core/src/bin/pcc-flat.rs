use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pcc_flat::commands::{
    cmd_benchmark, cmd_generate, cmd_plot, cmd_simulate, BenchmarkArgs, GenerateArgs, PlotArgs, SimulateArgs,
};

#[derive(Parser)]
#[command(name = "pcc-flat", version, about = "Flat-output trajectories for planar soft arms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan curvatures and feedforward inputs for a tip path.
    Generate(GenerateArgs),
    /// Integrate the dynamics under the planned inputs.
    Simulate(SimulateArgs),
    /// Sweep the timestep and time each planning iteration.
    Benchmark(BenchmarkArgs),
    /// Render a CSV export as SVG.
    Plot(PlotArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Benchmark(a) => cmd_benchmark(a),
        Command::Plot(a) => cmd_plot(a),
    };
    match outcome {
        Ok(msg) => {
            println!("{msg}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
