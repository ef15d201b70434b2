//! `photonwalk`: reproducible two-photon quantum-walk runs from the command line.

mod commands;
mod failure;
mod manifest;
mod pgm;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    CalibrateArgs, CorrelateArgs, GraphArgs, HeatmapArgs, HomscanArgs, PresetArgs, RerunArgs, ViolationsArgs,
};
use failure::{CmdResult, Failure};

/// Two-photon quantum walks in coupled waveguide lattices
#[derive(Parser, Debug)]
#[command(name = "photonwalk", version, about, term_width = 100)]
pub struct Cli {
    /// Lattice configuration (JSON)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Seed for every random draw of the run
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output directory; the output file for `heatmap` and `preset`
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads (results do not depend on this)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coincidence matrices for indistinguishable, distinguishable and partially distinguishable photons
    Correlate(CorrelateArgs),

    /// Classical-bound violations with counting-noise significance
    Violations(ViolationsArgs),

    /// Export the two-photon configuration graph
    Graph(GraphArgs),

    /// Render a CSV matrix as a 16-bit PGM image
    Heatmap(HeatmapArgs),

    /// Fit lattice parameters to classical intensity measurements
    Calibrate(CalibrateArgs),

    /// Coincidence rate versus relative photon delay
    Homscan(HomscanArgs),

    /// Write a lattice configuration for a standard geometry
    Preset(PresetArgs),

    /// Repeat the run recorded in a manifest
    Rerun(RerunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Correlate(_) => "correlate",
            Command::Violations(_) => "violations",
            Command::Graph(_) => "graph",
            Command::Heatmap(_) => "heatmap",
            Command::Calibrate(_) => "calibrate",
            Command::Homscan(_) => "homscan",
            Command::Preset(_) => "preset",
            Command::Rerun(_) => "rerun",
        }
    }
}

fn run(cli: Cli, argv: Vec<String>) -> CmdResult<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::config(anyhow::anyhow!("cannot start {n} threads: {e}")))?;
    }
    commands::dispatch(&cli, argv)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match run(cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code() as u8)
        }
    }
}
