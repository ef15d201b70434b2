//! Subcommand implementations. Each command collects the files it writes and
//! finishes by writing a manifest that names them.

mod calibrate;
mod correlate;
mod graph;
mod heatmap;
mod homscan;
mod preset;
mod violations;

use std::path::{Path, PathBuf};

use anyhow::anyhow;
use clap::Parser;
use photonwalk::correlations::Branch;
use photonwalk::{Lattice, Propagator64};

use crate::failure::{CmdResult, Context, Failure};
use crate::manifest::{RunManifest, TOOL_VERSION};
use crate::{Cli, Command};

pub use calibrate::CalibrateArgs;
pub use correlate::CorrelateArgs;
pub use graph::GraphArgs;
pub use heatmap::HeatmapArgs;
pub use homscan::HomscanArgs;
pub use preset::PresetArgs;
pub use violations::ViolationsArgs;

pub const DEFAULT_OUT_DIR: &str = "out";

#[derive(clap::Args, Debug)]
pub struct RerunArgs {
    /// Manifest written by an earlier run
    pub manifest: PathBuf,
}

/// State shared by a single command invocation.
pub struct Run<'a> {
    pub cli: &'a Cli,
    argv: Vec<String>,
    outputs: Vec<PathBuf>,
}

impl<'a> Run<'a> {
    pub fn seed(&self) -> u64 {
        self.cli.seed
    }

    /// Output directory for commands that write several files.
    pub fn out_dir(&self) -> PathBuf {
        self.cli.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }

    pub fn lattice(&self) -> CmdResult<Lattice> {
        let path = self
            .cli
            .config
            .as_deref()
            .ok_or_else(|| Failure::config(anyhow!("`{}` needs --config", self.cli.command.name())))?;
        photonwalk::io::read_lattice(path).input(format!("reading lattice config {}", path.display()))
    }

    pub fn record(&mut self, paths: impl IntoIterator<Item = PathBuf>) {
        self.outputs.extend(paths);
    }

    pub fn write_manifest(self, path: &Path) -> CmdResult<()> {
        let manifest = RunManifest {
            command: self.cli.command.name().to_string(),
            config_path: self.cli.config.clone(),
            seed: self.cli.seed,
            outputs: self.outputs,
            tool_version: TOOL_VERSION.to_string(),
            argv: self.argv,
        };
        manifest.write(path)
    }

    /// Manifest inside the output directory.
    pub fn finish(self) -> CmdResult<()> {
        let path = self.out_dir().join("manifest.json");
        self.write_manifest(&path)
    }
}

pub fn dispatch(cli: &Cli, argv: Vec<String>) -> CmdResult<()> {
    let mut run = Run { cli, argv, outputs: Vec::new() };
    match &cli.command {
        Command::Correlate(a) => correlate::cmd_correlate(&mut run, a)?,
        Command::Violations(a) => violations::cmd_violations(&mut run, a)?,
        Command::Graph(a) => graph::cmd_graph(&mut run, a)?,
        Command::Heatmap(a) => return heatmap::cmd_heatmap(run, a),
        Command::Calibrate(a) => return calibrate::cmd_calibrate(run, a),
        Command::Homscan(a) => homscan::cmd_homscan(&mut run, a)?,
        Command::Preset(a) => return preset::cmd_preset(run, a),
        Command::Rerun(a) => return rerun(a),
    }
    run.finish()
}

fn rerun(args: &RerunArgs) -> CmdResult<()> {
    let manifest = RunManifest::read(&args.manifest)?;
    manifest.check_version()?;
    let cli = Cli::try_parse_from(std::iter::once("photonwalk".to_string()).chain(manifest.argv.iter().cloned()))
        .map_err(|e| Failure::config(anyhow!("manifest arguments do not parse: {e}")))?;
    if matches!(cli.command, Command::Rerun(_)) {
        return Err(Failure::config(anyhow!("manifest records another rerun")));
    }
    dispatch(&cli, manifest.argv.clone())
}

/// Site index from a label.
pub fn site(lattice: &Lattice, label: &str) -> CmdResult<usize> {
    lattice.site_index(label.trim()).input("site selection")
}

/// `"X1,X4"` → site indices.
pub fn site_pair(lattice: &Lattice, text: &str) -> CmdResult<(usize, usize)> {
    let parts: Vec<&str> = text.split(',').collect();
    match parts.as_slice() {
        [a, b] => Ok((site(lattice, a)?, site(lattice, b)?)),
        _ => Err(Failure::config(anyhow!("expected two comma-separated site labels, got `{text}`"))),
    }
}

/// `"L=X1,X2;R=X3,X4;V=Y1,Y2,Y3,Y4;C=C"` → branches.
pub fn branches(lattice: &Lattice, text: &str) -> CmdResult<Vec<Branch>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|part| {
            let (name, members) = part
                .split_once('=')
                .ok_or_else(|| Failure::config(anyhow!("branch `{part}` is not of the form NAME=SITE,SITE")))?;
            let sites = members.split(',').map(|s| site(lattice, s)).collect::<CmdResult<Vec<_>>>()?;
            Ok(Branch::new(name.trim(), sites))
        })
        .collect()
}

/// Propagator at `z` (default: the lattice length).
pub fn propagator(lattice: &Lattice, z: Option<f64>) -> CmdResult<Propagator64> {
    let z = z.unwrap_or(lattice.length_cm());
    photonwalk::propagator(&lattice.hamiltonian(), z).input("propagation length")
}

pub fn efficiencies(lattice: &Lattice, path: Option<&Path>) -> CmdResult<Option<photonwalk::Efficiencies>> {
    let Some(path) = path else { return Ok(None) };
    let cfg: photonwalk::io::EfficiencyConfig =
        photonwalk::io::read_json(path).input(format!("reading efficiencies {}", path.display()))?;
    let eff = cfg.to_efficiencies::<f64>().input("port efficiencies")?;
    if eff.eta_in.len() != lattice.n_sites() || eff.eta_out.len() != lattice.n_sites() {
        return Err(Failure::config(anyhow!(
            "efficiencies list {} / {} ports for {} sites",
            eff.eta_in.len(),
            eff.eta_out.len(),
            lattice.n_sites()
        )));
    }
    Ok(Some(eff))
}
