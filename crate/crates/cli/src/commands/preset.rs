use anyhow::anyhow;
use photonwalk::io::write_lattice;
use photonwalk::lattice::{DEFAULT_CUTOFF_UM, DEFAULT_DECAY_UM};
use photonwalk::{build_linear_chain, build_swiss_cross, CouplingModel};

use super::Run;
use crate::failure::{CmdResult, Context, Failure};

#[derive(clap::Args, Debug)]
pub struct PresetArgs {
    #[command(subcommand)]
    pub geometry: Geometry,
}

#[derive(clap::Subcommand, Debug)]
pub enum Geometry {
    /// Nine guides: horizontal arm X1..X4 and vertical arm Y1..Y4 around C
    SwissCross {
        /// Horizontal pitch in µm
        #[arg(long, default_value_t = 18.0)]
        dx_um: f64,
        /// Vertical pitch in µm
        #[arg(long, default_value_t = 19.0)]
        dy_um: f64,
        /// Nearest-neighbour coupling in cm⁻¹
        #[arg(long, default_value_t = 1.5)]
        c1: f64,
        #[arg(long, default_value_t = DEFAULT_DECAY_UM)]
        decay_um: f64,
        #[arg(long, default_value_t = DEFAULT_CUTOFF_UM)]
        cutoff_um: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, default_value_t = 1.4)]
        length_cm: f64,
    },
    /// Evenly spaced straight array W1..Wn
    Chain {
        #[arg(long)]
        sites: usize,
        #[arg(long, default_value_t = 18.0)]
        spacing_um: f64,
        #[arg(long, default_value_t = 1.5)]
        c1: f64,
        /// Couple beyond nearest neighbours with this decay length in µm
        #[arg(long)]
        decay_um: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, default_value_t = 1.4)]
        length_cm: f64,
    },
}

/// Writes the lattice to `--out` and the manifest beside it.
pub fn cmd_preset(mut run: Run, args: &PresetArgs) -> CmdResult<()> {
    let out = run.cli.out.clone().ok_or_else(|| Failure::config(anyhow!("`preset` needs --out FILE")))?;
    let lattice = match &args.geometry {
        Geometry::SwissCross { dx_um, dy_um, c1, decay_um, cutoff_um, beta, length_cm } => {
            let model =
                CouplingModel::new(*c1, dx_um.min(*dy_um), *decay_um, *cutoff_um, true).input("coupling model")?;
            build_swiss_cross(*dx_um, *dy_um, *c1, *beta, *length_cm, &model).input("swiss cross")?
        }
        Geometry::Chain { sites, spacing_um, c1, decay_um, beta, length_cm } => {
            let model = decay_um
                .map(|d| CouplingModel::new(*c1, *spacing_um, d, DEFAULT_CUTOFF_UM.max(*spacing_um), true))
                .transpose()
                .input("coupling model")?;
            build_linear_chain(*sites, *spacing_um, *c1, *beta, *length_cm, model.as_ref()).input("chain")?
        }
    };
    write_lattice(&out, &lattice).context("writing lattice")?;
    println!("{} ({} sites)", out.display(), lattice.n_sites());
    let mut manifest = out.clone().into_os_string();
    manifest.push(".manifest.json");
    run.record([out]);
    run.write_manifest(&std::path::PathBuf::from(manifest))
}
