use std::path::PathBuf;

use photonwalk::correlations::{apply_losses, branch_sum, CorrelationMatrix};
use photonwalk::io::{write_correlations, write_matrix_csv, write_propagator_csv};
use photonwalk::nonclassicality::violation_values;
use photonwalk::{distinguishable_correlations, partial_correlations, quantum_correlations};

use super::Run;
use crate::failure::{CmdResult, Context};

#[derive(clap::Args, Debug)]
pub struct CorrelateArgs {
    /// Input guides, e.g. `X1,X4`
    #[arg(long)]
    pub input: String,

    /// Wavepacket overlap used for the partially distinguishable matrix
    #[arg(long, default_value_t = 1.0)]
    pub indist: f64,

    /// Propagation length in cm (defaults to the configured length)
    #[arg(long, visible_alias = "z-cm", allow_hyphen_values = true)]
    pub z: Option<f64>,

    /// Port efficiencies (JSON with `eta_in` and `eta_out`)
    #[arg(long)]
    pub efficiencies: Option<PathBuf>,

    /// Rescale lossy matrices to unit total
    #[arg(long)]
    pub renormalize: bool,

    /// Also write branch-summed matrices, e.g. `L=X1,X2;R=X3,X4;V=Y1,Y2,Y3,Y4;C=C`
    #[arg(long)]
    pub branches: Option<String>,

    /// Also write the real and imaginary parts of the propagator
    #[arg(long)]
    pub propagator: bool,
}

pub fn cmd_correlate(run: &mut Run, args: &CorrelateArgs) -> CmdResult<()> {
    let lattice = run.lattice()?;
    let (q, r) = super::site_pair(&lattice, &args.input)?;
    let eff = super::efficiencies(&lattice, args.efficiencies.as_deref())?;
    let branches = args.branches.as_deref().map(|b| super::branches(&lattice, b)).transpose()?;
    let p = super::propagator(&lattice, args.z)?;
    let z = p.z();
    let labels = lattice.labels();
    let dir = run.out_dir();

    let lossy = |c: CorrelationMatrix<f64>| match &eff {
        Some(e) => apply_losses(&c, e, args.renormalize).input("port efficiencies"),
        None => Ok(c),
    };
    let quantum = lossy(quantum_correlations(&p, q, r).input("input pair")?)?;
    let distinguishable = lossy(distinguishable_correlations(&p, q, r).input("input pair")?)?;
    let partial = lossy(partial_correlations(&p, q, r, args.indist).input("indistinguishability")?)?;

    for (stem, c) in [("quantum", &quantum), ("distinguishable", &distinguishable), ("partial", &partial)] {
        let written = write_correlations(&dir, stem, stem, &labels, c, z).context("writing correlations")?;
        run.record(written);
    }

    if let Some(branches) = &branches {
        for (stem, c) in [("quantum", &quantum), ("distinguishable", &distinguishable)] {
            let b = branch_sum(c, branches).input("branch partition")?;
            let gamma_path = dir.join(format!("branch_{stem}.csv"));
            let v_path = dir.join(format!("branch_v_{stem}.csv"));
            write_matrix_csv(&gamma_path, &b.names, &b.gamma).context("writing branch matrix")?;
            write_matrix_csv(&v_path, &b.names, &violation_values(&b.gamma)).context("writing branch matrix")?;
            run.record([gamma_path, v_path]);
        }
    }

    if args.propagator {
        let written = write_propagator_csv(&dir, "propagator", &labels, p.matrix()).context("writing propagator")?;
        run.record(written);
    }

    println!(
        "input {}-{} at z = {z} cm: quantum total {:.12}, distinguishable total {:.12}",
        labels[q],
        labels[r],
        quantum.unordered_total(),
        distinguishable.unordered_total()
    );
    Ok(())
}
