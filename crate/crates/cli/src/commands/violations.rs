use std::path::PathBuf;

use anyhow::anyhow;
use nalgebra::DMatrix;
use photonwalk::correlations::{apply_losses, branch_sum, BranchMatrix};
use photonwalk::io::{counts_csv, read_counts_csv, write_atomic, write_violation_report, ViolationMetadata};
use photonwalk::nonclassicality::{
    sample_counts, violation_matrix, violation_significance, violation_significance_analytic, CountMatrix,
    RNG_ALGORITHM,
};
use photonwalk::{distinguishable_correlations, partial_correlations, quantum_correlations, Error, Violations};

use super::Run;
use crate::failure::{CmdResult, Context, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Quantum,
    Distinguishable,
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    /// Parametric Poisson bootstrap
    Bootstrap,
    /// First-order error propagation
    Analytic,
}

#[derive(clap::Args, Debug)]
pub struct ViolationsArgs {
    /// Measured coincidence counts (CSV) instead of a simulated lattice
    #[arg(long, conflicts_with_all = ["input", "budget"])]
    pub counts: Option<PathBuf>,

    /// Input guides when simulating, e.g. `X1,X4`
    #[arg(long)]
    pub input: Option<String>,

    #[arg(long, value_enum, default_value_t = Mode::Quantum)]
    pub mode: Mode,

    /// Wavepacket overlap for `--mode partial`
    #[arg(long)]
    pub indist: Option<f64>,

    /// Propagation length in cm (defaults to the configured length)
    #[arg(long, visible_alias = "z-cm", allow_hyphen_values = true)]
    pub z: Option<f64>,

    /// Port efficiencies applied before sampling
    #[arg(long)]
    pub efficiencies: Option<PathBuf>,

    /// Expected number of detected pairs; draws synthetic counts
    #[arg(long)]
    pub budget: Option<f64>,

    #[arg(long, default_value_t = photonwalk::nonclassicality::DEFAULT_RESAMPLES)]
    pub resamples: usize,

    #[arg(long, value_enum, default_value_t = Method::Bootstrap)]
    pub method: Method,

    /// Pool sites into branches before testing, e.g. `L=X1,X2;R=X3,X4;V=Y1,Y2,Y3,Y4;C=C`
    #[arg(long)]
    pub branches: Option<String>,
}

pub fn cmd_violations(run: &mut Run, args: &ViolationsArgs) -> CmdResult<()> {
    let dir = run.out_dir();
    let mut meta = ViolationMetadata {
        seed: None,
        resamples: None,
        budget: None,
        total_counts: None,
        method: "ideal".into(),
        rng: RNG_ALGORITHM.into(),
        significant_pairs_3sigma: Vec::new(),
    };

    let (labels, counts) = if let Some(path) = &args.counts {
        let (labels, counts) = read_counts_csv(path).input(format!("reading counts {}", path.display()))?;
        let labels = labels.unwrap_or_else(|| (0..counts.dim()).map(|i| i.to_string()).collect());
        if args.branches.is_some() {
            return Err(Failure::config(anyhow!("--branches needs a lattice config to resolve site labels")));
        }
        (labels, Some(counts))
    } else {
        let lattice = run.lattice()?;
        let input = args.input.as_deref().ok_or_else(|| Failure::config(anyhow!("--input or --counts is required")))?;
        let (q, r) = super::site_pair(&lattice, input)?;
        let p = super::propagator(&lattice, args.z)?;
        let mut c = match args.mode {
            Mode::Quantum => quantum_correlations(&p, q, r),
            Mode::Distinguishable => distinguishable_correlations(&p, q, r),
            Mode::Partial => {
                let i = args.indist.ok_or_else(|| Failure::config(anyhow!("--mode partial needs --indist")))?;
                partial_correlations(&p, q, r, i)
            }
        }
        .input("correlations")?;
        if let Some(eff) = super::efficiencies(&lattice, args.efficiencies.as_deref())? {
            c = apply_losses(&c, &eff, false).input("port efficiencies")?;
        }
        let branches = args.branches.as_deref().map(|b| super::branches(&lattice, b)).transpose()?;
        let (labels, gamma) = match &branches {
            Some(b) => {
                let BranchMatrix { names, gamma } = branch_sum(&c, b).input("branch partition")?;
                (names, gamma)
            }
            None => (lattice.labels(), c.gamma.clone()),
        };
        match args.budget {
            None => {
                let written = write_violation_report(&dir, &labels, &violation_matrix(&gamma), &meta)
                    .context("writing violations")?;
                run.record(written);
                return Ok(());
            }
            Some(budget) => {
                // sample at site level so branch pooling sees the same photons
                let site_counts = sample_counts(&c.gamma, budget, run.seed()).input("count budget")?;
                let counts = match &branches {
                    Some(b) => site_counts.branch_sum(b).input("branch partition")?,
                    None => site_counts,
                };
                meta.budget = Some(budget);
                let path = dir.join("counts.csv");
                write_atomic(&path, counts_csv(&labels, &counts).context("formatting counts")?.as_bytes())
                    .context("writing counts")?;
                run.record([path]);
                (labels, Some(counts))
            }
        }
    };

    let counts = counts.expect("counts present past the ideal branch");
    meta.total_counts = Some(counts.total());
    let report = significance(&counts, args, run.seed(), &mut meta)?;
    meta.significant_pairs_3sigma =
        report.significant_pairs(3.0).into_iter().map(|(i, j)| [labels[i].clone(), labels[j].clone()]).collect();
    let written = write_violation_report(&dir, &labels, &report, &meta).context("writing violations")?;
    run.record(written);
    println!(
        "total counts {}, max significance {:.3} sigma, {} pair(s) above 3 sigma",
        counts.total(),
        report.max_significance(),
        meta.significant_pairs_3sigma.len()
    );
    Ok(())
}

fn significance(
    counts: &CountMatrix,
    args: &ViolationsArgs,
    seed: u64,
    meta: &mut ViolationMetadata,
) -> CmdResult<Violations> {
    let result = match args.method {
        Method::Bootstrap => {
            meta.method = "bootstrap".into();
            meta.seed = Some(seed);
            meta.resamples = Some(args.resamples);
            violation_significance(counts, args.resamples, seed)
        }
        Method::Analytic => {
            meta.method = "analytic".into();
            violation_significance_analytic(counts)
        }
    };
    match result {
        Ok(r) => Ok(r),
        // nothing detected: no estimate, and nothing significant
        Err(Error::ZeroCounts) => {
            let n = counts.dim();
            Ok(Violations { v: DMatrix::zeros(n, n), sigma: None, sigmas_violated: Some(DMatrix::zeros(n, n)) })
        }
        Err(e) => Err(e).input("significance"),
    }
}
