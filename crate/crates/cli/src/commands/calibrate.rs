use std::path::PathBuf;

use anyhow::anyhow;
use photonwalk::calibrate;
use photonwalk::io::{read_json, write_json, write_lattice, CalibrationConfig, FitReport};

use super::Run;
use crate::failure::{CmdResult, Context, Failure};

#[derive(clap::Args, Debug)]
pub struct CalibrateArgs {
    /// Observations and free parameters (JSON)
    #[arg(long)]
    pub data: PathBuf,
}

/// Writes `fitted_lattice.json` and `fit_report.json`. A fit that misses its
/// tolerance still writes both files, then exits with the numerical-failure code.
pub fn cmd_calibrate(mut run: Run, args: &CalibrateArgs) -> CmdResult<()> {
    let template = run.lattice()?;
    let cfg: CalibrationConfig =
        read_json(&args.data).input(format!("reading calibration data {}", args.data.display()))?;
    let problem = cfg.to_problem(&template, run.seed()).input("calibration data")?;
    let result = calibrate(&problem, &template).input("calibration")?;

    let dir = run.out_dir();
    let lattice_path = dir.join("fitted_lattice.json");
    let report_path = dir.join("fit_report.json");
    write_lattice(&lattice_path, &result.lattice).context("writing fitted lattice")?;
    let report = FitReport::from_result(&result);
    write_json(&report_path, &report).context("writing fit report")?;
    run.record([lattice_path, report_path]);

    for (name, value) in &report.parameters {
        println!("{name} = {value}");
    }
    println!(
        "residual {:e} (start {:e}), {} evaluations",
        report.residual, report.initial_residual, report.evaluations
    );
    run.finish()?;
    if !result.converged {
        return Err(Failure::numerical(anyhow!(
            "fit did not reach tolerance {:e} (residual {:e})",
            problem.tolerance,
            result.residual
        )));
    }
    Ok(())
}
