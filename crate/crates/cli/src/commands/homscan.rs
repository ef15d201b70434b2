use anyhow::anyhow;
use photonwalk::io::{write_atomic, write_json};
use photonwalk::HomScan;
use serde::Serialize;

use super::Run;
use crate::failure::{CmdResult, Context, Failure};

#[derive(clap::Args, Debug)]
pub struct HomscanArgs {
    /// Input guides, e.g. `X1,X4`
    #[arg(long)]
    pub input: String,

    /// Output pair whose coincidences are monitored, e.g. `X1,X1`
    #[arg(long)]
    pub monitor: String,

    /// Photon coherence time in fs (Gaussian width of the overlap)
    #[arg(long)]
    pub coherence_fs: f64,

    /// `start:stop:step` or a comma-separated list, in fs
    #[arg(long, allow_hyphen_values = true, default_value = "-500:500:10")]
    pub delays_fs: String,

    /// Overlap at zero delay
    #[arg(long, default_value_t = 1.0)]
    pub peak_indist: f64,

    /// Propagation length in cm (defaults to the configured length)
    #[arg(long, visible_alias = "z-cm", allow_hyphen_values = true)]
    pub z: Option<f64>,
}

#[derive(Serialize)]
struct ScanMetadata {
    input_pair: [String; 2],
    monitor_pair: [String; 2],
    coherence_fs: f64,
    peak_indistinguishability: f64,
    z_cm: f64,
    visibility: Option<f64>,
}

pub fn parse_delays(text: &str) -> CmdResult<Vec<f64>> {
    let bad = || Failure::config(anyhow!("cannot read delays `{text}`"));
    let num = |s: &str| s.trim().parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(bad);
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if step <= 0.0 || stop < start {
                return Err(bad());
            }
            // integer stepping avoids accumulated rounding in the grid
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|k| start + k as f64 * step).collect())
        }
        [list] => list.split(',').map(num).collect(),
        _ => Err(bad()),
    }
}

pub fn cmd_homscan(run: &mut Run, args: &HomscanArgs) -> CmdResult<()> {
    let lattice = run.lattice()?;
    let (q, r) = super::site_pair(&lattice, &args.input)?;
    let monitor = super::site_pair(&lattice, &args.monitor)?;
    let delays = parse_delays(&args.delays_fs)?;
    let p = super::propagator(&lattice, args.z)?;
    let scan: HomScan<f64> =
        photonwalk::analysis::hom_scan_with_peak(&p, q, r, monitor, args.coherence_fs, args.peak_indist, &delays)
            .input("delay scan")?;

    let labels = lattice.labels();
    let mut text = String::from("delay_fs,indistinguishability,coincidence\n");
    for ((d, i), c) in scan.delays_fs.iter().zip(&scan.indistinguishability).zip(&scan.coincidences) {
        text.push_str(&format!("{d},{i},{c}\n"));
    }
    let dir = run.out_dir();
    let csv_path = dir.join("homscan.csv");
    write_atomic(&csv_path, text.as_bytes()).context("writing scan")?;
    let meta = ScanMetadata {
        input_pair: [labels[q].clone(), labels[r].clone()],
        monitor_pair: [labels[monitor.0].clone(), labels[monitor.1].clone()],
        coherence_fs: args.coherence_fs,
        peak_indistinguishability: args.peak_indist,
        z_cm: p.z(),
        visibility: scan.visibility,
    };
    let json_path = dir.join("homscan.json");
    write_json(&json_path, &meta).context("writing scan metadata")?;
    run.record([csv_path, json_path]);
    match scan.visibility {
        Some(v) => println!("visibility at {}-{}: {v:.6}", labels[monitor.0], labels[monitor.1]),
        None => println!("visibility at {}-{}: undefined", labels[monitor.0], labels[monitor.1]),
    }
    Ok(())
}
