use std::path::PathBuf;

use anyhow::anyhow;
use photonwalk::io::{read_matrix_csv, write_atomic};

use super::Run;
use crate::failure::{CmdResult, Context, Failure};
use crate::pgm::{self, Scale};

#[derive(clap::Args, Debug)]
pub struct HeatmapArgs {
    /// Matrix CSV, optionally with a header row and label column
    pub matrix: PathBuf,

    #[arg(long, value_enum, default_value_t = Scale::Max)]
    pub scale: Scale,

    /// Pixels per matrix entry along each axis
    #[arg(long, default_value_t = 1)]
    pub cell: usize,
}

/// Writes the image to `--out` (default: the matrix path with a `.pgm`
/// extension) and the manifest beside it.
pub fn cmd_heatmap(mut run: Run, args: &HeatmapArgs) -> CmdResult<()> {
    if args.cell == 0 {
        return Err(Failure::config(anyhow!("--cell must be at least 1")));
    }
    let m = read_matrix_csv(&args.matrix).input(format!("reading matrix {}", args.matrix.display()))?;
    let out = run.cli.out.clone().unwrap_or_else(|| args.matrix.with_extension("pgm"));
    write_atomic(&out, &pgm::render(&m.values, args.scale, args.cell)).context("writing image")?;
    println!(
        "{} ({}x{}, full scale {})",
        out.display(),
        m.values.nrows(),
        m.values.ncols(),
        pgm::full_scale(&m.values, args.scale)
    );
    let mut manifest = out.clone().into_os_string();
    manifest.push(".manifest.json");
    run.record([out]);
    run.write_manifest(&PathBuf::from(manifest))
}
