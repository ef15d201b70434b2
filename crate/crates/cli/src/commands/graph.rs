use photonwalk::expand;
use photonwalk::io::write_graph;

use super::Run;
use crate::failure::{CmdResult, Context};

#[derive(clap::Args, Debug)]
pub struct GraphArgs {}

pub fn cmd_graph(run: &mut Run, _args: &GraphArgs) -> CmdResult<()> {
    let lattice = run.lattice()?;
    let g = expand(&lattice);
    let written = write_graph(&run.out_dir(), &g).context("writing graph")?;
    run.record(written);
    println!("vertices {} edges {} max_degree {}", g.vertices().len(), g.edges().len(), g.max_degree());
    Ok(())
}
