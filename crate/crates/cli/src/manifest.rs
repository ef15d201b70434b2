//! Run manifests. A manifest records the exact argument list of a run so
//! `photonwalk rerun` can repeat it; nothing time- or host-dependent is stored.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::failure::{CmdResult, Context, Failure};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_path: Option<PathBuf>,
    pub seed: u64,
    pub outputs: Vec<PathBuf>,
    pub tool_version: String,
    /// Arguments after the program name.
    pub argv: Vec<String>,
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> CmdResult<()> {
        photonwalk::io::write_json(path, self).context(format!("writing {}", path.display()))
    }

    pub fn read(path: &Path) -> CmdResult<Self> {
        photonwalk::io::read_json(path).input(format!("reading manifest {}", path.display()))
    }

    pub fn check_version(&self) -> CmdResult<()> {
        if self.tool_version != TOOL_VERSION {
            return Err(Failure::config(anyhow::anyhow!(
                "manifest was written by version {}, this is {}",
                self.tool_version,
                TOOL_VERSION
            )));
        }
        Ok(())
    }
}
