use std::collections::BTreeMap;
use std::path::Path;

use mrd_core::classify::ResumeToken;
use mrd_core::gf::FieldDescriptor;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Record of one invocation. Rerunning `command` reproduces the output whose
/// digest is `result_sha256`; an interrupted classification also stores the
/// token that `classify codes --resume` continues from.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    /// SHA-256 of every input file, keyed by path as given.
    pub inputs: BTreeMap<String, String>,
    pub version: String,
    pub field_moduli: Vec<FieldDescriptor>,
    pub elapsed_ms: u64,
    pub status: String,
    pub result_sha256: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resume: Option<ResumeToken>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, mrd_core::io::to_json(self))
            .map_err(|source| CliError::Write { path: path.to_path_buf(), source })
    }

    pub fn read(path: &Path) -> CliResult<RunManifest> {
        let text =
            std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
        mrd_core::io::from_json(&text).map_err(|source| CliError::Input { path: path.to_path_buf(), source })
    }
}
