use std::fs;
use std::path::Path;

use ncqosc_core::{CaseId, ScenarioConfig, ScenarioParams};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Parsed config with the hash recorded in every output's provenance header.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub params: ScenarioParams,
    pub case: Option<CaseId>,
    /// hex SHA-256 of the canonical JSON form
    pub hash: String,
}

impl LoadedConfig {
    pub fn from_params(params: ScenarioParams, case: Option<CaseId>) -> Self {
        let canonical = ScenarioConfig { params, case }.to_json_string();
        Self {
            params,
            case,
            hash: hex::encode(Sha256::digest(canonical.as_bytes())),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let cfg = ScenarioConfig::from_json_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Ok(Self::from_params(cfg.params, cfg.case))
    }
}
