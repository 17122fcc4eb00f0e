//! Resolved run parameters and the manifest that records them next to every
//! output file. Re-executing a manifest reproduces the data output
//! byte-for-byte, because a run is a pure function of these parameters.

use serde::{Deserialize, Serialize};

pub const TOOL_NAME: &str = "entrobound";

fn default_seeds() -> usize {
    1000
}
fn default_epsilon() -> f64 {
    1e-12
}
fn default_max_iters() -> usize {
    10_000
}
fn default_format() -> String {
    "csv".into()
}

/// Every knob a command resolves before executing. Unused fields stay None
/// for commands that do not take them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunParams {
    #[serde(default)]
    pub gen: Option<String>,
    #[serde(default)]
    pub matrix: Option<String>,
    /// SHA-256 of the matrix file at the time the manifest was written.
    #[serde(default)]
    pub matrix_sha256: Option<String>,
    #[serde(default)]
    pub s: Option<f64>,
    #[serde(default)]
    pub s_grid: Option<String>,
    #[serde(default)]
    pub dims: Option<String>,
    #[serde(default)]
    pub phi_grid: Option<String>,
    #[serde(default = "default_seeds")]
    pub seeds: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default)]
    pub rng_seed: u64,
    #[serde(default)]
    pub mc_states: Option<usize>,
    #[serde(default)]
    pub mc_norm_states: Option<usize>,
    #[serde(default = "default_format")]
    pub format: String,
    #[serde(default)]
    pub suite: Option<String>,
    /// Warn on stderr when adjacent sweep points jump by more than this
    /// many bits (a sign of too few seeds).
    #[serde(default)]
    pub warn_gamma_jump: Option<f64>,
}

impl Default for RunParams {
    fn default() -> Self {
        Self {
            gen: None,
            matrix: None,
            matrix_sha256: None,
            s: None,
            s_grid: None,
            dims: None,
            phi_grid: None,
            seeds: default_seeds(),
            epsilon: default_epsilon(),
            max_iters: default_max_iters(),
            rng_seed: 0,
            mc_states: None,
            mc_norm_states: None,
            format: default_format(),
            suite: None,
            warn_gamma_jump: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub created_utc: String,
    pub command: String,
    pub parameters: RunParams,
}

impl RunManifest {
    pub fn new(command: &str, parameters: RunParams) -> Self {
        Self {
            tool: TOOL_NAME.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            created_utc: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            command: command.into(),
            parameters,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let manifest: Self =
            serde_json::from_str(text).map_err(|e| format!("manifest parse error: {e}"))?;
        if manifest.tool != TOOL_NAME {
            return Err(format!(
                "manifest was written by \"{}\", not {TOOL_NAME}",
                manifest.tool
            ));
        }
        Ok(manifest)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(bytes))
}
