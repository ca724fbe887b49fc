//! Run configuration files (YAML).
//!
//! ```yaml
//! experiment: density
//! seed: 7            # optional; --seed and SLE_LAB_SEED take precedence
//! format: csv        # csv: report plus CSV exports; json: report only
//! density:           # parameter block named after the experiment
//!   kappa: 2
//!   rho_plus: -2
//!   rho_minus: -2
//! ```
//!
//! Force points are written `{at: 1.5, rho: 2}`, `{at: "+inf"}`,
//! `{at: "0+"}` (or `"0-"`) for the degenerate points beside the start, and
//! `{at: {top: 0.0}}` for `0 + πi`. A missing `rho` is 0.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use sle_core::loewner::Geometry;
use sle_core::sde::{ForceLocation, ForceSpec, SleConfig};

use crate::experiments::Experiment;
use crate::LabError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Where a force point sits, as written in a config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum At {
    Real(f64),
    Named(String),
    Top { top: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForceEntry {
    pub at: At,
    #[serde(default)]
    pub rho: f64,
}

impl ForceEntry {
    pub fn to_spec(&self) -> Result<ForceSpec, LabError> {
        let location = match &self.at {
            At::Real(x) => ForceLocation::Real(*x),
            At::Top { top } => ForceLocation::Top(*top),
            At::Named(s) => match s.trim() {
                "+inf" | "inf" => ForceLocation::PlusInfinity,
                "-inf" => ForceLocation::MinusInfinity,
                "0+" | "x+" => ForceLocation::PlusDegenerate,
                "0-" | "x-" => ForceLocation::MinusDegenerate,
                other => {
                    return Err(LabError::invalid(
                        "at",
                        format!("`{other}` is not a force location; use a number, \"+inf\", \"-inf\", \"0+\", \"0-\" or {{top: x}}"),
                    ))
                }
            },
        };
        Ok(ForceSpec::new(location, self.rho))
    }
}

/// A process as written in a config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SleSpec {
    pub geometry: Geometry,
    pub kappa: f64,
    pub start: f64,
    pub force: Vec<ForceEntry>,
    pub horizon: f64,
    pub dt: f64,
}

impl Default for SleSpec {
    fn default() -> Self {
        Self {
            geometry: Geometry::Chordal,
            kappa: 2.0,
            start: 0.0,
            force: Vec::new(),
            horizon: 1.0,
            dt: 1e-3,
        }
    }
}

impl SleSpec {
    pub fn to_config(&self, seed: u64) -> Result<SleConfig, LabError> {
        let force_points = self
            .force
            .iter()
            .enumerate()
            .map(|(i, f)| {
                f.to_spec().map_err(|e| match e {
                    LabError::Invalid { field, message } => {
                        LabError::invalid(format!("sle.force[{i}].{field}"), message)
                    }
                    e => e,
                })
            })
            .collect::<Result<_, _>>()?;
        let config = SleConfig {
            geometry: self.geometry,
            kappa: self.kappa,
            start: self.start,
            force_points,
            horizon: self.horizon,
            dt: self.dt,
            seed,
        };
        config
            .validate()
            .map_err(|e| LabError::invalid("sle", e.to_string()))?;
        Ok(config)
    }
}

/// A parsed and resolved run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub format: Format,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: String,
    seed: Option<u64>,
    #[serde(default)]
    format: Format,
    #[serde(default)]
    simulate: Option<serde_yaml::Value>,
    #[serde(default)]
    density: Option<serde_yaml::Value>,
    #[serde(default)]
    mixture: Option<serde_yaml::Value>,
    #[serde(default)]
    duality: Option<serde_yaml::Value>,
    #[serde(default)]
    limits: Option<serde_yaml::Value>,
    #[serde(default)]
    scaling: Option<serde_yaml::Value>,
    #[serde(default)]
    dimension: Option<serde_yaml::Value>,
}

impl RawConfig {
    fn block(&mut self, name: &str) -> Option<serde_yaml::Value> {
        match name {
            "simulate" => self.simulate.take(),
            "density" => self.density.take(),
            "mixture" => self.mixture.take(),
            "duality" => self.duality.take(),
            "limits" => self.limits.take(),
            "scaling" => self.scaling.take(),
            "dimension" => self.dimension.take(),
            _ => None,
        }
    }
}

impl RunConfig {
    /// Parses and validates a config. `seed` overrides the file's seed; with
    /// neither the seed is 0.
    pub fn parse(text: &str, seed: Option<u64>) -> Result<Self, LabError> {
        let mut raw: RawConfig =
            serde_yaml::from_str(text).map_err(|e| LabError::invalid("config", e.to_string()))?;
        let name = raw.experiment.clone();
        let block = raw.block(&name).unwrap_or(serde_yaml::Value::Null);
        let experiment = Experiment::from_yaml(&name, block)?;
        experiment.validate()?;
        Ok(Self {
            experiment,
            seed: seed.or(raw.seed).unwrap_or(0),
            format: raw.format,
        })
    }

    pub fn load(path: &Path, seed: Option<u64>) -> Result<Self, LabError> {
        Self::parse(&std::fs::read_to_string(path)?, seed)
    }

    /// Canonical JSON of the resolved config.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// SHA-256 of [`RunConfig::canonical_json`], hex encoded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
