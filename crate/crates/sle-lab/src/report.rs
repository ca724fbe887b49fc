//! Experiment outcomes.

use std::collections::BTreeMap;

use serde::Serialize;

/// Version of the JSON report layout.
pub const SCHEMA: u32 = 1;

/// One named pass/fail assertion: passes iff `statistic < threshold`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, statistic: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            statistic,
            threshold,
            passed: statistic < threshold,
        }
    }
}

/// Outcome of one experiment.
///
/// With a single check, `statistic` and `threshold` are that check's. With
/// several, `statistic` is the largest ratio `statistic/threshold` among them
/// and `threshold` is 1, so `passed ⇔ statistic < threshold` either way.
/// `runtime` is not serialized; reports must be identical across reruns.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub name: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub statistic: f64,
    pub threshold: f64,
    pub n_samples: usize,
    pub passed: bool,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub counts: BTreeMap<String, usize>,
    pub data: BTreeMap<String, Vec<f64>>,
    #[serde(skip)]
    pub runtime: f64,
}

impl ExperimentReport {
    pub fn new(name: &str, parameters: &impl Serialize, seed: u64) -> Self {
        let parameters = match serde_json::to_value(parameters) {
            Ok(serde_json::Value::Object(map)) => map.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        Self {
            schema: SCHEMA,
            name: name.into(),
            parameters,
            statistic: 0.0,
            threshold: 1.0,
            n_samples: 0,
            passed: true,
            seed,
            checks: Vec::new(),
            counts: BTreeMap::new(),
            data: BTreeMap::new(),
            runtime: 0.0,
        }
    }

    pub fn check(&mut self, name: &str, statistic: f64, threshold: f64) -> &mut Self {
        self.checks.push(Check::new(name, statistic, threshold));
        self
    }

    pub fn count(&mut self, name: &str, value: usize) -> &mut Self {
        self.counts.insert(name.into(), value);
        self
    }

    pub fn series(&mut self, name: &str, values: Vec<f64>) -> &mut Self {
        self.data.insert(name.into(), values);
        self
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Folds the checks into the headline statistic. A NaN statistic fails.
    pub fn finish(mut self) -> Self {
        match self.checks.as_slice() {
            [] => {
                self.statistic = 0.0;
                self.threshold = 1.0;
            }
            [only] => {
                self.statistic = only.statistic;
                self.threshold = only.threshold;
            }
            many => {
                self.statistic = many
                    .iter()
                    .map(|c| c.statistic / c.threshold)
                    .map(|r| if r.is_nan() { f64::INFINITY } else { r })
                    .fold(f64::NEG_INFINITY, f64::max);
                self.threshold = 1.0;
            }
        }
        self.passed = self.statistic < self.threshold && self.checks.iter().all(|c| c.passed);
        self
    }
}
