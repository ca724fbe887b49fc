//! The named experiments. Each takes a parameter block (all fields have
//! defaults), validates it, and produces a report plus optional traces and
//! curves for export.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use sle_core::loewner::{first_trace_approach, trace_point, DrivingPath, ProbeSchedule};
use sle_core::sde::MAX_DT;
use sle_core::Complex64;

use crate::report::ExperimentReport;
use crate::runner::Runner;
use crate::LabError;

pub mod density;
pub mod dimension;
pub mod duality;
pub mod limits;
pub mod mixture;
pub mod scaling;
pub mod simulate;

pub use density::DensityParams;
pub use dimension::{DimensionParams, DimensionTarget};
pub use duality::DualityParams;
pub use limits::{LimitCase, LimitOutcome, LimitsParams};
pub use mixture::MixtureParams;
pub use scaling::ScalingParams;
pub use simulate::SimulateParams;

/// A trace of one sample, for the `sample,t,re,im` export.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleTrace {
    pub sample: usize,
    pub times: Vec<f64>,
    pub points: Vec<Complex64>,
}

/// A curve of one sample, for the `sample,idx,re,im` export.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleCurve {
    pub sample: usize,
    pub points: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: ExperimentReport,
    pub traces: Vec<SampleTrace>,
    pub curves: Vec<SampleCurve>,
}

impl Outcome {
    pub fn report_only(report: ExperimentReport) -> Self {
        Self {
            report,
            traces: Vec::new(),
            curves: Vec::new(),
        }
    }
}

/// An experiment with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Simulate(SimulateParams),
    Density(DensityParams),
    Mixture(MixtureParams),
    Duality(DualityParams),
    Limits(LimitsParams),
    Scaling(ScalingParams),
    Dimension(DimensionParams),
}

/// Experiment names accepted by the CLI.
pub const NAMES: [&str; 7] = [
    "simulate",
    "density",
    "mixture",
    "duality",
    "limits",
    "scaling",
    "dimension",
];

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Simulate(_) => "simulate",
            Experiment::Density(_) => "density",
            Experiment::Mixture(_) => "mixture",
            Experiment::Duality(_) => "duality",
            Experiment::Limits(_) => "limits",
            Experiment::Scaling(_) => "scaling",
            Experiment::Dimension(_) => "dimension",
        }
    }

    /// Parses the parameter block of experiment `name`.
    pub fn from_yaml(name: &str, block: serde_yaml::Value) -> Result<Self, LabError> {
        let block = match block {
            serde_yaml::Value::Null => serde_yaml::Value::Mapping(Default::default()),
            b => b,
        };
        let wrap = |e: serde_yaml::Error| LabError::invalid(name, e.to_string());
        Ok(match name {
            "simulate" => Experiment::Simulate(serde_yaml::from_value(block).map_err(wrap)?),
            "density" => Experiment::Density(serde_yaml::from_value(block).map_err(wrap)?),
            "mixture" => Experiment::Mixture(serde_yaml::from_value(block).map_err(wrap)?),
            "duality" => Experiment::Duality(serde_yaml::from_value(block).map_err(wrap)?),
            "limits" => Experiment::Limits(serde_yaml::from_value(block).map_err(wrap)?),
            "scaling" => Experiment::Scaling(serde_yaml::from_value(block).map_err(wrap)?),
            "dimension" => Experiment::Dimension(serde_yaml::from_value(block).map_err(wrap)?),
            other => return Err(unknown(other)),
        })
    }

    /// Checks the preconditions; errors name the offending field as
    /// `experiment.field`.
    pub fn validate(&self) -> Result<(), LabError> {
        let r = match self {
            Experiment::Simulate(p) => p.validate(),
            Experiment::Density(p) => p.validate(),
            Experiment::Mixture(p) => p.validate(),
            Experiment::Duality(p) => p.validate(),
            Experiment::Limits(p) => p.validate(),
            Experiment::Scaling(p) => p.validate(),
            Experiment::Dimension(p) => p.validate(),
        };
        r.map_err(|e| match e {
            LabError::Invalid { field, message } => {
                LabError::invalid(format!("{}.{field}", self.name()), message)
            }
            e => e,
        })
    }

    pub fn run(&self, runner: &Runner) -> Result<Outcome, LabError> {
        self.validate()?;
        let start = std::time::Instant::now();
        let mut outcome = match self {
            Experiment::Simulate(p) => p.run(runner),
            Experiment::Density(p) => p.run(runner),
            Experiment::Mixture(p) => p.run(runner),
            Experiment::Duality(p) => p.run(runner),
            Experiment::Limits(p) => p.run(runner),
            Experiment::Scaling(p) => p.run(runner),
            Experiment::Dimension(p) => p.run(runner),
        }?;
        outcome.report.runtime = start.elapsed().as_secs_f64();
        Ok(outcome)
    }
}

fn unknown(name: &str) -> LabError {
    LabError::invalid(
        "experiment",
        format!("unknown experiment `{name}`; valid: {}", NAMES.join(", ")),
    )
}

#[derive(Deserialize)]
struct Description {
    reference: String,
    text: String,
}

fn descriptions() -> std::collections::BTreeMap<String, Description> {
    serde_yaml::from_str(include_str!("../../data/experiments.yaml"))
        .expect("bundled descriptions parse")
}

/// The result an experiment tests, as a citation string.
pub fn reference(name: &str) -> Result<String, LabError> {
    descriptions()
        .remove(name)
        .map(|d| d.reference)
        .ok_or_else(|| unknown(name))
}

/// Parameter schema with defaults and the result under test, for `describe`.
pub fn describe(name: &str) -> Result<String, LabError> {
    let d = descriptions().remove(name).ok_or_else(|| unknown(name))?;
    Ok(format!("{name}\n  tests: {}\n{}", d.reference, d.text))
}

pub(crate) fn require(ok: bool, field: &str, message: &str) -> Result<(), LabError> {
    if ok {
        Ok(())
    } else {
        Err(LabError::invalid(field, message))
    }
}

pub(crate) fn check_positive(v: f64, field: &str) -> Result<(), LabError> {
    require(
        v > 0.0 && v.is_finite(),
        field,
        "must be positive and finite",
    )
}

pub(crate) fn check_dt(dt: f64) -> Result<(), LabError> {
    require(dt > 0.0 && dt <= MAX_DT, "dt", "must lie in (0, 0.01]")
}

pub(crate) fn check_samples(n: usize, min: usize) -> Result<(), LabError> {
    require(n >= min, "n_samples", &format!("must be at least {min}"))
}

/// True when `t` is a multiple of `dt` up to rounding.
pub(crate) fn on_grid(t: f64, dt: f64) -> bool {
    let k = (t / dt).round();
    k >= 1.0 && (k * dt - t).abs() <= 1e-9 * (1.0 + t)
}

pub(crate) fn fraction(k: usize, n: usize) -> f64 {
    if n == 0 {
        f64::NAN
    } else {
        k as f64 / n as f64
    }
}

/// Probe schedule with a minimum spacing of 0.02 time units.
pub(crate) fn schedule(dt: f64, growth: f64) -> ProbeSchedule {
    ProbeSchedule {
        growth,
        min_stride: (0.02 / dt).round().max(1.0) as usize,
    }
}

/// First probed trace point within `tol` of `ℝ + πi`, with its time.
pub(crate) fn approach_top(
    driving: &DrivingPath,
    tol: f64,
    growth: f64,
) -> Option<(f64, Complex64)> {
    let eps = driving.dt().sqrt();
    first_trace_approach(
        driving,
        |z| PI - z.im,
        tol,
        eps,
        schedule(driving.dt(), growth),
    )
    .map(|(k, z)| (driving.time(k), z))
}

/// Trace point at the final grid step.
pub(crate) fn tip(driving: &DrivingPath) -> Complex64 {
    trace_point(driving, driving.steps(), driving.dt().sqrt())
}

/// One-sample KS, NaN when there are no samples.
pub(crate) fn ks_one(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    sle_core::ks::ks_one_sample(samples, cdf).unwrap_or(f64::NAN)
}

/// Two-sample KS with its α ≈ 0.01 threshold; NaN when an arm is empty.
pub(crate) fn ks_two(a: &[f64], b: &[f64]) -> (f64, f64) {
    let stat = sle_core::ks::ks_two_sample(a, b).unwrap_or(f64::NAN);
    let thr = if a.is_empty() || b.is_empty() {
        f64::NAN
    } else {
        sle_core::ks::two_sample_threshold(a.len(), b.len())
    };
    (stat, thr)
}
