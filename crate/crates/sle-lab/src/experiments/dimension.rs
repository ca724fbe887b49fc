//! Box-counting dimension of chordal SLE(κ) traces, or of hull boundaries at
//! the swallowing time of a real point, averaged over samples.
//!
//! Hull boundaries are the frontier of the rasterized trace rather than the
//! pulled-back curve from `hull_boundary`: the pull-back needs a lift off ℝ,
//! and the level line it follows bridges fjords at every scale.

use serde::{Deserialize, Serialize};
use sle_core::dimension::{box_counting_dimension, point_set_dimension, BoxCountFit};
use sle_core::frontier::hull_frontier;
use sle_core::hull::swallowing_time;
use sle_core::loewner::{chordal_trace, default_eps, Geometry};
use sle_core::sde::{sample_chordal_driving, SleConfig};
use sle_core::Curve;

use super::{check_dt, check_positive, check_samples, on_grid, require, Outcome, SampleCurve};
use crate::report::ExperimentReport;
use crate::runner::Runner;
use crate::LabError;

/// Give up after this many samples per requested estimate.
const MAX_ATTEMPTS_PER_SAMPLE: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DimensionTarget {
    /// The trace on `[0, t]`.
    Trace,
    /// The hull boundary at the swallowing time of `x`.
    HullBoundary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DimensionParams {
    pub kappa: f64,
    pub target: DimensionTarget,
    pub n_samples: usize,
    pub dt: f64,
    /// Trace length for [`DimensionTarget::Trace`].
    pub t: f64,
    /// Swallowed point for [`DimensionTarget::HullBoundary`].
    pub x: f64,
    /// Longest swallowing time waited for.
    pub horizon: f64,
    /// Raster cell for hull boundaries; `√dt / 2` when absent.
    pub cell: Option<f64>,
    pub n_scales: usize,
    pub tolerance: f64,
    /// Export the measured curves.
    pub curves: bool,
}

impl Default for DimensionParams {
    fn default() -> Self {
        Self {
            kappa: 8.0 / 3.0,
            target: DimensionTarget::Trace,
            n_samples: 20,
            dt: 1e-4,
            t: 1.0,
            x: 1.0,
            horizon: 5.0,
            cell: None,
            n_scales: 8,
            tolerance: 0.15,
            curves: false,
        }
    }
}

impl DimensionParams {
    /// `min(1 + κ/8, 2)` for traces, `1 + 2/κ` for hull boundaries.
    pub fn expected(&self) -> f64 {
        match self.target {
            DimensionTarget::Trace => (1.0 + self.kappa / 8.0).min(2.0),
            DimensionTarget::HullBoundary => 1.0 + 2.0 / self.kappa,
        }
    }

    pub fn validate(&self) -> Result<(), LabError> {
        check_positive(self.kappa, "kappa")?;
        check_samples(self.n_samples, 1)?;
        check_dt(self.dt)?;
        require(self.n_scales >= 3, "n_scales", "must be at least 3")?;
        check_positive(self.tolerance, "tolerance")?;
        match self.target {
            DimensionTarget::Trace => {
                check_positive(self.t, "t")?;
                require(on_grid(self.t, self.dt), "t", "must be a multiple of dt")
            }
            DimensionTarget::HullBoundary => {
                require(self.kappa > 4.0, "kappa", "hull boundaries need kappa > 4")?;
                require(
                    self.x != 0.0 && self.x.is_finite(),
                    "x",
                    "must be a non-zero real",
                )?;
                check_positive(self.horizon, "horizon")?;
                match self.cell {
                    Some(c) => check_positive(c, "cell"),
                    None => Ok(()),
                }
            }
        }
    }

    pub fn cell(&self) -> f64 {
        self.cell.unwrap_or(0.5 * self.dt.sqrt())
    }

    /// The measured points of one sample and their fit, or `None` if `x`
    /// survives the horizon.
    pub fn measure(&self, seed: u64) -> Result<Option<(Curve, BoxCountFit)>, LabError> {
        match self.target {
            DimensionTarget::Trace => {
                let sle = SleConfig::new(Geometry::Chordal, self.kappa, self.t, self.dt);
                let (driving, _) = sample_chordal_driving(&sle.with_seed(seed))?;
                let curve = chordal_trace(&driving, default_eps(&driving))?.to_curve()?;
                let fit = box_counting_dimension(&curve, self.n_scales)?;
                Ok(Some((curve, fit)))
            }
            DimensionTarget::HullBoundary => {
                let sle = SleConfig::new(Geometry::Chordal, self.kappa, self.horizon, self.dt);
                let (driving, _) = sample_chordal_driving(&sle.with_seed(seed))?;
                let Some(t) = swallowing_time(&driving, self.x)?.time else {
                    return Ok(None);
                };
                let driving = driving.truncated(driving.step_at(t)?);
                let trace = chordal_trace(&driving, default_eps(&driving))?.to_curve()?;
                let frontier = hull_frontier(&trace, self.cell())?;
                let fit = point_set_dimension(&frontier, 2.0 * self.cell(), self.n_scales)?;
                Ok(Some((Curve::new(frontier)?, fit)))
            }
        }
    }

    pub fn run(&self, runner: &Runner) -> Result<Outcome, LabError> {
        let mut estimates = Vec::new();
        let mut stderrs = Vec::new();
        let mut curves = Vec::new();
        let mut excluded = 0;
        let mut next = 0;
        // Samples are taken in index order until enough curves are measured,
        // so the result does not depend on how batches are scheduled.
        while estimates.len() < self.n_samples && next < self.n_samples * MAX_ATTEMPTS_PER_SAMPLE {
            let batch = self.n_samples - estimates.len();
            let results = runner.map("dimension", next..next + batch, |_, seed| {
                self.measure(seed)
            });
            for (i, r) in (next..next + batch).zip(results) {
                match r? {
                    Some((curve, fit)) => {
                        estimates.push(fit.estimate);
                        stderrs.push(fit.stderr);
                        if self.curves {
                            curves.push(SampleCurve {
                                sample: i,
                                points: curve.points().to_vec(),
                            });
                        }
                    }
                    None => excluded += 1,
                }
            }
            next += batch;
        }
        let mean = if estimates.is_empty() {
            f64::NAN
        } else {
            estimates.iter().sum::<f64>() / estimates.len() as f64
        };
        let mut report = ExperimentReport::new("dimension", self, runner.seed());
        report.n_samples = estimates.len();
        report
            .check(
                "dimension_error",
                (mean - self.expected()).abs(),
                self.tolerance,
            )
            .count("measured", estimates.len())
            .count("excluded", excluded)
            .series("mean", vec![mean])
            .series("expected", vec![self.expected()])
            .series("estimates", estimates)
            .series("stderr", stderrs);
        Ok(Outcome {
            report: report.finish(),
            traces: Vec::new(),
            curves,
        })
    }
}
