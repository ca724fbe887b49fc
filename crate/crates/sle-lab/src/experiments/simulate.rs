//! Plain simulation: traces and, optionally, hull boundaries at the horizon.

use serde::{Deserialize, Serialize};
use sle_core::hull::hull_boundary;
use sle_core::loewner::{chordal_trace, strip_trace, Geometry};
use sle_core::sde::sample_driving;

use super::{check_samples, require, Outcome, SampleCurve, SampleTrace};
use crate::config::SleSpec;
use crate::report::ExperimentReport;
use crate::runner::Runner;
use crate::LabError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateParams {
    pub sle: SleSpec,
    pub n_samples: usize,
    /// Lift of the trace points above the driving value; `√dt` if unset.
    pub eps: Option<f64>,
    /// Points on the exported hull boundary at the horizon; 0 for none.
    pub hull_resolution: usize,
}

impl Default for SimulateParams {
    fn default() -> Self {
        Self {
            sle: SleSpec::default(),
            n_samples: 1,
            eps: None,
            hull_resolution: 0,
        }
    }
}

impl SimulateParams {
    pub fn validate(&self) -> Result<(), LabError> {
        self.sle.to_config(0)?;
        check_samples(self.n_samples, 1)?;
        if let Some(eps) = self.eps {
            require(eps > 0.0 && eps.is_finite(), "eps", "must be positive")?;
        }
        require(
            self.hull_resolution == 0 || self.hull_resolution >= 2,
            "hull_resolution",
            "must be 0 or at least 2",
        )
    }

    pub fn run(&self, runner: &Runner) -> Result<Outcome, LabError> {
        let results = runner.try_map("simulate", self.n_samples, |i, seed| {
            let (driving, _) = sample_driving(&self.sle.to_config(seed)?)?;
            let eps = self.eps.unwrap_or(driving.dt().sqrt());
            let trace = match driving.geometry() {
                Geometry::Chordal => chordal_trace(&driving, eps)?,
                Geometry::Strip => strip_trace(&driving, eps)?,
            };
            let curve = if self.hull_resolution >= 2 {
                match hull_boundary(&driving, driving.horizon(), self.hull_resolution) {
                    Ok(c) => Some(SampleCurve {
                        sample: i,
                        points: c.points().to_vec(),
                    }),
                    Err(sle_core::Error::DegenerateHull { .. }) => None,
                    Err(e) => return Err(e.into()),
                }
            } else {
                None
            };
            let trace = SampleTrace {
                sample: i,
                times: trace.times,
                points: trace.points,
            };
            Ok((trace, curve, driving.value(driving.steps())))
        })?;
        let height = self.sle.geometry.height();
        let outside = results
            .iter()
            .flat_map(|(t, _, _)| &t.points)
            .filter(|z| !(z.re.is_finite() && z.im >= 0.0 && z.im <= height))
            .count();
        let mut report = ExperimentReport::new("simulate", self, runner.seed());
        report.n_samples = self.n_samples;
        report
            .check("points_outside_domain", outside as f64, 1.0)
            .series("final_driving", results.iter().map(|r| r.2).collect());
        let (traces, curves): (Vec<_>, Vec<_>) =
            results.into_iter().map(|(t, c, _)| (t, c)).unzip();
        Ok(Outcome {
            report: report.finish(),
            traces,
            curves: curves.into_iter().flatten().collect(),
        })
    }
}
