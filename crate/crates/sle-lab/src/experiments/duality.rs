//! Hull boundary of chordal SLE(κ), κ > 4, at the swallowing time `T_x` of a
//! real point `x`: ends of the boundary crosscut and their signs.
//!
//! The ends are read from the real extent `(a, b)` of the hull. The pulled-back
//! boundary curve is kept for export and only its distance from ℝ is counted.

use serde::{Deserialize, Serialize};
use sle_core::hull::{crosscut_endpoints, hull_boundary, hull_extent, swallowing_time};
use sle_core::loewner::Geometry;
use sle_core::sde::{sample_chordal_driving, SleConfig};

use super::{check_dt, check_positive, check_samples, fraction, require, Outcome, SampleCurve};
use crate::report::ExperimentReport;
use crate::runner::Runner;
use crate::LabError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DualityParams {
    pub kappa: f64,
    pub x: f64,
    pub n_samples: usize,
    pub dt: f64,
    pub horizon: f64,
    pub resolution: usize,
    /// Slack on `|y| > |x|`.
    pub tolerance: f64,
    /// For κ ≥ 8, largest allowed `|y − x|`.
    pub near_tol: f64,
    pub max_violation: f64,
    /// Export the boundary curves.
    pub curves: bool,
}

impl Default for DualityParams {
    fn default() -> Self {
        Self {
            kappa: 6.0,
            x: 1.0,
            n_samples: 500,
            dt: 1e-4,
            horizon: 20.0,
            resolution: 400,
            tolerance: 0.02,
            near_tol: 0.05,
            max_violation: 0.02,
            curves: true,
        }
    }
}

/// What one sample produced.
#[derive(Clone, Debug, PartialEq)]
pub enum DualitySample {
    /// `x` survived the horizon.
    Excluded,
    /// `y` on the side of `x`, `z` on the other. `on_boundary` is false when the
    /// pulled-back curve ends are not both near ℝ.
    Decided {
        y: f64,
        z: f64,
        time: f64,
        on_boundary: bool,
        simple: bool,
        curve: Vec<sle_core::Complex64>,
    },
}

impl DualityParams {
    pub fn validate(&self) -> Result<(), LabError> {
        require(
            self.kappa > 4.0 && self.kappa.is_finite(),
            "kappa",
            "needs kappa > 4",
        )?;
        require(
            self.x != 0.0 && self.x.is_finite(),
            "x",
            "must be a non-zero real",
        )?;
        check_samples(self.n_samples, 1)?;
        check_dt(self.dt)?;
        check_positive(self.horizon, "horizon")?;
        require(self.resolution >= 2, "resolution", "must be at least 2")?;
        check_positive(self.tolerance, "tolerance")?;
        check_positive(self.near_tol, "near_tol")?;
        check_positive(self.max_violation, "max_violation")
    }

    pub fn sle(&self) -> SleConfig {
        SleConfig::new(Geometry::Chordal, self.kappa, self.horizon, self.dt)
    }

    /// Runs one sample from its seed.
    pub fn sample(&self, seed: u64) -> Result<DualitySample, LabError> {
        let (driving, _) = sample_chordal_driving(&self.sle().with_seed(seed))?;
        let Some(time) = swallowing_time(&driving, self.x)?.time else {
            return Ok(DualitySample::Excluded);
        };
        let ext = hull_extent(&driving, time)?;
        let (y, z) = if self.x > 0.0 {
            (ext.b, ext.a)
        } else {
            (ext.a, ext.b)
        };
        let curve = hull_boundary(&driving, time, self.resolution)?;
        let on_boundary = crosscut_endpoints(&curve).is_ok();
        Ok(DualitySample::Decided {
            y,
            z,
            time,
            on_boundary,
            simple: curve.is_simple(),
            curve: curve.points().to_vec(),
        })
    }

    /// Whether the ends contradict the sign and size claims.
    pub fn violates(&self, y: f64, z: f64) -> bool {
        let s = self.x.signum();
        if self.kappa >= 8.0 {
            (y - self.x).abs() > self.near_tol
        } else {
            !(y.signum() == s && y.abs() > self.x.abs() - self.tolerance && z.signum() == -s)
        }
    }

    pub fn run(&self, runner: &Runner) -> Result<Outcome, LabError> {
        let samples = runner.try_map("duality", self.n_samples, |_, seed| self.sample(seed))?;
        let (mut ys, mut zs, mut times) = (vec![], vec![], vec![]);
        let (mut excluded, mut off, mut violations, mut non_simple, mut at_start) = (0, 0, 0, 0, 0);
        let mut curves = Vec::new();
        for (i, s) in samples.into_iter().enumerate() {
            match s {
                DualitySample::Excluded => excluded += 1,
                DualitySample::Decided {
                    y,
                    z,
                    time,
                    on_boundary,
                    simple,
                    curve,
                } => {
                    violations += self.violates(y, z) as usize;
                    off += !on_boundary as usize;
                    at_start += (z == 0.0) as usize;
                    non_simple += !simple as usize;
                    ys.push(y);
                    zs.push(z);
                    times.push(time);
                    curves.push(SampleCurve {
                        sample: i,
                        points: curve,
                    });
                }
            }
        }
        let decided = self.n_samples - excluded;
        let mut report = ExperimentReport::new("duality", self, runner.seed());
        report.n_samples = self.n_samples;
        report.check(
            "violation_rate",
            fraction(violations, decided),
            self.max_violation,
        );
        report
            .count("decided", decided)
            .count("excluded", excluded)
            .count("off_boundary", off)
            .count("violations", violations)
            .count("non_simple", non_simple)
            .count("z_at_start", at_start)
            .series("y", ys)
            .series("z", zs)
            .series("swallowing_time", times);
        if !self.curves {
            curves.clear();
        }
        Ok(Outcome {
            report: report.finish(),
            traces: Vec::new(),
            curves,
        })
    }
}
