//! Law of the point where a strip SLE(κ; ρ₊, ρ₋) trace from `(0; +∞, −∞)`
//! reaches `ℝ + πi`, against the closed-form density.

use serde::{Deserialize, Serialize};
use sle_core::ks::{one_sample_threshold, two_sample_threshold};
use sle_core::loewner::Geometry;
use sle_core::sde::{sample_strip_driving, ForceLocation, SleConfig};

use super::{
    approach_top, check_dt, check_positive, check_samples, fraction, ks_one, require, Outcome,
};
use crate::density::DensitySpec;
use crate::report::ExperimentReport;
use crate::runner::Runner;
use crate::LabError;

/// Largest tolerated fraction of samples that never approach `ℝ + πi`.
pub const MAX_FAILURE_RATE: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensityParams {
    pub kappa: f64,
    pub rho_plus: f64,
    pub rho_minus: f64,
    pub n_samples: usize,
    pub dt: f64,
    pub horizon: f64,
    pub approach_tol: f64,
    pub probe_growth: f64,
}

impl Default for DensityParams {
    fn default() -> Self {
        Self {
            kappa: 6.0,
            rho_plus: 0.0,
            rho_minus: 0.0,
            n_samples: 2000,
            dt: 1e-3,
            horizon: 60.0,
            approach_tol: 0.02,
            probe_growth: 0.02,
        }
    }
}

impl DensityParams {
    pub fn validate(&self) -> Result<(), LabError> {
        DensitySpec::new(self.kappa, self.rho_plus, self.rho_minus)?;
        check_samples(self.n_samples, 30)?;
        check_dt(self.dt)?;
        check_positive(self.horizon, "horizon")?;
        check_positive(self.approach_tol, "approach_tol")?;
        require(
            self.probe_growth >= 0.0,
            "probe_growth",
            "must be non-negative",
        )
    }

    pub fn sle(&self) -> SleConfig {
        SleConfig::new(Geometry::Strip, self.kappa, self.horizon, self.dt)
            .with_force(ForceLocation::PlusInfinity, self.rho_plus)
            .with_force(ForceLocation::MinusInfinity, self.rho_minus)
    }

    pub fn run(&self, runner: &Runner) -> Result<Outcome, LabError> {
        let spec = DensitySpec::new(self.kappa, self.rho_plus, self.rho_minus)?;
        let table = spec.cdf_table();
        let sle = self.sle();
        let hits = runner.try_map("density", self.n_samples, |_, seed| {
            let (driving, _) = sample_strip_driving(&sle.clone().with_seed(seed))?;
            Ok(approach_top(&driving, self.approach_tol, self.probe_growth))
        })?;
        let (times, points): (Vec<f64>, Vec<f64>) =
            hits.iter().flatten().map(|&(t, z)| (t, z.re)).unzip();
        let failed = self.n_samples - points.len();

        let mut report = ExperimentReport::new("density", self, runner.seed());
        report.n_samples = self.n_samples;
        report
            .check(
                "ks",
                ks_one(&points, |x| table.cdf(x)),
                one_sample_threshold(points.len()),
            )
            .check(
                "failure_rate",
                fraction(failed, self.n_samples),
                MAX_FAILURE_RATE,
            );
        if spec.sigma == 0.0 {
            let flipped: Vec<f64> = points.iter().map(|x| -x).collect();
            let stat = sle_core::ks::ks_two_sample(&points, &flipped).unwrap_or(f64::NAN);
            report.check(
                "sign_flip_ks",
                stat,
                two_sample_threshold(points.len(), points.len()),
            );
        }
        report
            .count("found", points.len())
            .count("failed", failed)
            .series("J", points)
            .series("approach_time", times);
        Ok(Outcome::report_only(report.finish()))
    }
}
