//! Brownian scaling of chordal SLE(κ): `a·γ(t)` against `γ(a²t)` from
//! independent samples.

use serde::{Deserialize, Serialize};
use sle_core::loewner::Geometry;
use sle_core::sde::{sample_chordal_driving, SleConfig};

use super::{check_dt, check_positive, check_samples, ks_two, on_grid, require, tip, Outcome};
use crate::report::ExperimentReport;
use crate::runner::Runner;
use crate::LabError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingParams {
    pub kappa: f64,
    pub a: f64,
    pub t: f64,
    pub n_samples: usize,
    pub dt: f64,
}

impl Default for ScalingParams {
    fn default() -> Self {
        Self {
            kappa: 6.0,
            a: 2.0,
            t: 0.25,
            n_samples: 2000,
            dt: 1e-3,
        }
    }
}

impl ScalingParams {
    pub fn validate(&self) -> Result<(), LabError> {
        check_positive(self.kappa, "kappa")?;
        check_positive(self.a, "a")?;
        check_positive(self.t, "t")?;
        check_samples(self.n_samples, 30)?;
        check_dt(self.dt)?;
        require(on_grid(self.t, self.dt), "t", "must be a multiple of dt")?;
        require(
            on_grid(self.a * self.a * self.t, self.dt),
            "a",
            "a^2 t must be a multiple of dt",
        )
    }

    pub fn run(&self, runner: &Runner) -> Result<Outcome, LabError> {
        let arm = |tag: &str, horizon: f64, factor: f64| {
            let sle = SleConfig::new(Geometry::Chordal, self.kappa, horizon, self.dt);
            runner.try_map(tag, self.n_samples, move |_, seed| {
                let (driving, _) = sample_chordal_driving(&sle.clone().with_seed(seed))?;
                Ok(tip(&driving) * factor)
            })
        };
        let scaled = arm("scaling.scaled", self.t, self.a)?;
        let direct = arm("scaling.direct", self.a * self.a * self.t, 1.0)?;
        let parts = |v: &[sle_core::Complex64]| -> (Vec<f64>, Vec<f64>) {
            v.iter().map(|z| (z.re, z.im)).unzip()
        };
        let (s_re, s_im) = parts(&scaled);
        let (d_re, d_im) = parts(&direct);

        let mut report = ExperimentReport::new("scaling", self, runner.seed());
        report.n_samples = self.n_samples;
        let (ks_re, thr_re) = ks_two(&s_re, &d_re);
        let (ks_im, thr_im) = ks_two(&s_im, &d_im);
        report
            .check("ks_re", ks_re, thr_re)
            .check("ks_im", ks_im, thr_im)
            .series("scaled_re", s_re)
            .series("scaled_im", s_im)
            .series("direct_re", d_re)
            .series("direct_im", d_im);
        Ok(Outcome::report_only(report.finish()))
    }
}
