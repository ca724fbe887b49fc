//! Law of `ξ(t0)` under strip SLE(κ; ρ₊, ρ₋) from `(0; +∞, −∞)` against the
//! mixture over `x ~ f` of strip SLE(κ; −4, ρ₋+2, ρ₊+2) from
//! `(0; x+πi, +∞, −∞)`.

use serde::{Deserialize, Serialize};
use sle_core::loewner::Geometry;
use sle_core::sde::{rng_for, sample_strip_driving, sample_strip_with, ForceLocation, SleConfig};

use super::{
    approach_top, check_dt, check_positive, check_samples, fraction, ks_two, on_grid, require,
    Outcome,
};
use crate::density::DensitySpec;
use crate::report::ExperimentReport;
use crate::runner::Runner;
use crate::LabError;

/// Weight of the top force point in the mixture components.
pub const TOP_WEIGHT: f64 = -4.0;
/// Largest tolerated fraction of component traces that miss `x + πi`.
pub const MAX_ENDPOINT_MISS: f64 = 0.10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MixtureParams {
    pub kappa: f64,
    pub rho_plus: f64,
    pub rho_minus: f64,
    pub t0: f64,
    pub n_samples: usize,
    pub dt: f64,
    pub endpoint_samples: usize,
    pub endpoint_horizon: f64,
    pub endpoint_tol: f64,
    /// Distance to `ℝ + πi` at which a component trace's end is read.
    pub endpoint_approach_tol: f64,
    pub probe_growth: f64,
}

impl Default for MixtureParams {
    fn default() -> Self {
        Self {
            kappa: 6.0,
            rho_plus: 0.0,
            rho_minus: 0.0,
            t0: 0.5,
            n_samples: 2000,
            dt: 1e-3,
            endpoint_samples: 200,
            endpoint_horizon: 60.0,
            endpoint_tol: 0.1,
            endpoint_approach_tol: 0.005,
            probe_growth: 0.02,
        }
    }
}

impl MixtureParams {
    pub fn validate(&self) -> Result<(), LabError> {
        DensitySpec::new(self.kappa, self.rho_plus, self.rho_minus)?;
        check_samples(self.n_samples, 30)?;
        check_dt(self.dt)?;
        check_positive(self.t0, "t0")?;
        require(on_grid(self.t0, self.dt), "t0", "must be a multiple of dt")?;
        require(
            self.endpoint_samples >= 1,
            "endpoint_samples",
            "must be at least 1",
        )?;
        check_positive(self.endpoint_horizon, "endpoint_horizon")?;
        check_positive(self.endpoint_tol, "endpoint_tol")?;
        check_positive(self.endpoint_approach_tol, "endpoint_approach_tol")?;
        require(
            self.probe_growth >= 0.0,
            "probe_growth",
            "must be non-negative",
        )
    }

    /// The process whose law is decomposed, run to `horizon`.
    pub fn direct(&self, horizon: f64) -> SleConfig {
        SleConfig::new(Geometry::Strip, self.kappa, horizon, self.dt)
            .with_force(ForceLocation::PlusInfinity, self.rho_plus)
            .with_force(ForceLocation::MinusInfinity, self.rho_minus)
    }

    /// The mixture component aimed at `x + πi`, run to `horizon`.
    pub fn component(&self, x: f64, horizon: f64) -> SleConfig {
        SleConfig::new(Geometry::Strip, self.kappa, horizon, self.dt)
            .with_force(ForceLocation::Top(x), TOP_WEIGHT)
            .with_force(ForceLocation::PlusInfinity, self.rho_minus + 2.0)
            .with_force(ForceLocation::MinusInfinity, self.rho_plus + 2.0)
    }

    pub fn run(&self, runner: &Runner) -> Result<Outcome, LabError> {
        let table = DensitySpec::new(self.kappa, self.rho_plus, self.rho_minus)?.cdf_table();
        let direct = self.direct(self.t0);
        let end_value = |cfg: &SleConfig| -> Result<f64, LabError> {
            let (d, _) = sample_strip_driving(cfg)?;
            Ok(d.value(d.steps()))
        };
        let a = runner.try_map("mixture.direct", self.n_samples, |_, seed| {
            end_value(&direct.clone().with_seed(seed))
        })?;
        let control = runner.try_map("mixture.control", self.n_samples, |_, seed| {
            end_value(&direct.clone().with_seed(seed))
        })?;
        let b = runner.try_map("mixture.mixed", self.n_samples, |_, seed| {
            let mut rng = rng_for(seed);
            let x = table.sample(&mut rng);
            let (d, _) = sample_strip_with(&self.component(x, self.t0), &mut rng)?;
            Ok(d.value(d.steps()))
        })?;
        let endpoints = runner.try_map("mixture.endpoint", self.endpoint_samples, |_, seed| {
            let mut rng = rng_for(seed);
            let x = table.sample(&mut rng);
            let (d, _) = sample_strip_with(&self.component(x, self.endpoint_horizon), &mut rng)?;
            Ok(
                approach_top(&d, self.endpoint_approach_tol, self.probe_growth)
                    .map(|(_, z)| z.re - x),
            )
        })?;
        let offsets: Vec<f64> = endpoints.iter().flatten().copied().collect();
        let near = offsets
            .iter()
            .filter(|o| o.abs() < self.endpoint_tol)
            .count();

        let mut report = ExperimentReport::new("mixture", self, runner.seed());
        report.n_samples = self.n_samples;
        let (ks, thr) = ks_two(&a, &b);
        let (ks_c, thr_c) = ks_two(&a, &control);
        report
            .check("ks_mixture", ks, thr)
            .check("ks_control", ks_c, thr_c)
            .check(
                "endpoint_miss",
                1.0 - fraction(near, self.endpoint_samples),
                MAX_ENDPOINT_MISS,
            )
            .count("endpoint_near", near)
            .count("endpoint_failed", self.endpoint_samples - offsets.len())
            .series("direct", a)
            .series("mixture", b)
            .series("control", control)
            .series("endpoint_offset", offsets);
        Ok(Outcome::report_only(report.finish()))
    }
}
