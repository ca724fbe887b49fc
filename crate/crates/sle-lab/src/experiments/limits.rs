//! Where the trace of strip SLE(κ; ρ₊, ρ₋, ρ₀) from `(0; +∞, −∞, p₀)`,
//! `p₀ = p0_re + πi`, ends up, against the classification by the intervals
//! containing `ρ₊` and `ρ₋`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use sle_core::loewner::{trace_point, DrivingPath, Geometry};
use sle_core::sde::{sample_strip_driving, ForceLocation, SleConfig};
use sle_core::Complex64;

use super::{check_dt, check_positive, check_samples, fraction, require, Outcome};
use crate::density::right_exit_probability;
use crate::report::ExperimentReport;
use crate::runner::Runner;
use crate::LabError;

/// Terminal behavior of one trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitOutcome {
    Converged,
    HitLeft,
    HitRight,
    MinusInfinity,
    PlusInfinity,
    Undecided,
}

impl LimitOutcome {
    pub const ALL: [LimitOutcome; 6] = [
        LimitOutcome::Converged,
        LimitOutcome::HitLeft,
        LimitOutcome::HitRight,
        LimitOutcome::MinusInfinity,
        LimitOutcome::PlusInfinity,
        LimitOutcome::Undecided,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LimitOutcome::Converged => "converged",
            LimitOutcome::HitLeft => "hit_left",
            LimitOutcome::HitRight => "hit_right",
            LimitOutcome::MinusInfinity => "minus_infinity",
            LimitOutcome::PlusInfinity => "plus_infinity",
            LimitOutcome::Undecided => "undecided",
        }
    }

    /// Ends to the right of `p₀` (or at `+∞`).
    pub fn is_right(self) -> bool {
        matches!(self, LimitOutcome::HitRight | LimitOutcome::PlusInfinity)
    }
}

/// Which of `I₁ = [κ/2−2, ∞)`, `I₂ = (κ/2−4, κ/2−2)`, `I₃ = (−∞, κ/2−4]`
/// holds `ρ₊` and `ρ₋`, as the pair of indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LimitCase(pub u8, pub u8);

fn interval(kappa: f64, rho: f64) -> u8 {
    if rho >= kappa / 2.0 - 2.0 {
        1
    } else if rho > kappa / 2.0 - 4.0 {
        2
    } else {
        3
    }
}

impl LimitCase {
    pub fn of(kappa: f64, rho_plus: f64, rho_minus: f64) -> Self {
        LimitCase(interval(kappa, rho_plus), interval(kappa, rho_minus))
    }

    /// Limits the case allows.
    pub fn expected(self) -> &'static [LimitOutcome] {
        use LimitOutcome::*;
        match (self.0, self.1) {
            (1, 1) => &[Converged],
            (1, 2) => &[HitLeft],
            (2, 1) => &[HitRight],
            (1, 3) => &[MinusInfinity],
            (3, 1) => &[PlusInfinity],
            (2, 2) => &[HitLeft, HitRight],
            (2, 3) => &[MinusInfinity, HitRight],
            (3, 2) => &[HitLeft, PlusInfinity],
            _ => &[MinusInfinity, PlusInfinity],
        }
    }

    pub fn is_two_sided(self) -> bool {
        self.expected().len() == 2
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LimitsParams {
    pub kappa: f64,
    pub rho_plus: f64,
    pub rho_minus: f64,
    /// Defaults to `κ − 6 − ρ₊ − ρ₋`.
    pub rho_zero: Option<f64>,
    pub p0_re: f64,
    pub horizon: f64,
    pub n_samples: usize,
    pub dt: f64,
    /// `|Re β|` beyond which the trace counts as escaped.
    pub escape_re: f64,
    /// Distance to `ℝ + πi` that counts as a hit.
    pub hit_tol: f64,
    /// Distance to `p₀` that counts as convergence.
    pub converge_tol: f64,
    pub max_undecided: f64,
    /// Largest fraction of decided samples outside the only allowed limit;
    /// defaults to 0.10 when that limit is `p₀` and 0.05 otherwise.
    pub max_unexpected: Option<f64>,
}

impl Default for LimitsParams {
    fn default() -> Self {
        Self {
            kappa: 6.0,
            rho_plus: 1.0,
            rho_minus: -1.0,
            rho_zero: None,
            p0_re: 0.0,
            horizon: 25.0,
            n_samples: 400,
            dt: 1e-3,
            escape_re: 8.0,
            hit_tol: 0.05,
            converge_tol: 0.1,
            max_undecided: 0.2,
            max_unexpected: None,
        }
    }
}

impl LimitsParams {
    pub fn rho_zero(&self) -> f64 {
        self.rho_zero
            .unwrap_or(self.kappa - 6.0 - self.rho_plus - self.rho_minus)
    }

    pub fn case(&self) -> LimitCase {
        LimitCase::of(self.kappa, self.rho_plus, self.rho_minus)
    }

    pub fn validate(&self) -> Result<(), LabError> {
        check_positive(self.kappa, "kappa")?;
        require(self.rho_plus.is_finite(), "rho_plus", "must be finite")?;
        require(self.rho_minus.is_finite(), "rho_minus", "must be finite")?;
        let sum = self.rho_plus + self.rho_minus + self.rho_zero();
        require(
            (sum - (self.kappa - 6.0)).abs() < 1e-9,
            "rho_zero",
            "needs rho_plus + rho_minus + rho_zero = kappa - 6",
        )?;
        require(self.p0_re.is_finite(), "p0_re", "must be finite")?;
        check_positive(self.horizon, "horizon")?;
        check_samples(self.n_samples, 1)?;
        check_dt(self.dt)?;
        check_positive(self.escape_re, "escape_re")?;
        check_positive(self.hit_tol, "hit_tol")?;
        check_positive(self.converge_tol, "converge_tol")?;
        check_positive(self.max_undecided, "max_undecided")?;
        if let Some(m) = self.max_unexpected {
            check_positive(m, "max_unexpected")?;
        }
        Ok(())
    }

    pub fn sle(&self) -> SleConfig {
        SleConfig::new(Geometry::Strip, self.kappa, self.horizon, self.dt)
            .with_force(ForceLocation::PlusInfinity, self.rho_plus)
            .with_force(ForceLocation::MinusInfinity, self.rho_minus)
            .with_force(ForceLocation::Top(self.p0_re), self.rho_zero())
    }

    /// Classifies a trace point: near `p₀`, far out, or near `ℝ + πi`.
    pub fn classify_point(&self, z: Complex64) -> Option<LimitOutcome> {
        let p0 = Complex64::new(self.p0_re, PI);
        if (z - p0).norm() < self.converge_tol {
            Some(LimitOutcome::Converged)
        } else if z.re > self.escape_re {
            Some(LimitOutcome::PlusInfinity)
        } else if z.re < -self.escape_re {
            Some(LimitOutcome::MinusInfinity)
        } else if PI - z.im < self.hit_tol {
            Some(if z.re < self.p0_re {
                LimitOutcome::HitLeft
            } else {
                LimitOutcome::HitRight
            })
        } else {
            None
        }
    }

    /// Outcome of a driving path, read off the trace at the horizon.
    pub fn classify(&self, driving: &DrivingPath) -> LimitOutcome {
        let z = trace_point(driving, driving.steps(), driving.dt().sqrt());
        self.classify_point(z).unwrap_or(LimitOutcome::Undecided)
    }

    pub fn run(&self, runner: &Runner) -> Result<Outcome, LabError> {
        let sle = self.sle();
        let outcomes = runner.try_map("limits", self.n_samples, |_, seed| {
            let (driving, _) = sample_strip_driving(&sle.clone().with_seed(seed))?;
            Ok(self.classify(&driving))
        })?;
        let count = |o: LimitOutcome| outcomes.iter().filter(|&&x| x == o).count();
        let case = self.case();
        let expected = case.expected();
        let undecided = count(LimitOutcome::Undecided);
        let decided = self.n_samples - undecided;
        let hits: usize = expected.iter().map(|&o| count(o)).sum();

        let mut report = ExperimentReport::new("limits", self, runner.seed());
        report.n_samples = self.n_samples;
        report.check(
            "undecided_rate",
            fraction(undecided, self.n_samples),
            self.max_undecided,
        );
        if case.is_two_sided() {
            let right = outcomes.iter().filter(|o| o.is_right()).count();
            let freq = fraction(right, decided);
            let p = right_exit_probability(self.kappa, self.rho_plus, self.rho_minus, self.p0_re)
                .unwrap_or(f64::NAN);
            let se = (p * (1.0 - p) / decided as f64).sqrt();
            report.check("right_split", (freq - p).abs(), 3.0 * se);
            report.count("right", right);
            report.series("right_probability", vec![p]);
        } else {
            let default_max = if expected == [LimitOutcome::Converged] {
                0.10
            } else {
                0.05
            };
            report.check(
                "unexpected_rate",
                1.0 - fraction(hits, decided),
                self.max_unexpected.unwrap_or(default_max),
            );
        }
        for o in LimitOutcome::ALL {
            report.count(o.name(), count(o));
        }
        report.series(
            "outcome",
            outcomes
                .iter()
                .map(|o| LimitOutcome::ALL.iter().position(|x| x == o).unwrap_or(5) as f64)
                .collect(),
        );
        report.count("case", (case.0 * 10 + case.1) as usize);
        Ok(Outcome::report_only(report.finish()))
    }
}
