//! Law of the point where a strip SLE(κ; ρ₊, ρ₋) trace from `(0; +∞, −∞)`
//! meets `ℝ + πi`: density proportional to
//! `exp(x/2)^{(4/κ)σ} · cosh(x/2)^{−4/κ}`, `σ = (ρ₋ − ρ₊)/2`.

use std::f64::consts::LN_2;

use quadrature::double_exponential;
use rand::Rng;
use serde::Serialize;

use crate::LabError;

/// Nodes of the tabulated CDF.
pub const CDF_NODES: usize = 10_000;
/// Mass allowed outside the tabulated window.
const TAIL_MASS: f64 = 1e-10;

/// `ln cosh(y)` without overflow.
pub fn ln_cosh(y: f64) -> f64 {
    let a = y.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// `∫_ℝ g` by double-exponential quadrature after `x = t/(1 − t²)`.
pub fn integrate_real_line(g: impl Fn(f64) -> f64, abs_tol: f64) -> f64 {
    let h = |t: f64| {
        let u = 1.0 - t * t;
        g(t / u) * (1.0 + t * t) / (u * u)
    };
    double_exponential::integrate(h, -1.0, 1.0, abs_tol).integral
}

/// Parameters of the endpoint density.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensitySpec {
    pub kappa: f64,
    pub rho_plus: f64,
    pub rho_minus: f64,
    pub sigma: f64,
    /// Normalizer `Z = ∫ exp(x/2)^{(4/κ)σ} cosh(x/2)^{−4/κ} dx`.
    pub z: f64,
}

impl DensitySpec {
    /// Checks `ρ₊ + ρ₋ = κ − 6` and `|ρ₊ − ρ₋| < 2`, then computes `Z`.
    pub fn new(kappa: f64, rho_plus: f64, rho_minus: f64) -> Result<Self, LabError> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(LabError::invalid("kappa", "must be positive"));
        }
        if ((rho_plus + rho_minus) - (kappa - 6.0)).abs() > 1e-9 {
            return Err(LabError::invalid(
                "rho_plus",
                "the endpoint density needs rho_plus + rho_minus = kappa - 6",
            ));
        }
        let sigma = 0.5 * (rho_minus - rho_plus);
        if !(sigma.abs() < 1.0) {
            return Err(LabError::invalid(
                "rho_plus",
                "the endpoint density needs |rho_plus - rho_minus| < 2",
            ));
        }
        let mut spec = Self {
            kappa,
            rho_plus,
            rho_minus,
            sigma,
            z: 1.0,
        };
        let z = integrate_real_line(|x| spec.unnormalized(x), 1e-12);
        if !(z > 0.0 && z.is_finite()) {
            return Err(LabError::invalid("kappa", "density is not normalizable"));
        }
        spec.z = z;
        Ok(spec)
    }

    /// `exp(x/2)^{(4/κ)σ} cosh(x/2)^{−4/κ}`.
    pub fn unnormalized(&self, x: f64) -> f64 {
        (2.0 * self.sigma / self.kappa * x - 4.0 / self.kappa * ln_cosh(0.5 * x)).exp()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.unnormalized(x) / self.z
    }

    /// Half-width of a window holding all but about [`TAIL_MASS`] of the law.
    /// Each tail decays like `exp(−(2/κ)(1 ∓ σ)|x|)`.
    pub fn window(&self) -> f64 {
        let rate = 2.0 / self.kappa * (1.0 - self.sigma.abs());
        let c = 2f64.powf(4.0 / self.kappa) / self.z;
        ((c / (rate * TAIL_MASS)).ln() / rate).max(10.0)
    }

    /// Tabulated CDF for evaluation and inverse sampling.
    pub fn cdf_table(&self) -> CdfTable {
        CdfTable::new(|x| self.pdf(x), self.window(), CDF_NODES)
    }
}

/// Piecewise-linear CDF on a uniform grid, built by Simpson sub-integration.
#[derive(Clone, Debug)]
pub struct CdfTable {
    xs: Vec<f64>,
    cdf: Vec<f64>,
}

impl CdfTable {
    pub fn new(pdf: impl Fn(f64) -> f64, half_width: f64, nodes: usize) -> Self {
        let h = 2.0 * half_width / (nodes - 1) as f64;
        let xs: Vec<f64> = (0..nodes).map(|i| -half_width + i as f64 * h).collect();
        let mut cdf = Vec::with_capacity(nodes);
        let mut acc = 0.0;
        cdf.push(0.0);
        for w in xs.windows(2) {
            acc += h / 6.0 * (pdf(w[0]) + 4.0 * pdf(0.5 * (w[0] + w[1])) + pdf(w[1]));
            cdf.push(acc);
        }
        for c in &mut cdf {
            *c /= acc;
        }
        Self { xs, cdf }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = (self.xs[0], self.xs[self.xs.len() - 1]);
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        let h = self.xs[1] - self.xs[0];
        let i = (((x - lo) / h) as usize).min(self.xs.len() - 2);
        let f = (x - self.xs[i]) / h;
        self.cdf[i] + f * (self.cdf[i + 1] - self.cdf[i])
    }

    pub fn quantile(&self, u: f64) -> f64 {
        let i = self
            .cdf
            .partition_point(|&c| c < u)
            .clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let f = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        self.xs[i - 1] + f * (self.xs[i] - self.xs[i - 1])
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

/// Probability that the gap `X = Re p₀ − ξ` of a strip SLE(κ; ρ₊, ρ₋, ρ₀)
/// from `(0; +∞, −∞, p₀)` tends to `−∞`, i.e. that the trace ends to the
/// right of `p₀`, when started from `X(0) = x`. Uses the scale function
/// `h′(y) = exp(y/2)^{−(4/κ)(ρ₊−ρ₋)/2} cosh(y/2)^{−(4/κ)(κ/2−2−(ρ₊+ρ₋)/2)}`:
/// the answer is `∫_x^∞ h′ / ∫_ℝ h′`. `None` when `h` is unbounded at an end,
/// in which case the exit side is almost surely fixed.
pub fn right_exit_probability(kappa: f64, rho_plus: f64, rho_minus: f64, x: f64) -> Option<f64> {
    let a = -(4.0 / kappa) * 0.5 * (rho_plus - rho_minus);
    let b = -(4.0 / kappa) * (kappa / 2.0 - 2.0 - 0.5 * (rho_plus + rho_minus));
    // h′ behaves like exp((a ± b)·y/2) as y → ±∞.
    if !(a + b < 0.0 && a - b > 0.0) {
        return None;
    }
    let hp = |y: f64| (0.5 * a * y + b * ln_cosh(0.5 * y)).exp();
    let total = integrate_real_line(hp, 1e-12);
    let right = integrate_from(hp, x, 1e-12);
    Some(right / total)
}

/// `∫_{x0}^∞ g` after `y = x0 + s/(1 − s)`.
pub fn integrate_from(g: impl Fn(f64) -> f64, x0: f64, abs_tol: f64) -> f64 {
    let h = |s: f64| {
        let u = 1.0 - s;
        g(x0 + s / u) / (u * u)
    };
    double_exponential::integrate(h, 0.0, 1.0, abs_tol).integral
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_cosh_is_stable() {
        assert!((ln_cosh(0.3) - 0.3f64.cosh().ln()).abs() < 1e-15);
        assert!((ln_cosh(800.0) - (800.0 - LN_2)).abs() < 1e-9);
    }

    #[test]
    fn table_quantile_inverts_cdf() {
        let s = DensitySpec::new(6.0, -0.5, 0.5).unwrap();
        let t = s.cdf_table();
        for u in [0.01, 0.3, 0.5, 0.9, 0.999] {
            assert!((t.cdf(t.quantile(u)) - u).abs() < 1e-9);
        }
    }

    #[test]
    fn symmetric_exit_is_even() {
        let p = right_exit_probability(6.0, -1.0, -1.0, 0.0).unwrap();
        assert!((p - 0.5).abs() < 1e-9);
        assert!(right_exit_probability(6.0, 1.0, -1.0, 0.0).is_none());
        let q = right_exit_probability(6.0, -1.0, -1.0, 1.0).unwrap();
        assert!(q < 0.5);
    }

    #[test]
    fn hypotheses_are_enforced() {
        assert!(DensitySpec::new(6.0, 1.5, -1.5).is_err());
        assert!(DensitySpec::new(6.0, 1.0, 0.0).is_err());
    }
}
