//! Samplers for the driving function and force points of chordal and strip
//! SLE(κ; ρ⃗).
//!
//! The driving value is advanced by Euler–Maruyama. Force points are then
//! moved by the exact one-step Loewner map for the new driving value, so the
//! recorded trajectories are the images of the points under the same discrete
//! flow that [`crate::loewner`] uses.
//!
//! Near a force point with `ρ ≠ 0` the step is halved (down to `dt/64`) while
//! the gap is below `10·√h`. A side whose weights satisfy `Σρ ≥ κ/2 − 2` can
//! never be hit by the continuous process; there an overshoot is reflected.
//! On any other side the process stops at the first swallowing of the adjacent
//! force point, and that final value is kept in the path.
//!
//! A single degenerate force point (`x⁺` or `x⁻`) starts at `±0.1·√dt`. For the
//! first ten steps its gap is moved by exact Bessel transitions, since the gap
//! scaled by `1/√κ` is a Bessel process near the start.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};

use crate::loewner::{
    chordal_step_real, strip_step_real_gap, strip_step_top_gap, DrivingPath, Geometry,
};
#[allow(unused_imports)]
use crate::math::Float;
use crate::math::{coth2, tanh2};
use crate::{Error, Result};

/// Largest grid step accepted by the samplers.
pub const MAX_DT: f64 = 1e-2;

const DEGENERATE_OFFSET: f64 = 0.1;
const BESSEL_STEPS: usize = 10;
const BESSEL_SUBSTEPS: usize = 16;
const NEAR_GAP: f64 = 10.0;
const MAX_HALVINGS: u32 = 6;

/// Where a force point sits.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ForceLocation {
    /// A real point `p ≠ x`.
    Real(f64),
    /// `x⁺`, immediately to the right of the start.
    PlusDegenerate,
    /// `x⁻`, immediately to the left of the start.
    MinusDegenerate,
    /// `+∞` (strip only).
    PlusInfinity,
    /// `−∞` (strip only).
    MinusInfinity,
    /// `x₀ + πi` on the upper line of the strip, stored by its real part.
    Top(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ForceSpec {
    pub location: ForceLocation,
    pub rho: f64,
}

impl ForceSpec {
    pub fn new(location: ForceLocation, rho: f64) -> Self {
        Self { location, rho }
    }
}

/// Full description of one SLE(κ; ρ⃗) process and its numerics.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SleConfig {
    pub geometry: Geometry,
    pub kappa: f64,
    pub start: f64,
    pub force_points: Vec<ForceSpec>,
    pub horizon: f64,
    pub dt: f64,
    pub seed: u64,
}

impl SleConfig {
    /// Plain SLE(κ) from 0 with seed 0.
    pub fn new(geometry: Geometry, kappa: f64, horizon: f64, dt: f64) -> Self {
        Self {
            geometry,
            kappa,
            start: 0.0,
            force_points: Vec::new(),
            horizon,
            dt,
            seed: 0,
        }
    }

    pub fn with_start(mut self, start: f64) -> Self {
        self.start = start;
        self
    }

    pub fn with_force(mut self, location: ForceLocation, rho: f64) -> Self {
        self.force_points.push(ForceSpec::new(location, rho));
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Number of grid steps needed to cover the horizon.
    pub fn steps(&self) -> usize {
        (self.horizon / self.dt - 1e-9).ceil().max(0.0) as usize
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return bad("kappa must be positive");
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("dt must be positive");
        }
        if self.dt > MAX_DT {
            return Err(Error::StepTooLarge { dt: self.dt });
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return bad("horizon must be positive");
        }
        if !self.start.is_finite() {
            return bad("start must be finite");
        }
        let (mut plus, mut minus, mut pinf, mut minf) = (0, 0, 0, 0);
        let mut reals: Vec<f64> = Vec::new();
        let mut tops: Vec<f64> = Vec::new();
        for f in &self.force_points {
            if !f.rho.is_finite() {
                return bad("force weights must be finite");
            }
            let strip_only = match f.location {
                ForceLocation::Real(p) => {
                    if !p.is_finite() {
                        return bad("real force points must be finite");
                    }
                    if p == self.start {
                        return bad("force point coincides with the start");
                    }
                    if reals.contains(&p) {
                        return bad("force points must be distinct");
                    }
                    reals.push(p);
                    false
                }
                ForceLocation::PlusDegenerate | ForceLocation::MinusDegenerate => {
                    if f.location == ForceLocation::PlusDegenerate {
                        plus += 1;
                    } else {
                        minus += 1;
                    }
                    if f.rho < self.kappa / 2.0 - 2.0 {
                        return bad("a degenerate force point needs rho >= kappa/2 - 2");
                    }
                    false
                }
                ForceLocation::PlusInfinity => {
                    pinf += 1;
                    true
                }
                ForceLocation::MinusInfinity => {
                    minf += 1;
                    true
                }
                ForceLocation::Top(a) => {
                    if !a.is_finite() {
                        return bad("top force points must be finite");
                    }
                    if tops.contains(&a) {
                        return bad("force points must be distinct");
                    }
                    tops.push(a);
                    true
                }
            };
            if strip_only && self.geometry != Geometry::Strip {
                return bad("force points at infinity or on the top line need strip geometry");
            }
        }
        if plus > 1 || minus > 1 || pinf > 1 || minf > 1 {
            return bad("duplicate force point");
        }
        Ok(())
    }
}

/// Force point values on the driving grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ForcePointTrajectory {
    pub points: Vec<ForceSpec>,
    /// `values[k][i]`: point `k` at grid step `i`. Real part for top points,
    /// `±∞` for points at infinity.
    pub values: Vec<Vec<f64>>,
    /// Swallowing time of each point, if it was swallowed.
    pub swallowed: Vec<Option<f64>>,
    /// Time at which the process stopped before the horizon.
    pub stopped: Option<f64>,
}

/// Swallowing of a tracked real point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwallowReport {
    pub point: f64,
    /// First grid time of swallowing; `None` if it survives the horizon.
    pub time: Option<f64>,
    /// `|p(T) − ξ(T)|` at the swallowing time or the end of the path.
    pub terminal_gap: f64,
}

/// True iff a gap is below the swallowing radius `2√(2·dt)`.
pub fn detect_swallowing(gap: f64, dt: f64) -> bool {
    gap < 2.0 * (2.0 * dt).sqrt()
}

/// One exact transition of a Bessel process of dimension `delta` over time
/// `h`: `R'² / h` is noncentral χ² with `delta` degrees of freedom and
/// noncentrality `R²/h`, sampled as a Poisson mixture of Gamma laws.
pub fn bessel_step<R: Rng + ?Sized>(r: f64, delta: f64, h: f64, rng: &mut R) -> f64 {
    let lambda = r * r / h;
    let n = if lambda > 0.0 {
        Poisson::new(0.5 * lambda)
            .map(|p| p.sample(rng))
            .unwrap_or(0.0)
    } else {
        0.0
    };
    let shape = 0.5 * delta + n;
    let g: f64 = Gamma::new(shape, 1.0).expect("positive shape").sample(rng);
    (2.0 * g * h).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Kind {
    Real,
    Top,
    Infinite,
}

struct Point {
    kind: Kind,
    rho: f64,
    value: f64,
    /// +1 right of the driving value, −1 left; 0 for non-real points.
    side: f64,
    /// Set once the gap has reached the swallowing radius.
    armed: bool,
}

struct Sampler<'a> {
    geometry: Geometry,
    kappa: f64,
    dt: f64,
    xi: f64,
    points: Vec<Point>,
    /// Adjacent real point on each side (right, left) and whether that side
    /// is protected from swallowing.
    adjacent: [Option<(usize, bool)>; 2],
    degenerate: Option<usize>,
    rng: &'a mut ChaCha8Rng,
}

enum Outcome {
    Continue,
    Swallowed(usize),
}

impl Sampler<'_> {
    fn drift(&self, xi: f64, skip: Option<usize>) -> f64 {
        let mut d = 0.0;
        for (k, p) in self.points.iter().enumerate() {
            if Some(k) == skip || p.rho == 0.0 {
                continue;
            }
            d += match (self.geometry, p.kind) {
                (Geometry::Chordal, _) => p.rho / (xi - p.value),
                (Geometry::Strip, Kind::Real) => 0.5 * p.rho * coth2(xi - p.value),
                (Geometry::Strip, Kind::Top) => 0.5 * p.rho * tanh2(xi - p.value),
                // coth₂(ξ − p) → ∓1 as p → ±∞.
                (Geometry::Strip, Kind::Infinite) => -0.5 * p.rho * p.value.signum(),
            };
        }
        d
    }

    /// Smallest gap to an adjacent point that feeds drift.
    fn near_gap(&self) -> f64 {
        self.adjacent
            .iter()
            .flatten()
            .filter(|(k, _)| self.points[*k].rho != 0.0)
            .map(|(k, _)| (self.points[*k].value - self.xi).abs())
            .fold(f64::INFINITY, f64::min)
    }

    fn move_points(&mut self, xi: f64, h: f64) {
        for p in &mut self.points {
            match p.kind {
                Kind::Infinite => {}
                Kind::Top => p.value = xi + strip_step_top_gap(p.value - xi, h),
                Kind::Real => {
                    p.value = match self.geometry {
                        Geometry::Chordal => chordal_step_real(p.value, xi, h),
                        Geometry::Strip => xi + strip_step_real_gap(p.value - xi, h),
                    };
                    p.armed |= !detect_swallowing((p.value - xi).abs(), self.dt);
                }
            }
        }
        self.xi = xi;
    }

    /// Keeps `xi` on the correct side of both adjacent points; reports the
    /// first unprotected point that is crossed or comes within the radius.
    fn settle(&self, mut xi: f64) -> (f64, Option<usize>) {
        for &(k, protected) in self.adjacent.iter().flatten() {
            let p = &self.points[k];
            if (p.value - xi) * p.side <= 0.0 {
                if !protected {
                    return (xi, Some(k));
                }
                xi = 2.0 * p.value - xi;
            }
        }
        if let [Some((r, _)), Some((l, _))] = self.adjacent {
            let (pr, pl) = (self.points[r].value, self.points[l].value);
            if xi >= pr || xi <= pl {
                xi = 0.5 * (pr + pl);
            }
        }
        for &(k, protected) in self.adjacent.iter().flatten() {
            let p = &self.points[k];
            if !protected && p.armed && detect_swallowing((p.value - xi).abs(), self.dt) {
                return (xi, Some(k));
            }
        }
        (xi, None)
    }

    fn euler(&mut self, h: f64) -> Outcome {
        let noise: f64 = self.rng.sample(StandardNormal);
        let proposal = self.xi + self.drift(self.xi, None) * h + (self.kappa * h).sqrt() * noise;
        let (xi, hit) = self.settle(proposal);
        if let Some(k) = hit {
            self.xi = xi;
            return Outcome::Swallowed(k);
        }
        self.move_points(xi, h);
        Outcome::Continue
    }

    /// Exact Bessel move of the gap to the degenerate point; the driving value
    /// is recovered by inverting the one-step slit map at that point.
    fn bessel(&mut self, k: usize, h: f64) -> Outcome {
        let (p, side, rho) = {
            let q = &self.points[k];
            (q.value, q.side, q.rho)
        };
        let sk = self.kappa.sqrt();
        let delta = 2.0 * (2.0 + rho) / self.kappa + 1.0;
        let gap = (p - self.xi) * side;
        let next = sk * bessel_step(gap / sk, delta, h, self.rng);
        let base = p - side * (next * next - 4.0 * h).max(0.0).sqrt();
        let proposal = base + self.drift(self.xi, Some(k)) * h;
        let (xi, hit) = self.settle(proposal);
        if let Some(j) = hit {
            self.xi = xi;
            return Outcome::Swallowed(j);
        }
        self.move_points(xi, h);
        Outcome::Continue
    }

    fn grid_step(&mut self, step: usize) -> Outcome {
        if let Some(k) = self.degenerate.filter(|_| step <= BESSEL_STEPS) {
            let h = self.dt / BESSEL_SUBSTEPS as f64;
            for _ in 0..BESSEL_SUBSTEPS {
                if let Outcome::Swallowed(j) = self.bessel(k, h) {
                    return Outcome::Swallowed(j);
                }
            }
            return Outcome::Continue;
        }
        let mut remaining = self.dt;
        while remaining > 0.0 {
            let mut h = self.dt;
            let gap = self.near_gap();
            let mut halvings = 0;
            while halvings < MAX_HALVINGS && gap < NEAR_GAP * h.sqrt() {
                h *= 0.5;
                halvings += 1;
            }
            let h = h.min(remaining);
            if let Outcome::Swallowed(j) = self.euler(h) {
                return Outcome::Swallowed(j);
            }
            remaining -= h;
        }
        Outcome::Continue
    }
}

fn side_is_protected(points: &[Point], side: f64, kappa: f64) -> bool {
    let mut on_side: Vec<&Point> = points
        .iter()
        .filter(|p| p.kind == Kind::Real && p.side == side)
        .collect();
    on_side.sort_by(|a, b| (a.value * side).total_cmp(&(b.value * side)));
    let mut sum = 0.0;
    on_side.iter().all(|p| {
        sum += p.rho;
        sum >= kappa / 2.0 - 2.0
    })
}

fn sample(config: &SleConfig, rng: &mut ChaCha8Rng) -> Result<(DrivingPath, ForcePointTrajectory)> {
    config.validate()?;
    let dt = config.dt;
    let x = config.start;
    let offset = DEGENERATE_OFFSET * dt.sqrt();
    let mut points = Vec::with_capacity(config.force_points.len());
    for f in &config.force_points {
        let (kind, value, side) = match f.location {
            ForceLocation::Real(p) => (Kind::Real, p, if p > x { 1.0 } else { -1.0 }),
            ForceLocation::PlusDegenerate => (Kind::Real, x + offset, 1.0),
            ForceLocation::MinusDegenerate => (Kind::Real, x - offset, -1.0),
            ForceLocation::PlusInfinity => (Kind::Infinite, f64::INFINITY, 0.0),
            ForceLocation::MinusInfinity => (Kind::Infinite, f64::NEG_INFINITY, 0.0),
            ForceLocation::Top(a) => (Kind::Top, a, 0.0),
        };
        let armed = !detect_swallowing((value - x).abs(), dt);
        points.push(Point {
            kind,
            rho: f.rho,
            value,
            side,
            armed,
        });
    }
    let adjacent = [1.0, -1.0].map(|side| {
        points
            .iter()
            .enumerate()
            .filter(|(_, p)| p.kind == Kind::Real && p.side == side)
            .min_by(|a, b| (a.1.value * side).total_cmp(&(b.1.value * side)))
            .map(|(k, _)| (k, side_is_protected(&points, side, config.kappa)))
    });
    let degenerate_idx: Vec<usize> = config
        .force_points
        .iter()
        .enumerate()
        .filter(|(_, f)| {
            matches!(
                f.location,
                ForceLocation::PlusDegenerate | ForceLocation::MinusDegenerate
            )
        })
        .map(|(k, _)| k)
        .collect();
    let degenerate = if degenerate_idx.len() == 1 {
        Some(degenerate_idx[0])
    } else {
        None
    };

    let n = config.steps();
    let mut xs = Vec::with_capacity(n + 1);
    xs.push(x);
    let mut values: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let mut v = Vec::with_capacity(n + 1);
            v.push(p.value);
            v
        })
        .collect();
    let mut swallowed = vec![None; points.len()];
    let mut stopped = None;

    let mut s = Sampler {
        geometry: config.geometry,
        kappa: config.kappa,
        dt,
        xi: x,
        points,
        adjacent,
        degenerate,
        rng,
    };
    for step in 1..=n {
        let outcome = s.grid_step(step);
        xs.push(s.xi);
        for (v, p) in values.iter_mut().zip(&s.points) {
            v.push(p.value);
        }
        if let Outcome::Swallowed(k) = outcome {
            let t = step as f64 * dt;
            swallowed[k] = Some(t);
            stopped = Some(t);
            break;
        }
    }
    let driving = DrivingPath::new(config.geometry, config.kappa, dt, xs)?;
    let forces = ForcePointTrajectory {
        points: config.force_points.clone(),
        values,
        swallowed,
        stopped,
    };
    Ok((driving, forces))
}

/// Per-sample generator used by the samplers: ChaCha8 seeded from `seed`.
pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Samples chordal SLE(κ; ρ⃗) (`dξ = √κ dB + Σ ρ_k/(ξ − p_k) dt`,
/// `dp_k = 2/(p_k − ξ) dt`) with randomness drawn from `config.seed`.
pub fn sample_chordal_driving(config: &SleConfig) -> Result<(DrivingPath, ForcePointTrajectory)> {
    sample_chordal_with(config, &mut rng_for(config.seed))
}

/// As [`sample_chordal_driving`] with an explicit generator.
pub fn sample_chordal_with(
    config: &SleConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(DrivingPath, ForcePointTrajectory)> {
    if config.geometry != Geometry::Chordal {
        return Err(Error::GeometryMismatch {
            expected: Geometry::Chordal,
            found: config.geometry,
        });
    }
    sample(config, rng)
}

/// Samples strip SLE(κ; ρ⃗) (`dξ = √κ dB + Σ (ρ_k/2) coth₂(ξ − p_k) dt`).
pub fn sample_strip_driving(config: &SleConfig) -> Result<(DrivingPath, ForcePointTrajectory)> {
    sample_strip_with(config, &mut rng_for(config.seed))
}

/// As [`sample_strip_driving`] with an explicit generator.
pub fn sample_strip_with(
    config: &SleConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(DrivingPath, ForcePointTrajectory)> {
    if config.geometry != Geometry::Strip {
        return Err(Error::GeometryMismatch {
            expected: Geometry::Strip,
            found: config.geometry,
        });
    }
    sample(config, rng)
}

/// Dispatches on the configured geometry.
pub fn sample_driving(config: &SleConfig) -> Result<(DrivingPath, ForcePointTrajectory)> {
    sample(config, &mut rng_for(config.seed))
}
