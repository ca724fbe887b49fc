//! Deterministic Loewner machinery for a discretized driving function.
//!
//! The driving function is held constant on each grid step. Step `k` covers
//! `(t_{k-1}, t_k]` and uses the grid value `ξ(t_k)`, so after `k` steps the
//! tip of the discrete hull is mapped exactly onto `ξ(t_k)`. Within a step the
//! flow is solved in closed form:
//!
//! * chordal, `∂ₜφ = 2/(φ − ξ)`: `w ↦ ξ + sqrt((w − ξ)² + 4h)`;
//! * strip, `∂ₜψ = coth((ψ − ξ)/2)`: `cosh((w − ξ)/2)` is multiplied by
//!   `exp(h/2)`.
//!
//! Each step is therefore an exact conformal map and the composition is a true
//! conformal map; discretization error enters only through the driving.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

#[allow(unused_imports)]
use crate::math::Float;
use crate::math::{csqrt, upper_root, I};
use crate::{Error, Result};

/// Domain in which the hulls grow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Geometry {
    /// Upper half-plane, hydrodynamic normalization at ∞.
    Chordal,
    /// Strip `0 < Im z < π`, hulls grow from ℝ towards `ℝ + πi`.
    Strip,
}

impl Geometry {
    /// Upper bound on the imaginary part inside the domain.
    pub fn height(self) -> f64 {
        match self {
            Geometry::Chordal => f64::INFINITY,
            Geometry::Strip => PI,
        }
    }
}

/// Driving function sampled on the uniform grid `t_i = i·dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct DrivingPath {
    geometry: Geometry,
    kappa: f64,
    dt: f64,
    values: Vec<f64>,
}

impl DrivingPath {
    pub fn new(geometry: Geometry, kappa: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDriving("no samples"));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidDriving("time step must be positive"));
        }
        if !(kappa >= 0.0) {
            return Err(Error::InvalidDriving("kappa must be nonnegative"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDriving("non-finite sample"));
        }
        Ok(Self {
            geometry,
            kappa,
            dt,
            values,
        })
    }

    /// `ξ ≡ value` over `steps` steps.
    pub fn constant(geometry: Geometry, value: f64, dt: f64, steps: usize) -> Result<Self> {
        Self::new(geometry, 0.0, dt, alloc::vec![value; steps + 1])
    }

    /// Samples a deterministic driving function on the grid.
    pub fn from_fn(
        geometry: Geometry,
        dt: f64,
        steps: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let values = (0..=steps).map(|i| f(i as f64 * dt)).collect();
        Self::new(geometry, 0.0, dt, values)
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn start(&self) -> f64 {
        self.values[0]
    }

    /// Number of grid steps.
    pub fn steps(&self) -> usize {
        self.values.len() - 1
    }

    pub fn horizon(&self) -> f64 {
        self.steps() as f64 * self.dt
    }

    pub fn time(&self, step: usize) -> f64 {
        step as f64 * self.dt
    }

    /// Driving value at grid step `step`.
    pub fn value(&self, step: usize) -> f64 {
        self.values[step]
    }

    /// Grid index of `t`, which must be a grid time within the horizon.
    pub fn step_at(&self, t: f64) -> Result<usize> {
        let err = Error::InvalidTime {
            t,
            horizon: self.horizon(),
        };
        if !(t >= 0.0) || !t.is_finite() {
            return Err(err);
        }
        let k = (t / self.dt).round();
        if (k * self.dt - t).abs() > 1e-9 * (1.0 + t) || k > self.steps() as f64 {
            return Err(err);
        }
        Ok(k as usize)
    }

    /// The path restricted to the first `steps` steps.
    pub fn truncated(&self, steps: usize) -> Self {
        let n = steps.min(self.steps());
        Self {
            values: self.values[..=n].to_vec(),
            ..self.clone()
        }
    }

    /// `-ξ`, which drives the mirror image `z ↦ -z̄` of the hulls.
    pub fn reflected(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| -v).collect(),
            ..self.clone()
        }
    }

    fn expect(&self, geometry: Geometry) -> Result<()> {
        if self.geometry != geometry {
            return Err(Error::GeometryMismatch {
                expected: geometry,
                found: self.geometry,
            });
        }
        Ok(())
    }

    /// Distance below which a point is treated as absorbed by the hull.
    pub(crate) fn swallow_radius(&self) -> f64 {
        2.0 * (2.0 * self.dt).sqrt()
    }
}

/// Ordered trace samples `γ(t_i)` (chordal) or `β(t_i)` (strip).
#[derive(Clone, Debug, PartialEq)]
pub struct TracePath {
    pub geometry: Geometry,
    pub times: Vec<f64>,
    pub points: Vec<Complex64>,
}

impl TracePath {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> Complex64 {
        *self
            .points
            .last()
            .expect("trace has at least the start point")
    }

    /// The trace as a polyline.
    pub fn to_curve(&self) -> Result<Curve> {
        Curve::new(self.points.clone())
    }
}

/// Open polyline in the complex plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    points: Vec<Complex64>,
    pub closed: bool,
}

impl Curve {
    /// Builds a curve, dropping consecutive repeated points.
    pub fn new(mut points: Vec<Complex64>) -> Result<Self> {
        points.dedup();
        if points.is_empty() {
            return Err(Error::TooFewPoints {
                needed: 1,
                found: 0,
            });
        }
        Ok(Self {
            points,
            closed: false,
        })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> Complex64 {
        self.points[0]
    }

    pub fn last(&self) -> Complex64 {
        self.points[self.points.len() - 1]
    }

    /// Applies `z ↦ factor·z`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            points: self.points.iter().map(|z| z * factor).collect(),
            closed: self.closed,
        }
    }

    /// True when no two non-adjacent segments intersect.
    pub fn is_simple(&self) -> bool {
        let p = &self.points;
        let n = p.len();
        if n < 4 {
            return true;
        }
        for i in 0..n - 1 {
            for j in i + 2..n - 1 {
                if segments_intersect(p[i], p[i + 1], p[j], p[j + 1]) {
                    return false;
                }
            }
        }
        true
    }
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

fn segments_intersect(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Result of pushing a point through the forward flow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FlowPoint {
    /// The point survived; its image under the map.
    Image(Complex64),
    /// The point entered the hull during grid step `step` (time `time`).
    Swallowed { step: usize, time: f64 },
}

impl FlowPoint {
    pub fn image(self) -> Option<Complex64> {
        match self {
            FlowPoint::Image(w) => Some(w),
            FlowPoint::Swallowed { .. } => None,
        }
    }

    pub fn is_swallowed(self) -> bool {
        matches!(self, FlowPoint::Swallowed { .. })
    }
}

/// One step of the chordal flow with constant driving `xi0` over `delta_t`:
/// `ξ0 + sqrt((z − ξ0)² + 4·Δt)`, taking the root in the closed upper
/// half-plane. Points on the removed slit `{ξ0 + iy : 0 ≤ y < 2√Δt}` are
/// reported as [`Error::OnSlit`]; the tip itself maps to `ξ0`.
pub fn elementary_slit_map(xi0: f64, delta_t: f64, z: Complex64) -> Result<Complex64> {
    if !(delta_t >= 0.0) {
        return Err(Error::InvalidArgument("negative time step"));
    }
    if delta_t == 0.0 {
        return Ok(z);
    }
    let tol = 1e-12 * (1.0 + z.norm());
    if (z.re - xi0).abs() <= tol && z.im >= -tol && z.im < 2.0 * delta_t.sqrt() - tol {
        return Err(Error::OnSlit);
    }
    Ok(chordal_step(z, xi0, delta_t))
}

#[inline]
pub(crate) fn chordal_step(w: Complex64, xi: f64, h: f64) -> Complex64 {
    let d = w - xi;
    upper_root(csqrt(d * d + 4.0 * h), d.re) + xi
}

/// Chordal step for a real point off the driving value; keeps its side.
#[inline]
pub(crate) fn chordal_step_real(x: f64, xi: f64, h: f64) -> f64 {
    let d = x - xi;
    let r = (d * d + 4.0 * h).sqrt();
    if d >= 0.0 {
        xi + r
    } else {
        xi - r
    }
}

/// Exact strip step for a gap `a = x − ξ` on ℝ.
#[inline]
pub(crate) fn strip_step_real_gap(a: f64, h: f64) -> f64 {
    let sh = (0.25 * a).sinh();
    let s = 2.0 * sh * sh * (0.5 * h).exp() + (0.5 * h).exp_m1();
    let r = 4.0 * (0.5 * s).sqrt().asinh();
    if a >= 0.0 {
        r
    } else {
        -r
    }
}

/// Exact strip step for a gap `a` measured along `ℝ + πi`.
#[inline]
pub(crate) fn strip_step_top_gap(a: f64, h: f64) -> f64 {
    2.0 * ((0.5 * a).sinh() * (0.5 * h).exp()).asinh()
}

#[inline]
fn strip_step_inv_top_gap(a: f64, h: f64) -> f64 {
    2.0 * ((0.5 * a).sinh() * (-0.5 * h).exp()).asinh()
}

/// Solves `cosh(u1) = cosh(u0)·exp(h/2)` for `u1` given `u0 = (w − ξ)/2`, with
/// `h` of either sign, choosing the root in `0 ≤ Im u1 ≤ π/2`.
#[inline]
fn strip_half_gap(u0: Complex64, h: f64) -> Complex64 {
    let sh = (u0 * 0.5).sinh();
    let s = sh * sh * (2.0 * (0.5 * h).exp()) + (0.5 * h).exp_m1();
    upper_root(csqrt(s * 0.5), u0.re).asinh() * 2.0
}

#[inline]
pub(crate) fn strip_step(w: Complex64, xi: f64, h: f64) -> Complex64 {
    let a = w.re - xi;
    if w.im == 0.0 {
        return Complex64::new(xi + strip_step_real_gap(a, h), 0.0);
    }
    if w.im == PI {
        return Complex64::new(xi + strip_step_top_gap(a, h), PI);
    }
    strip_half_gap((w - xi) * 0.5, h) * 2.0 + xi
}

#[inline]
pub(crate) fn strip_step_inv(w: Complex64, xi: f64, h: f64) -> Complex64 {
    let a = w.re - xi;
    if w.im == PI {
        return Complex64::new(xi + strip_step_inv_top_gap(a, h), PI);
    }
    if w.im == 0.0 {
        let sh = (0.25 * a).sinh();
        let s = 2.0 * sh * sh * (-0.5 * h).exp() + (-0.5 * h).exp_m1();
        if s >= 0.0 {
            let r = 4.0 * (0.5 * s).sqrt().asinh();
            return Complex64::new(xi + if a >= 0.0 { r } else { -r }, 0.0);
        }
    }
    strip_half_gap((w - xi) * 0.5, -h) * 2.0 + xi
}

/// Pushes a real gap `x − ξ` through one step of the given geometry.
#[inline]
pub(crate) fn step_real_gap(geometry: Geometry, gap: f64, h: f64) -> f64 {
    match geometry {
        Geometry::Chordal => chordal_step_real(gap, 0.0, h),
        Geometry::Strip => strip_step_real_gap(gap, h),
    }
}

fn forward_map(driving: &DrivingPath, z: Complex64, t: f64) -> Result<FlowPoint> {
    let geometry = driving.geometry;
    if z.im < 0.0 || z.im > geometry.height() || !z.re.is_finite() {
        return Err(Error::InvalidArgument("point outside the closed domain"));
    }
    let k = driving.step_at(t)?;
    let dt = driving.dt;
    let radius = driving.swallow_radius();
    let lift = dt.sqrt();
    let xs = &driving.values;
    let mut w = z;
    for j in 1..=k {
        let xi = xs[j];
        let d = w - xi;
        let crossed = w.im == 0.0 && (d.re >= 0.0) != (w.re - xs[j - 1] >= 0.0);
        if (w.im < lift && d.norm() < radius) || crossed {
            return Ok(FlowPoint::Swallowed {
                step: j,
                time: driving.time(j),
            });
        }
        w = match geometry {
            Geometry::Chordal => chordal_step(w, xi, dt),
            Geometry::Strip => strip_step(w, xi, dt),
        };
    }
    Ok(FlowPoint::Image(w))
}

/// `φ(t, z)`: composition of the per-step slit maps over `[0, t]`.
pub fn chordal_forward_map(driving: &DrivingPath, z: Complex64, t: f64) -> Result<FlowPoint> {
    driving.expect(Geometry::Chordal)?;
    forward_map(driving, z, t)
}

/// `ψ(t, z)` for the strip flow; `ℝ` and `ℝ + πi` are preserved exactly.
pub fn strip_forward_map(driving: &DrivingPath, z: Complex64, t: f64) -> Result<FlowPoint> {
    driving.expect(Geometry::Strip)?;
    forward_map(driving, z, t)
}

/// Applies the inverse steps `k, k-1, …, 1` to `w`.
pub(crate) fn inverse_from_step(driving: &DrivingPath, w: Complex64, k: usize) -> Complex64 {
    if k == 0 {
        return w;
    }
    let dt = driving.dt;
    let xs = &driving.values[..=k];
    match driving.geometry {
        Geometry::Chordal => {
            // Work with the offset d = z − ξ to save a subtraction per step.
            let mut d = w - xs[k];
            for j in (1..=k).rev() {
                d = upper_root(csqrt(d * d - 4.0 * dt), d.re) + (xs[j] - xs[j - 1]);
            }
            d + xs[0]
        }
        Geometry::Strip => strip_inverse_from_step(xs, dt, w),
    }
}

/// Strip inverse in the coordinate `σ = sinh((z − ξ)/4)`. One inverse step is
/// `σ' = ±sqrt(σ²·e^{−h/2} + (e^{−h/2} − 1)/2)` and moving to the previous
/// driving value is the addition formula for sinh, so each step costs two
/// square roots. `ℝ + πi` and `ℝ` are handled by the exact real formulas.
fn strip_inverse_from_step(xs: &[f64], dt: f64, w: Complex64) -> Complex64 {
    let k = xs.len() - 1;
    if w.im == PI || w.im == 0.0 {
        let mut z = w;
        for j in (1..=k).rev() {
            z = strip_step_inv(z, xs[j], dt);
            if z.im != PI && z.im != 0.0 {
                return strip_inverse_from_step(&xs[..j], dt, z);
            }
        }
        return z;
    }
    let e = (-0.5 * dt).exp();
    let c = 0.5 * (-0.5 * dt).exp_m1();
    let mut sigma = ((w - xs[k]) * 0.25).sinh();
    for j in (1..=k).rev() {
        sigma = upper_root(csqrt(sigma * sigma * e + c), sigma.re);
        let tau = 0.25 * (xs[j] - xs[j - 1]);
        sigma = sigma * tau.cosh() + csqrt(sigma * sigma + 1.0) * tau.sinh();
    }
    sigma.asinh() * 4.0 + xs[0]
}

fn inverse_map(driving: &DrivingPath, w: Complex64, t: f64) -> Result<Complex64> {
    if w.im < 0.0 || w.im > driving.geometry.height() || !w.re.is_finite() {
        return Err(Error::InvalidArgument("point outside the closed domain"));
    }
    let k = driving.step_at(t)?;
    Ok(inverse_from_step(driving, w, k))
}

/// `f_t(w) = φ(t, ·)⁻¹(w)`. Real `w` inside `(c(t), d(t))` lands on the hull
/// boundary.
pub fn chordal_inverse_map(driving: &DrivingPath, w: Complex64, t: f64) -> Result<Complex64> {
    driving.expect(Geometry::Chordal)?;
    inverse_map(driving, w, t)
}

/// `ψ(t, ·)⁻¹(w)` in the strip.
pub fn strip_inverse_map(driving: &DrivingPath, w: Complex64, t: f64) -> Result<Complex64> {
    driving.expect(Geometry::Strip)?;
    inverse_map(driving, w, t)
}

/// Trace point at grid step `step`: the preimage of `ξ(t_k) + i·eps`.
pub fn trace_point(driving: &DrivingPath, step: usize, eps: f64) -> Complex64 {
    if step == 0 {
        return Complex64::new(driving.start(), 0.0);
    }
    let w = driving.values[step] + I * eps;
    clamp_to_domain(inverse_from_step(driving, w, step), driving.geometry)
}

/// Trace points at selected grid steps.
pub fn trace_points(
    driving: &DrivingPath,
    steps: impl IntoIterator<Item = usize>,
    eps: f64,
) -> TracePath {
    let mut times = Vec::new();
    let mut points = Vec::new();
    for k in steps {
        times.push(driving.time(k));
        points.push(trace_point(driving, k, eps));
    }
    TracePath {
        geometry: driving.geometry,
        times,
        points,
    }
}

fn clamp_to_domain(z: Complex64, geometry: Geometry) -> Complex64 {
    Complex64::new(z.re, z.im.max(0.0).min(geometry.height()))
}

fn full_trace(driving: &DrivingPath, eps: f64) -> Result<TracePath> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("trace offset must be positive"));
    }
    Ok(trace_points(driving, 0..=driving.steps(), eps))
}

/// Default trace offset: the height scale `√dt` of one elementary slit.
pub fn default_eps(driving: &DrivingPath) -> f64 {
    driving.dt.sqrt()
}

/// `γ(t_i)` at every grid time. Quadratic in the number of steps.
pub fn chordal_trace(driving: &DrivingPath, eps: f64) -> Result<TracePath> {
    driving.expect(Geometry::Chordal)?;
    full_trace(driving, eps)
}

/// `β(t_i)` at every grid time. Quadratic in the number of steps.
pub fn strip_trace(driving: &DrivingPath, eps: f64) -> Result<TracePath> {
    driving.expect(Geometry::Strip)?;
    full_trace(driving, eps)
}

/// Capacity of the hull at grid time `t`: `hcap = 2t` (chordal, from
/// `φ(t,z) = z + 2t/z + …`) or `scap = t` (strip).
pub fn capacity(driving: &DrivingPath, t: f64) -> Result<f64> {
    let k = driving.step_at(t)?;
    let t = driving.time(k);
    Ok(match driving.geometry {
        Geometry::Chordal => 2.0 * t,
        Geometry::Strip => t,
    })
}

/// Probe times for [`first_trace_approach`]: after a probe at step `k` the
/// next one is `max(min_stride, ⌊growth·k⌋)` steps later, so the probes are
/// dense early and geometric late.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeSchedule {
    pub growth: f64,
    pub min_stride: usize,
}

impl ProbeSchedule {
    pub fn next(&self, k: usize) -> usize {
        k + ((self.growth * k as f64) as usize)
            .max(self.min_stride)
            .max(1)
    }
}

/// First probed grid step at which the trace comes within `tol` of a target
/// set, where `distance` measures the distance of a trace point to that set.
/// Returns the step and the trace point, or `None` if no probe up to the end
/// of the path is close enough. The final step is always probed.
pub fn first_trace_approach(
    driving: &DrivingPath,
    distance: impl Fn(Complex64) -> f64,
    tol: f64,
    eps: f64,
    schedule: ProbeSchedule,
) -> Option<(usize, Complex64)> {
    let n = driving.steps();
    let mut k = 0;
    loop {
        let z = trace_point(driving, k, eps);
        if distance(z) < tol {
            return Some((k, z));
        }
        if k == n {
            return None;
        }
        k = schedule.next(k).min(n);
    }
}

/// Outcome of following a real point under the flow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealFlow {
    /// Grid step at which the point was swallowed, if it was.
    pub swallowed_at: Option<usize>,
    /// Last gap `φ(t, x) − ξ(t)` before swallowing (or at the end).
    pub gap: f64,
}

/// Follows a real point `x ≠ ξ(0)` for up to `max_step` steps. The point is
/// swallowed when the driving value crosses it, or when its gap drops below
/// the swallowing radius after having been at least that large. Points that
/// start inside the radius are only caught by a crossing until they escape it.
pub fn track_real_point(driving: &DrivingPath, x: f64, max_step: usize) -> RealFlow {
    follow_real_point(driving, x, max_step, driving.swallow_radius())
}

/// As [`track_real_point`] with crossing as the only criterion: the first
/// step whose driving value lies beyond the image of `x`. From that step on
/// the flow grows on the far side of `x`.
pub fn real_point_crossing(driving: &DrivingPath, x: f64, max_step: usize) -> RealFlow {
    follow_real_point(driving, x, max_step, 0.0)
}

fn follow_real_point(driving: &DrivingPath, x: f64, max_step: usize, radius: f64) -> RealFlow {
    let geometry = driving.geometry;
    let dt = driving.dt;
    let xs = &driving.values;
    let side = x >= xs[0];
    let mut pos = x;
    let mut gap = x - xs[0];
    let mut armed = gap.abs() >= radius;
    for j in 1..=max_step.min(driving.steps()) {
        gap = pos - xs[j];
        if (gap >= 0.0) != side || (armed && gap.abs() < radius) {
            return RealFlow {
                swallowed_at: Some(j),
                gap,
            };
        }
        pos = xs[j] + step_real_gap(geometry, gap, dt);
        armed |= (pos - xs[j]).abs() >= radius;
    }
    RealFlow {
        swallowed_at: None,
        gap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn slit_map_examples() {
        assert_eq!(elementary_slit_map(0.0, 0.0, I).unwrap(), I);
        assert!(elementary_slit_map(0.0, 1.0, c(0.0, 2.0)).unwrap().norm() < 1e-12);
        let w = elementary_slit_map(0.0, 1.0, c(0.0, 3.0)).unwrap();
        assert!((w - c(0.0, 5f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn slit_interior_is_swallowed() {
        assert_eq!(
            elementary_slit_map(0.5, 1.0, c(0.5, 1.0)),
            Err(Error::OnSlit)
        );
        assert_eq!(
            elementary_slit_map(0.5, 1.0, c(0.5, 0.0)),
            Err(Error::OnSlit)
        );
        assert!(elementary_slit_map(0.0, -1.0, I).is_err());
    }

    #[test]
    fn slit_map_keeps_real_sides() {
        let l = elementary_slit_map(0.0, 1.0, c(-1.0, 0.0)).unwrap();
        let r = elementary_slit_map(0.0, 1.0, c(1.0, 0.0)).unwrap();
        assert!((l - c(-(5f64.sqrt()), 0.0)).norm() < 1e-12);
        assert!((r - c(5f64.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn constant_driving_reduces_to_one_slit() {
        let d = DrivingPath::constant(Geometry::Chordal, 0.0, 1e-3, 1000).unwrap();
        let w = chordal_forward_map(&d, c(0.0, 3.0), 1.0)
            .unwrap()
            .image()
            .unwrap();
        assert!((w - c(0.0, 5f64.sqrt())).norm() < 1e-9);
        let z = chordal_inverse_map(&d, c(0.0, 5f64.sqrt()), 1.0).unwrap();
        assert!((z - c(0.0, 3.0)).norm() < 1e-9);
    }

    #[test]
    fn time_zero_is_identity() {
        let d = DrivingPath::from_fn(Geometry::Chordal, 1e-2, 10, |t| t.sin()).unwrap();
        let z = c(0.3, 0.7);
        assert_eq!(
            chordal_forward_map(&d, z, 0.0).unwrap(),
            FlowPoint::Image(z)
        );
        assert_eq!(chordal_inverse_map(&d, z, 0.0).unwrap(), z);
        let s = DrivingPath::from_fn(Geometry::Strip, 1e-2, 10, |t| t.sin()).unwrap();
        assert_eq!(strip_forward_map(&s, z, 0.0).unwrap(), FlowPoint::Image(z));
        assert_eq!(strip_inverse_map(&s, z, 0.0).unwrap(), z);
    }

    #[test]
    fn off_grid_and_out_of_range_times_are_errors() {
        let d = DrivingPath::constant(Geometry::Chordal, 0.0, 0.1, 10).unwrap();
        assert!(matches!(
            chordal_forward_map(&d, I, 1.05),
            Err(Error::InvalidTime { .. })
        ));
        assert!(matches!(
            chordal_forward_map(&d, I, 1.1),
            Err(Error::InvalidTime { .. })
        ));
        assert!(matches!(
            chordal_forward_map(&d, I, -0.1),
            Err(Error::InvalidTime { .. })
        ));
        assert!(d.step_at(0.3).is_ok());
    }

    #[test]
    fn geometry_is_checked() {
        let d = DrivingPath::constant(Geometry::Strip, 0.0, 0.1, 10).unwrap();
        assert!(matches!(
            chordal_forward_map(&d, I, 0.5),
            Err(Error::GeometryMismatch { .. })
        ));
        assert!(matches!(
            chordal_trace(&d, 0.1),
            Err(Error::GeometryMismatch { .. })
        ));
    }

    #[test]
    fn invalid_paths_are_rejected() {
        assert!(DrivingPath::new(Geometry::Chordal, 2.0, 1e-3, vec![]).is_err());
        assert!(DrivingPath::new(Geometry::Chordal, 2.0, 0.0, vec![0.0]).is_err());
        assert!(DrivingPath::new(Geometry::Chordal, 2.0, 1e-3, vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn capacity_values() {
        let d = DrivingPath::constant(Geometry::Chordal, 0.0, 1e-2, 100).unwrap();
        assert!((capacity(&d, 1.0).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(capacity(&d, 0.0).unwrap(), 0.0);
        let s = DrivingPath::constant(Geometry::Strip, 0.0, 1e-2, 100).unwrap();
        assert!((capacity(&s, 1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vertical_slit_trace() {
        let dt = 1e-3;
        let d = DrivingPath::constant(Geometry::Chordal, 0.7, dt, 1000).unwrap();
        let eps = default_eps(&d);
        let tr = chordal_trace(&d, eps).unwrap();
        assert_eq!(tr.points[0], c(0.7, 0.0));
        for (t, z) in tr.times.iter().zip(&tr.points) {
            assert!((z - c(0.7, 2.0 * t.sqrt())).norm() <= 5.0 * eps);
        }
    }

    #[test]
    fn strip_boundary_lines_are_invariant() {
        let s = DrivingPath::from_fn(Geometry::Strip, 1e-3, 500, |t| (3.0 * t).sin()).unwrap();
        for x in [-2.0, -0.1, 0.4, 3.0] {
            let w = strip_forward_map(&s, c(x, PI), 0.5)
                .unwrap()
                .image()
                .unwrap();
            assert_eq!(w.im, PI);
            let z = strip_inverse_map(&s, c(x, PI), 0.5).unwrap();
            assert_eq!(z.im, PI);
        }
    }

    #[test]
    fn strip_slit_height_matches_closed_form() {
        // For constant driving the strip hull is a vertical slit of height
        // 2·arccos(exp(-t/2)).
        let s = DrivingPath::constant(Geometry::Strip, 0.0, 1e-3, 2000).unwrap();
        let tip = trace_point(&s, 2000, 1e-9);
        let expected = 2.0 * (-1.0f64).exp().acos();
        assert!(
            tip.re.abs() < 1e-6 && (tip.im - expected).abs() < 1e-4,
            "{tip}"
        );
    }

    #[test]
    fn strip_step_inverse_round_trip() {
        for z in [c(0.3, 0.5), c(-2.0, 3.0), c(0.01, 0.02), c(5.0, 1.5)] {
            let w = strip_step(z, 0.1, 1e-3);
            assert!((strip_step_inv(w, 0.1, 1e-3) - z).norm() < 1e-12, "{z}");
        }
    }

    #[test]
    fn real_point_on_slit_tracking() {
        let d = DrivingPath::constant(Geometry::Chordal, 0.0, 1e-3, 1000).unwrap();
        let r = track_real_point(&d, 1.0, 1000);
        assert_eq!(r.swallowed_at, None);
        assert!((r.gap - (1.0f64 + 4.0 * 0.999).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn curve_drops_repeats() {
        let cv = Curve::new(vec![I, I, c(1.0, 1.0)]).unwrap();
        assert_eq!(cv.len(), 2);
        assert!(Curve::new(vec![]).is_err());
    }

    #[test]
    fn self_intersection_detection() {
        let z = Curve::new(vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!(!z.is_simple());
        let s = Curve::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)]).unwrap();
        assert!(s.is_simple());
    }
}
