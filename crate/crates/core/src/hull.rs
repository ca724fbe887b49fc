//! Hull geometry read off a discrete Loewner flow: swallowing times, the real
//! extent `(a, b)` of the hull with its images `(c, d)`, and boundary curves
//! obtained by pulling back the interval `(c, d)` through the inverse map.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::loewner::{
    inverse_from_step, real_point_crossing, step_real_gap, track_real_point, Curve, DrivingPath,
};
#[allow(unused_imports)]
use crate::math::Float;
use crate::math::I;
use crate::sde::SwallowReport;
use crate::{Error, Result};

/// Bisection tolerance on `a` and `b`.
pub const EXTENT_TOL: f64 = 1e-3;
/// A curve end counts as reaching the boundary line within this distance.
pub const ENDPOINT_TOL: f64 = 0.05;

/// `a = inf K̄∩ℝ`, `b = sup K̄∩ℝ` and their images `c ≤ ξ(t) ≤ d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HullExtent {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub t: f64,
}

impl HullExtent {
    /// True when no real point other than the start has been swallowed.
    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }
}

/// First grid time at which `x` is swallowed by the hull.
pub fn swallowing_time(driving: &DrivingPath, x: f64) -> Result<SwallowReport> {
    if x == driving.start() {
        return Err(Error::InvalidArgument(
            "the start point is swallowed at once",
        ));
    }
    let flow = track_real_point(driving, x, driving.steps());
    Ok(SwallowReport {
        point: x,
        time: flow.swallowed_at.map(|k| driving.time(k)),
        terminal_gap: flow.gap.abs(),
    })
}

/// First grid time at which the driving value has passed the image of `x`.
/// This is when the discrete hull closes around `x`; it is at or after
/// [`swallowing_time`], which also fires once the gap is below the
/// swallowing radius.
pub fn crossing_time(driving: &DrivingPath, x: f64) -> Result<SwallowReport> {
    if x == driving.start() {
        return Err(Error::InvalidArgument(
            "the start point is swallowed at once",
        ));
    }
    let flow = real_point_crossing(driving, x, driving.steps());
    Ok(SwallowReport {
        point: x,
        time: flow.swallowed_at.map(|k| driving.time(k)),
        terminal_gap: flow.gap.abs(),
    })
}

fn swallowed_by(driving: &DrivingPath, x: f64, k: usize) -> bool {
    track_real_point(driving, x, k).swallowed_at.is_some()
}

/// Last swallowed point on one side of the start, by bisection between a
/// swallowed `inner` and an unswallowed outer point.
fn extent_side(driving: &DrivingPath, k: usize, side: f64) -> f64 {
    let x0 = driving.start();
    let mut inner = x0 + side * EXTENT_TOL;
    let mut step = 1.0;
    let mut outer = x0 + side * step;
    while swallowed_by(driving, outer, k) {
        inner = outer;
        step *= 2.0;
        outer = x0 + side * step;
        if step > 1e12 {
            return outer;
        }
    }
    while (outer - inner).abs() > EXTENT_TOL {
        let mid = 0.5 * (inner + outer);
        if swallowed_by(driving, mid, k) {
            inner = mid;
        } else {
            outer = mid;
        }
    }
    inner
}

fn real_image(driving: &DrivingPath, x: f64, k: usize) -> f64 {
    let xs = driving.values();
    let mut pos = x;
    for &xi in &xs[1..=k] {
        pos = xi + step_real_gap(driving.geometry(), pos - xi, driving.dt());
    }
    pos
}

/// Real extent of the hull at grid time `t`, located by bisection on
/// "swallowed by time t" to within [`EXTENT_TOL`]. `c` and `d` are the images
/// of `a − tol` and `b + tol`. When nothing off the start is swallowed the
/// result is `a = b = start`, `c = d = ξ(t)`.
pub fn hull_extent(driving: &DrivingPath, t: f64) -> Result<HullExtent> {
    let k = driving.step_at(t)?;
    let x0 = driving.start();
    let right = swallowed_by(driving, x0 + EXTENT_TOL, k);
    let left = swallowed_by(driving, x0 - EXTENT_TOL, k);
    if !right && !left {
        let xi = driving.value(k);
        return Ok(HullExtent {
            a: x0,
            b: x0,
            c: xi,
            d: xi,
            t,
        });
    }
    let a = if left {
        extent_side(driving, k, -1.0)
    } else {
        x0
    };
    let b = if right {
        extent_side(driving, k, 1.0)
    } else {
        x0
    };
    let c = real_image(driving, a - EXTENT_TOL, k);
    let d = real_image(driving, b + EXTENT_TOL, k);
    Ok(HullExtent { a, b, c, d, t })
}

/// Images `(c, d)` of the two outermost hull points on ℝ. Computed by
/// flowing the two sides of the start and pinning each to the driving value
/// whenever the driving value passes it, which is how those points move.
pub fn boundary_images(driving: &DrivingPath, k: usize) -> (f64, f64) {
    let geometry = driving.geometry();
    let dt = driving.dt();
    let xs = driving.values();
    // Distances of the two images from the driving value.
    let (mut l, mut r) = (0.0f64, 0.0f64);
    for j in 1..=k {
        let shift = xs[j] - xs[j - 1];
        l = step_real_gap(geometry, (l + shift).max(0.0), dt);
        r = step_real_gap(geometry, (r - shift).max(0.0), dt);
    }
    (xs[k] - l, xs[k] + r)
}

/// `f_t(x + iε)` with `ε = min(√dt, distance from x to c or d)`; the lift
/// shrinks near the ends, where `f_t` has a root-type singularity.
fn pull_back(driving: &DrivingPath, k: usize, x: f64, (c, d): (f64, f64)) -> Complex64 {
    let lift = driving.dt().sqrt().min(x - c).min(d - x).max(0.0);
    let z = inverse_from_step(driving, x + I * lift, k);
    Complex64::new(z.re, z.im.max(0.0).min(driving.geometry().height()))
}

fn interval(k: usize, driving: &DrivingPath, t: f64) -> Result<(f64, f64)> {
    if k == 0 {
        return Err(Error::DegenerateHull { t });
    }
    let (c, d) = boundary_images(driving, k);
    if !(d > c) {
        return Err(Error::DegenerateHull { t });
    }
    Ok((c, d))
}

fn sample_range(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let span = hi - lo;
    let last = (n.max(2) - 1) as f64;
    (0..n).map(move |i| {
        if i + 1 == n {
            hi
        } else {
            lo + span * i as f64 / last
        }
    })
}

/// Boundary of the hull at grid time `t`: `f_t(x + i√dt)` for `resolution`
/// uniformly spaced `x` in `(c + δ, d − δ)`, `δ = (d − c)·1e-4`. The ends
/// approximate `a(t)` and `b(t)`.
pub fn hull_boundary(driving: &DrivingPath, t: f64, resolution: usize) -> Result<Curve> {
    if resolution < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: resolution,
        });
    }
    let k = driving.step_at(t)?;
    let (c, d) = interval(k, driving, t)?;
    let delta = (d - c) * 1e-4;
    let pts =
        sample_range(c + delta, d - delta, resolution).map(|x| pull_back(driving, k, x, (c, d)));
    Curve::new(pts.collect())
}

/// The boundary split at the trace tip: left is `f_t` on `(c, ξ(t)]`, right is
/// `f_t` on `[ξ(t), d)`. Both curves contain the same tip point.
pub fn left_right_boundaries(
    driving: &DrivingPath,
    t: f64,
    resolution: usize,
) -> Result<(Curve, Curve)> {
    if resolution < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: resolution,
        });
    }
    let k = driving.step_at(t)?;
    let (c, d) = interval(k, driving, t)?;
    let delta = (d - c) * 1e-4;
    let xi = driving.value(k);
    let left: Vec<Complex64> = sample_range(c + delta, xi, resolution)
        .map(|x| pull_back(driving, k, x, (c, d)))
        .collect();
    let mut right: Vec<Complex64> = sample_range(xi, d - delta, resolution)
        .map(|x| pull_back(driving, k, x, (c, d)))
        .collect();
    right[0] = left[left.len() - 1];
    Ok((Curve::new(left)?, Curve::new(right)?))
}

/// Real parts of the first and last points of a crosscut whose ends lie on ℝ.
pub fn crosscut_endpoints(curve: &Curve) -> Result<(f64, f64)> {
    if curve.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: curve.len(),
        });
    }
    let (first, last) = (curve.first(), curve.last());
    for z in [first, last] {
        if z.im.abs() >= ENDPOINT_TOL {
            return Err(Error::EndpointOffBoundary {
                distance: z.im.abs(),
            });
        }
    }
    Ok((first.re, last.re))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loewner::Geometry;

    fn slit(t: f64, dt: f64) -> DrivingPath {
        DrivingPath::constant(Geometry::Chordal, 0.0, dt, (t / dt).round() as usize).unwrap()
    }

    #[test]
    fn slit_hull_never_swallows() {
        let d = slit(1.0, 1e-3);
        let r = swallowing_time(&d, 1.0).unwrap();
        assert_eq!(r.time, None);
        assert!((r.terminal_gap - (1.0f64 + 4.0 * 0.999).sqrt()).abs() < 1e-9);
        assert!(swallowing_time(&d, 0.0).is_err());
    }

    #[test]
    fn slit_extent_is_degenerate() {
        let e = hull_extent(&slit(1.0, 1e-3), 1.0).unwrap();
        assert_eq!((e.a, e.b, e.c, e.d), (0.0, 0.0, 0.0, 0.0));
        assert!(e.is_degenerate());
    }

    #[test]
    fn slit_boundary_passes_the_tip() {
        let dt = 1e-4;
        let d = slit(1.0, dt);
        let (c, dd) = boundary_images(&d, d.steps());
        assert!((c + 2.0).abs() < 1e-6 && (dd - 2.0).abs() < 1e-6);
        let curve = hull_boundary(&d, 1.0, 101).unwrap();
        let best = curve
            .points()
            .iter()
            .map(|z| (z - 2.0 * I).norm())
            .fold(f64::MAX, f64::min);
        assert!(best < 5.0 * dt.sqrt(), "{best}");
        assert!(curve.first().im < 0.05 && curve.last().im < 0.05);
        assert!(curve.first().re.abs() < 0.05 && curve.last().re.abs() < 0.05);
    }

    #[test]
    fn empty_hull_has_no_boundary() {
        let d = slit(1.0, 1e-3);
        assert_eq!(
            hull_boundary(&d, 0.0, 10),
            Err(Error::DegenerateHull { t: 0.0 })
        );
    }

    #[test]
    fn two_point_split() {
        let d = slit(0.5, 1e-3);
        let (l, r) = left_right_boundaries(&d, 0.5, 2).unwrap();
        assert_eq!((l.len(), r.len()), (2, 2));
        assert_eq!(l.last(), r.first());
    }

    #[test]
    fn crosscut_semicircle() {
        let pts = (1..200)
            .map(|i| Complex64::from_polar(1.0, core::f64::consts::PI * i as f64 / 200.0))
            .collect();
        let (x, y) = crosscut_endpoints(&Curve::new(pts).unwrap()).unwrap();
        assert!((x - 1.0).abs() < 1e-3 && (y + 1.0).abs() < 1e-3);
        let one = Curve::new(vec![Complex64::new(0.0, 0.0)]).unwrap();
        assert!(matches!(
            crosscut_endpoints(&one),
            Err(Error::TooFewPoints { .. })
        ));
        let high = Curve::new(vec![I, Complex64::new(1.0, 0.0)]).unwrap();
        assert!(matches!(
            crosscut_endpoints(&high),
            Err(Error::EndpointOffBoundary { .. })
        ));
    }
}
