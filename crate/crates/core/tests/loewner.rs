//! Deterministic checks of the discrete Loewner flows against closed forms
//! and an independent ODE integrator.

use sle_core::loewner::{
    capacity, chordal_forward_map, chordal_inverse_map, chordal_trace, default_eps,
    strip_forward_map, strip_inverse_map, strip_trace,
};
use sle_core::sde::{sample_chordal_driving, sample_strip_driving, SleConfig};
use sle_core::{Complex64, DrivingPath, Geometry};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn steps(t: f64, dt: f64) -> usize {
    (t / dt).round() as usize
}

fn sampled(geometry: Geometry, kappa: f64, horizon: f64, dt: f64, seed: u64) -> DrivingPath {
    let config = SleConfig::new(geometry, kappa, horizon, dt).with_seed(seed);
    match geometry {
        Geometry::Chordal => sample_chordal_driving(&config).unwrap().0,
        Geometry::Strip => sample_strip_driving(&config).unwrap().0,
    }
}

/// Adaptive RK4 with step doubling for `dz/dt = f(t, z)`.
fn rk4_adaptive(
    f: impl Fn(f64, Complex64) -> Complex64,
    z0: Complex64,
    t1: f64,
    tol: f64,
) -> Complex64 {
    let step = |t: f64, z: Complex64, h: f64| {
        let k1 = f(t, z);
        let k2 = f(t + h / 2.0, z + k1 * (h / 2.0));
        let k3 = f(t + h / 2.0, z + k2 * (h / 2.0));
        let k4 = f(t + h, z + k3 * h);
        z + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
    };
    let (mut t, mut z, mut h) = (0.0f64, z0, 1e-2f64);
    while t < t1 {
        h = h.min(t1 - t);
        let big = step(t, z, h);
        let half = step(t + h / 2.0, step(t, z, h / 2.0), h / 2.0);
        let err = (big - half).norm();
        if err < tol {
            t += h;
            z = half;
            h *= 1.5;
        } else {
            h /= 2.0;
        }
    }
    z
}

#[test]
fn slit_forward_and_inverse() {
    let d = DrivingPath::constant(Geometry::Chordal, 0.0, 1e-3, 1000).unwrap();
    let w = chordal_forward_map(&d, 3.0 * I, 1.0)
        .unwrap()
        .image()
        .unwrap();
    assert!((w - 5f64.sqrt() * I).norm() < 1e-12, "{w}");
    let z = chordal_inverse_map(&d, 5f64.sqrt() * I, 1.0).unwrap();
    assert!((z - 3.0 * I).norm() < 1e-12, "{z}");
    let z = c(0.4, 0.7);
    assert_eq!(chordal_inverse_map(&d, z, 0.0).unwrap(), z);
    assert_eq!(chordal_forward_map(&d, z, 0.0).unwrap().image(), Some(z));
}

#[test]
fn forward_map_matches_ode_integration() {
    // ξ(t) = t, z = 1 + i, t = 1.
    let dt = 1e-5;
    let d = DrivingPath::from_fn(Geometry::Chordal, dt, steps(1.0, dt), |t| t).unwrap();
    let w = chordal_forward_map(&d, c(1.0, 1.0), 1.0)
        .unwrap()
        .image()
        .unwrap();
    let oracle = rk4_adaptive(|t, z| 2.0 / (z - t), c(1.0, 1.0), 1.0, 1e-12);
    assert!((w - oracle).norm() < 1e-4, "{w} vs {oracle}");
}

#[test]
fn vertical_slit_trace_and_round_trip() {
    let dt = 1e-4;
    let d = DrivingPath::constant(Geometry::Chordal, 0.0, dt, steps(1.0, dt)).unwrap();
    let trace = chordal_trace(&d, default_eps(&d)).unwrap();
    let worst = trace
        .times
        .iter()
        .zip(&trace.points)
        .map(|(t, z)| (z - 2.0 * I * t.sqrt()).norm())
        .fold(0.0, f64::max);
    assert!(worst <= 5.0 * dt.sqrt(), "worst {worst}");
    for z in [c(0.0, 2.1), c(0.5, 0.3), c(-3.0, 0.1), c(1.0, 4.0)] {
        let w = chordal_forward_map(&d, z, 1.0).unwrap().image().unwrap();
        let back = chordal_inverse_map(&d, w, 1.0).unwrap();
        assert!((back - z).norm() <= 1e-6, "{z}: {back}");
    }
}

#[test]
fn translated_slit() {
    let dt = 1e-3;
    let d = DrivingPath::constant(Geometry::Chordal, 0.7, dt, steps(1.0, dt)).unwrap();
    let trace = chordal_trace(&d, default_eps(&d)).unwrap();
    assert!((trace.last() - c(0.7, 2.0)).norm() <= 5.0 * dt.sqrt());
}

#[test]
fn sampled_round_trips() {
    let d = sampled(Geometry::Chordal, 2.0, 0.5, 1e-3, 11);
    let z = c(1.0, 2.0);
    let w = chordal_forward_map(&d, z, 0.5).unwrap().image().unwrap();
    assert!((chordal_inverse_map(&d, w, 0.5).unwrap() - z).norm() < 1e-6);

    let d = sampled(Geometry::Strip, 6.0, 0.2, 1e-3, 12);
    let z = c(0.3, 0.5);
    let w = strip_forward_map(&d, z, 0.2).unwrap().image().unwrap();
    assert!((strip_inverse_map(&d, w, 0.2).unwrap() - z).norm() < 1e-5);
}

#[test]
fn hydrodynamic_normalization() {
    for seed in 0..5 {
        let d = sampled(Geometry::Chordal, 6.0, 1.0, 1e-3, seed);
        let y = 1e4 * I;
        let w = chordal_forward_map(&d, y, 1.0).unwrap().image().unwrap();
        let err = (w - (y + 2.0 / y)).norm();
        assert!(err <= 1e-6, "seed {seed}: {err}");
    }
}

#[test]
fn strip_near_the_start_looks_chordal() {
    let dt = 1e-5;
    let n = steps(1e-3, dt);
    let strip = DrivingPath::constant(Geometry::Strip, 0.0, dt, n).unwrap();
    let chordal = DrivingPath::constant(Geometry::Chordal, 0.0, dt, n).unwrap();
    let z = 0.1 * I;
    let ws = strip_forward_map(&strip, z, 1e-3).unwrap().image().unwrap();
    let wc = chordal_forward_map(&chordal, z, 1e-3)
        .unwrap()
        .image()
        .unwrap();
    assert!((ws - wc).norm() <= 1e-3, "{ws} vs {wc}");

    let trace = strip_trace(&strip, default_eps(&strip)).unwrap();
    let expected = 2.0 * (1e-3f64).sqrt();
    assert!((trace.last().im - expected).abs() <= 0.1 * expected);
    assert_eq!(trace.points[0], c(0.0, 0.0));
}

#[test]
fn strip_lines_and_containment() {
    let d = sampled(Geometry::Strip, 6.0, 2.0, 1e-3, 3);
    for x in [-2.0, 0.5, 3.0] {
        let z = c(x, std::f64::consts::PI);
        let w = strip_forward_map(&d, z, 2.0).unwrap().image().unwrap();
        assert_eq!(w.im, std::f64::consts::PI);
        let back = strip_inverse_map(&d, c(x, std::f64::consts::PI), 2.0).unwrap();
        assert_eq!(back.im, std::f64::consts::PI);
    }
    let trace = strip_trace(&d, default_eps(&d)).unwrap();
    assert_eq!(trace.points[0], c(d.start(), 0.0));
    assert!(trace
        .points
        .iter()
        .all(|z| z.im >= 0.0 && z.im <= std::f64::consts::PI));
}

#[test]
fn capacities() {
    let d = DrivingPath::constant(Geometry::Chordal, 0.0, 1e-3, 1000).unwrap();
    assert_eq!(capacity(&d, 1.0).unwrap(), 2.0);
    assert_eq!(capacity(&d, 0.0).unwrap(), 0.0);
    let s = DrivingPath::constant(Geometry::Strip, 0.0, 1e-3, 1000).unwrap();
    assert_eq!(capacity(&s, 1.0).unwrap(), 1.0);
}

#[test]
fn sampled_low_kappa_trace_is_simple() {
    for seed in 0..3 {
        let d = sampled(Geometry::Chordal, 2.0, 1.0, 1e-3, seed);
        let curve = chordal_trace(&d, default_eps(&d))
            .unwrap()
            .to_curve()
            .unwrap();
        assert!(curve.is_simple(), "seed {seed}");
    }
}

#[test]
fn reflection_mirrors_the_trace() {
    let d = sampled(Geometry::Chordal, 4.0, 0.5, 1e-3, 5);
    let a = chordal_trace(&d, default_eps(&d)).unwrap();
    let b = chordal_trace(&d.reflected(), default_eps(&d)).unwrap();
    for (p, q) in a.points.iter().zip(&b.points) {
        assert!((q + p.conj()).norm() <= 1e-12 * (1.0 + p.norm()), "{p} {q}");
    }
}

#[test]
fn strip_real_points_escape_and_stay_close() {
    // Images of real points right of the start move faster than t, and the
    // accumulated drift of two of them differs by less than their distance.
    let t = 1.0;
    for seed in 0..10 {
        let d = sampled(Geometry::Strip, 6.0, t, 1e-3, 100 + seed);
        let (x1, x2) = (0.8, 1.5);
        let (Some(w1), Some(w2)) = (
            strip_forward_map(&d, c(x1, 0.0), t).unwrap().image(),
            strip_forward_map(&d, c(x2, 0.0), t).unwrap().image(),
        ) else {
            continue;
        };
        assert!(w1.re > t - 1e-6 && w2.re > t - 1e-6);
        let (i1, i2) = (w1.re - x1, w2.re - x2);
        assert!((i1 - i2).abs() < x2 - x1, "seed {seed}: {i1} {i2}");
        let w = strip_forward_map(&d, c(-1.2, 0.0), t).unwrap().image();
        if let Some(w) = w {
            assert!(w.re < -t + 1e-6);
        }
    }
}
