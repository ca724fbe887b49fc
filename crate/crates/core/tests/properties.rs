use proptest::prelude::*;
use sle_core::dimension::{box_counting_dimension, point_set_dimension};
use sle_core::hull::{crossing_time, swallowing_time};
use sle_core::ks::{ks_one_sample, ks_two_sample};
use sle_core::loewner::{
    chordal_forward_map, chordal_inverse_map, chordal_trace, default_eps, elementary_slit_map,
    first_trace_approach, strip_forward_map, strip_trace, ProbeSchedule,
};
use sle_core::sde::{sample_chordal_driving, sample_strip_driving, ForceLocation, SleConfig};
use sle_core::seed::sample_seed;
use sle_core::{Complex64, Curve, DrivingPath, Geometry};

const PI: f64 = std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn driving(geometry: Geometry, kappa: f64, horizon: f64, seed: u64) -> DrivingPath {
    let config = SleConfig::new(geometry, kappa, horizon, 1e-3).with_seed(seed);
    match geometry {
        Geometry::Chordal => sample_chordal_driving(&config).unwrap().0,
        Geometry::Strip => sample_strip_driving(&config).unwrap().0,
    }
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 24,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn slit_map_stays_in_the_half_plane(
        xi in -5.0..5.0f64, h in 0.0..1.0f64, re in -5.0..5.0f64, im in 0.0..5.0f64,
    ) {
        let w = elementary_slit_map(xi, h, c(re, im)).unwrap();
        prop_assert!(w.im >= 0.0);
        // The slit map is the flow of dz/dt = 2/(z − ξ): (w − ξ)² = (z − ξ)² + 4h.
        let lhs = (w - xi) * (w - xi);
        let rhs = (c(re, im) - xi) * (c(re, im) - xi) + 4.0 * h;
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn sampled_paths_are_well_formed(kappa in 0.5..8.0f64, start in -2.0..2.0f64, seed: u64) {
        let config = SleConfig::new(Geometry::Chordal, kappa, 0.3, 1e-3).with_start(start).with_seed(seed);
        let (d, _) = sample_chordal_driving(&config).unwrap();
        prop_assert_eq!(d.start(), start);
        prop_assert_eq!(d.steps(), 300);
        prop_assert!(d.values().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn traces_stay_in_their_domain(kappa in 0.5..8.0f64, seed: u64) {
        let d = driving(Geometry::Chordal, kappa, 0.2, seed);
        let trace = chordal_trace(&d, default_eps(&d)).unwrap();
        prop_assert_eq!(trace.points[0].im, 0.0);
        prop_assert!(trace.points.iter().all(|z| z.im >= 0.0));

        let d = driving(Geometry::Strip, kappa, 0.2, seed);
        let trace = strip_trace(&d, default_eps(&d)).unwrap();
        prop_assert_eq!(trace.points[0].im, 0.0);
        prop_assert!(trace.points.iter().all(|z| z.im >= 0.0 && z.im <= PI));
    }

    #[test]
    fn round_trip_above_the_hull(kappa in 0.5..8.0f64, re in -3.0..3.0f64, im in 3.0..6.0f64, seed: u64) {
        let d = driving(Geometry::Chordal, kappa, 0.3, seed);
        let z = c(re, im);
        let w = chordal_forward_map(&d, z, 0.3).unwrap().image().unwrap();
        prop_assert!((chordal_inverse_map(&d, w, 0.3).unwrap() - z).norm() <= 1e-6);
        // Imaginary parts decrease under the chordal flow.
        prop_assert!(w.im < z.im);
    }

    #[test]
    fn hydrodynamic_at_infinity(kappa in 0.5..8.0f64, t in 0.05..0.5f64, seed: u64) {
        let d = driving(Geometry::Chordal, kappa, 0.5, seed);
        let t = d.time(d.step_at((t * 1e3).round() * 1e-3).unwrap());
        let z = c(0.0, 1e4);
        let w = chordal_forward_map(&d, z, t).unwrap().image().unwrap();
        prop_assert!((w - z - 2.0 * t / z).norm() <= 1e-6);
    }

    #[test]
    fn real_points_keep_their_order(kappa in 0.5..8.0f64, x in 0.2..2.0f64, gap in 0.01..1.0f64, seed: u64) {
        let d = driving(Geometry::Strip, kappa, 0.3, seed);
        let a = strip_forward_map(&d, c(x, 0.0), 0.3).unwrap().image();
        let b = strip_forward_map(&d, c(x + gap, 0.0), 0.3).unwrap().image();
        if let (Some(a), Some(b)) = (a, b) {
            prop_assert!(a.re < b.re);
            prop_assert!(b.re - a.re <= gap + 1e-9);
        }
    }

    #[test]
    fn reflection_is_a_symmetry(kappa in 0.5..8.0f64, x in 0.1..3.0f64, seed: u64) {
        let d = driving(Geometry::Chordal, kappa, 1.0, seed);
        let r = d.reflected();
        prop_assert_eq!(swallowing_time(&d, x).unwrap().time, swallowing_time(&r, -x).unwrap().time);
        let t = d.horizon();
        let z = chordal_forward_map(&d, c(x, 1.0), t).unwrap().image();
        let zr = chordal_forward_map(&r, c(-x, 1.0), t).unwrap().image();
        prop_assert_eq!(z.is_some(), zr.is_some());
        if let (Some(z), Some(zr)) = (z, zr) {
            prop_assert!((z + zr.conj()).norm() <= 1e-9 * (1.0 + z.norm()));
        }
    }

    #[test]
    fn force_points_keep_their_side(kappa in 0.5..8.0f64, p in 0.1..2.0f64, rho in -1.0..3.0f64, seed: u64) {
        let config = SleConfig::new(Geometry::Chordal, kappa, 0.5, 1e-3)
            .with_force(ForceLocation::Real(-p), rho)
            .with_seed(seed);
        let (d, f) = sample_chordal_driving(&config).unwrap();
        let end = f.swallowed[0].map_or(d.steps() + 1, |t| d.step_at(t).unwrap());
        for k in 0..end {
            prop_assert!(f.values[0][k] < d.value(k));
        }
        for t in f.swallowed.iter().chain([&f.stopped]).flatten() {
            prop_assert!(*t <= d.horizon());
        }
    }

    #[test]
    fn swallowing_reports(kappa in 4.5..8.0f64, x in 0.05..1.5f64, seed: u64) {
        let d = driving(Geometry::Chordal, kappa, 1.0, seed);
        let r = swallowing_time(&d, x).unwrap();
        let c = crossing_time(&d, x).unwrap();
        prop_assert!(r.time.is_none_or(|t| t <= d.horizon()));
        if let Some(tc) = c.time {
            prop_assert!(r.time.is_some_and(|tr| tr <= tc));
        }
    }

    #[test]
    fn probes_are_increasing_and_reach_the_end(growth in 0.0..0.5f64, stride in 0usize..50, k in 0usize..100_000) {
        let s = ProbeSchedule { growth, min_stride: stride };
        prop_assert!(s.next(k) > k);
        prop_assert!(s.next(k) - k >= stride.max(1));
    }

    #[test]
    fn dimension_is_scale_free(factor in 0.01..100.0f64, seed: u64) {
        let d = driving(Geometry::Chordal, 6.0, 0.2, seed);
        let curve = chordal_trace(&d, default_eps(&d)).unwrap().to_curve().unwrap();
        let a = box_counting_dimension(&curve, 6).unwrap();
        let b = box_counting_dimension(&curve.scaled(factor), 6).unwrap();
        prop_assert!((a.estimate - b.estimate).abs() < 0.02, "{} {}", a.estimate, b.estimate);

        let pts: Vec<Complex64> = curve.points().to_vec();
        let scaled: Vec<Complex64> = pts.iter().map(|z| z * factor).collect();
        let a = point_set_dimension(&pts, 0.01, 5).unwrap();
        let b = point_set_dimension(&scaled, 0.01 * factor, 5).unwrap();
        prop_assert!((a.estimate - b.estimate).abs() < 0.02, "{} {}", a.estimate, b.estimate);
    }

    #[test]
    fn ks_statistics_are_bounded_and_symmetric(
        a in prop::collection::vec(-10.0..10.0f64, 1..60),
        b in prop::collection::vec(-10.0..10.0f64, 1..60),
    ) {
        let ab = ks_two_sample(&a, &b).unwrap();
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert_eq!(ab, ks_two_sample(&b, &a).unwrap());
        prop_assert_eq!(ks_two_sample(&a, &a).unwrap(), 0.0);
        let one = ks_one_sample(&a, |x| ((x + 10.0) / 20.0).clamp(0.0, 1.0)).unwrap();
        prop_assert!((0.0..=1.0).contains(&one));
    }

    #[test]
    fn seeds_are_stable_and_spread(master: u64, i in 0u64..1000) {
        prop_assert_eq!(sample_seed(master, i), sample_seed(master, i));
        prop_assert_ne!(sample_seed(master, i), sample_seed(master, i + 1));
    }
}

#[test]
fn approach_finds_the_first_probe_inside() {
    let d = DrivingPath::constant(Geometry::Chordal, 0.0, 1e-3, 1000).unwrap();
    let schedule = ProbeSchedule {
        growth: 0.0,
        min_stride: 1,
    };
    // γ(t) = 2i√t comes within 0.1 of i at t = 0.2025.
    let (k, z) = first_trace_approach(
        &d,
        |z| (z - c(0.0, 1.0)).norm(),
        0.1,
        default_eps(&d),
        schedule,
    )
    .unwrap();
    assert!((k as f64 * 1e-3 - 0.2025).abs() < 0.002, "{k}");
    assert!((z - c(0.0, 0.9)).norm() < 0.01);
    assert!(first_trace_approach(
        &d,
        |z| (z - c(0.0, 5.0)).norm(),
        0.1,
        default_eps(&d),
        schedule
    )
    .is_none());
}

#[test]
fn curves_drop_repeated_points() {
    let curve = Curve::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    assert_eq!(curve.len(), 2);
}
