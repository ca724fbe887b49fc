//! Box-counting dimension of a polyline or of a point set.
//!
//! Segments are subdivided finely enough that every box they cross is hit, the
//! occupied boxes are counted at geometrically spaced scales, and the dimension
//! is the least-squares slope of `ln N(s)` against `ln(1/s)`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::loewner::Curve;
#[allow(unused_imports)]
use crate::math::Float;
use crate::{Error, Result};

/// Minimum number of curve points accepted by the estimator.
pub const MIN_POINTS: usize = 100;

/// Fitted box-counting dimension with the data behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxCountFit {
    pub estimate: f64,
    pub stderr: f64,
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Number of cells met by the polyline in the grid of `m × m` cells of side
/// `s` anchored at the lower-left corner of its bounding box.
fn count_cells(points: &[Complex64], origin: Complex64, s: f64, m: i64) -> usize {
    let key = |z: Complex64| {
        let i = (((z.re - origin.re) / s).floor() as i64).clamp(0, m - 1);
        let j = (((z.im - origin.im) / s).floor() as i64).clamp(0, m - 1);
        (i, j)
    };
    let mut keys = Vec::with_capacity(points.len());
    keys.push(key(points[0]));
    for w in points.windows(2) {
        let d = w[1] - w[0];
        let pieces = (2.0 * d.norm() / s).ceil().max(1.0) as usize;
        for i in 1..=pieces {
            keys.push(key(w[0] + d * (i as f64 / pieces as f64)));
        }
    }
    keys.sort_unstable();
    keys.dedup();
    keys.len()
}

/// Least-squares slope and its standard error.
pub fn fit_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let ssr: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - my - slope * (a - mx)).powi(2))
        .sum();
    let stderr = if n > 2.0 {
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        f64::INFINITY
    };
    (slope, stderr)
}

/// Counts cells over `n_scales` geometric scales from `top` down to `bottom`
/// and fits the slope. Scales are rounded so that each divides `diameter`;
/// repeated scales are dropped.
fn fit_scales(
    diameter: f64,
    (top, bottom): (f64, f64),
    n_scales: usize,
    mut count: impl FnMut(f64, i64) -> usize,
) -> Result<BoxCountFit> {
    if !(top > bottom && bottom > 0.0) {
        return Err(Error::TooFewScales);
    }
    // Cell sides divide the extent exactly, so the grid hugs the bounding
    // box and a filled square counts m² cells.
    let (m_lo, m_hi) = ((diameter / top).round(), (diameter / bottom).floor());
    let mut scales = Vec::with_capacity(n_scales);
    let mut counts = Vec::with_capacity(n_scales);
    for i in 0..n_scales {
        let m = (m_lo * (m_hi / m_lo).powf(i as f64 / (n_scales - 1) as f64)).round() as i64;
        let s = diameter / m as f64;
        if scales.last() == Some(&s) {
            continue;
        }
        scales.push(s);
        counts.push(count(s, m));
    }
    if scales.len() < 3 {
        return Err(Error::TooFewScales);
    }
    let x: Vec<f64> = scales.iter().map(|s| -s.ln()).collect();
    let y: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let (estimate, stderr) = fit_slope(&x, &y);
    if !estimate.is_finite() {
        return Err(Error::TooFewScales);
    }
    Ok(BoxCountFit {
        estimate,
        stderr,
        scales,
        counts,
    })
}

fn bounding_box(p: &[Complex64]) -> (Complex64, f64) {
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for z in p {
        lo_x = lo_x.min(z.re);
        hi_x = hi_x.max(z.re);
        lo_y = lo_y.min(z.im);
        hi_y = hi_y.max(z.im);
    }
    (Complex64::new(lo_x, lo_y), (hi_x - lo_x).max(hi_y - lo_y))
}

/// Box-counting dimension over `n_scales` scales from a quarter of the
/// curve's extent down to four times its median segment length.
pub fn box_counting_dimension(curve: &Curve, n_scales: usize) -> Result<BoxCountFit> {
    let p = curve.points();
    if p.len() < MIN_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_POINTS,
            found: p.len(),
        });
    }
    if n_scales < 3 {
        return Err(Error::TooFewScales);
    }
    let (origin, diameter) = bounding_box(p);
    let seg = median(p.windows(2).map(|w| (w[1] - w[0]).norm()).collect());
    fit_scales(diameter, (diameter / 4.0, 4.0 * seg), n_scales, |s, m| {
        count_cells(p, origin, s, m)
    })
}

/// Box-counting dimension of a finite point set, such as the cell centres of
/// a rasterized set, over scales from a quarter of its extent down to
/// `finest`. Unlike [`box_counting_dimension`] nothing between the points is
/// counted.
pub fn point_set_dimension(
    points: &[Complex64],
    finest: f64,
    n_scales: usize,
) -> Result<BoxCountFit> {
    if points.len() < MIN_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_POINTS,
            found: points.len(),
        });
    }
    if n_scales < 3 {
        return Err(Error::TooFewScales);
    }
    let (origin, diameter) = bounding_box(points);
    fit_scales(diameter, (diameter / 4.0, finest), n_scales, |s, m| {
        let mut keys: Vec<(i64, i64)> = points
            .iter()
            .map(|&z| {
                let i = (((z.re - origin.re) / s).floor() as i64).clamp(0, m - 1);
                let j = (((z.im - origin.im) / s).floor() as i64).clamp(0, m - 1);
                (i, j)
            })
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys.len()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_is_one_dimensional() {
        let c = Curve::new(
            (0..1000)
                .map(|i| Complex64::new(i as f64 / 999.0, 0.3))
                .collect(),
        )
        .unwrap();
        let fit = box_counting_dimension(&c, 8).unwrap();
        assert!((fit.estimate - 1.0).abs() < 0.05, "{fit:?}");
    }

    #[test]
    fn sweep_fills_the_square() {
        let n = 200;
        let mut pts = Vec::new();
        for row in 0..n {
            for i in 0..n {
                let x = if row % 2 == 0 { i } else { n - 1 - i };
                pts.push(Complex64::new(
                    x as f64 / (n - 1) as f64,
                    row as f64 / (n - 1) as f64,
                ));
            }
        }
        let fit = box_counting_dimension(&Curve::new(pts).unwrap(), 8).unwrap();
        assert!((fit.estimate - 2.0).abs() < 0.05, "{fit:?}");
    }

    #[test]
    fn filled_square_points() {
        let n = 100;
        let pts: Vec<Complex64> = (0..n * n)
            .map(|k| Complex64::new((k % n) as f64 + 0.5, (k / n) as f64 + 0.5))
            .collect();
        let fit = point_set_dimension(&pts, 2.0, 6).unwrap();
        assert!((fit.estimate - 2.0).abs() < 0.05, "{fit:?}");
        let line: Vec<Complex64> = (0..1000).map(|k| Complex64::new(k as f64, 0.0)).collect();
        let fit = point_set_dimension(&line, 2.0, 6).unwrap();
        assert!((fit.estimate - 1.0).abs() < 0.05, "{fit:?}");
    }

    #[test]
    fn short_curves_are_rejected() {
        let c = Curve::new((0..10).map(|i| Complex64::new(i as f64, 0.0)).collect()).unwrap();
        assert!(matches!(
            box_counting_dimension(&c, 8),
            Err(Error::TooFewPoints { .. })
        ));
    }
}
