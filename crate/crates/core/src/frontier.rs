//! Outer boundary of a hull found by rasterizing the trace.
//!
//! The discrete hull is a tree of slits that never encloses area, so the
//! region the continuum hull would fill is recovered on a grid: the trace and
//! ℝ are drawn into cells, the cells reachable from infinity are flood-filled,
//! and the frontier is the set of drawn cells next to that exterior.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::loewner::Curve;
#[allow(unused_imports)]
use crate::math::Float;
use crate::{Error, Result};

/// Largest grid accepted, in cells.
pub const MAX_CELLS: usize = 1 << 26;

/// Centres of the frontier cells of the hull generated by `trace`, on a grid
/// of side `cell`. Cells on ℝ itself are not part of the frontier.
pub fn hull_frontier(trace: &Curve, cell: f64) -> Result<Vec<Complex64>> {
    if !(cell > 0.0 && cell.is_finite()) {
        return Err(Error::InvalidArgument("cell size must be positive"));
    }
    let p = trace.points();
    let (mut lo, mut hi, mut top) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for z in p {
        lo = lo.min(z.re);
        hi = hi.max(z.re);
        top = top.max(z.im);
    }
    if !(lo.is_finite() && hi.is_finite() && top.is_finite()) {
        return Err(Error::InvalidArgument("trace is not finite"));
    }
    // Row 0 is ℝ; a free margin of one cell surrounds everything else.
    let x0 = lo - cell;
    let w = ((hi - lo) / cell) as usize + 3;
    let h = (top / cell) as usize + 3;
    if w.saturating_mul(h) > MAX_CELLS {
        return Err(Error::InvalidArgument("raster too large for the cell size"));
    }
    let index = |z: Complex64| {
        let i = ((z.re - x0) / cell) as usize;
        let j = (z.im.max(0.0) / cell) as usize + 1;
        j * w + i.min(w - 2)
    };
    let mut drawn = vec![false; w * h];
    drawn[..w].fill(true);
    drawn[index(p[0])] = true;
    for s in p.windows(2) {
        let d = s[1] - s[0];
        let pieces = (2.0 * d.norm() / cell).ceil().max(1.0) as usize;
        for k in 1..=pieces {
            drawn[index(s[0] + d * (k as f64 / pieces as f64))] = true;
        }
    }
    let mut outside = vec![false; w * h];
    let mut queue = VecDeque::new();
    for k in (w..w * h).filter(|&k| k / w == h - 1 || k % w == 0 || k % w == w - 1) {
        if !drawn[k] && !outside[k] {
            outside[k] = true;
            queue.push_back(k);
        }
    }
    while let Some(k) = queue.pop_front() {
        let (i, j) = (k % w, k / w);
        let mut visit = |n: usize| {
            if !drawn[n] && !outside[n] {
                outside[n] = true;
                queue.push_back(n);
            }
        };
        if i > 0 {
            visit(k - 1);
        }
        if i + 1 < w {
            visit(k + 1);
        }
        if j > 1 {
            visit(k - w);
        }
        if j + 1 < h {
            visit(k + w);
        }
    }
    let touches = |k: usize| {
        let (i, j) = (k % w, k / w);
        (i > 0 && outside[k - 1])
            || (i + 1 < w && outside[k + 1])
            || outside[k - w]
            || (j + 1 < h && outside[k + w])
    };
    Ok((w..w * h)
        .filter(|&k| drawn[k] && touches(k))
        .map(|k| {
            Complex64::new(
                x0 + ((k % w) as f64 + 0.5) * cell,
                ((k / w) as f64 - 0.5) * cell,
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(pts: &[(f64, f64)]) -> Curve {
        Curve::new(pts.iter().map(|&(x, y)| Complex64::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn arch_hides_its_inside() {
        // A square arch over [0, 1]; the inner cells are enclosed with ℝ.
        let c = curve(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]);
        let f = hull_frontier(&c, 0.05).unwrap();
        assert!(f.iter().all(|z| z.im > 0.0 && z.im < 1.1));
        assert!(!f.iter().any(|z| z.re > 0.1 && z.re < 0.9 && z.im < 0.9));
        assert!(f.iter().any(|z| (z.re - 0.5).abs() < 0.05 && z.im > 0.95));
    }

    #[test]
    fn vertical_slit_is_its_own_frontier() {
        let c = curve(&[(0.0, 0.0), (0.0, 1.0)]);
        let f = hull_frontier(&c, 0.1).unwrap();
        assert_eq!(f.len(), 11);
        assert!(f.iter().all(|z| (z.re - 0.05).abs() < 1e-12));
    }

    #[test]
    fn bad_cells_are_rejected() {
        let c = curve(&[(0.0, 0.0), (0.0, 1.0)]);
        assert!(hull_frontier(&c, 0.0).is_err());
        assert!(hull_frontier(&c, 1e-9).is_err());
    }
}
