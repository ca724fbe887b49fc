//! Float helpers shared by the flow code. `Float` is re-exported so modules can
//! call `sqrt`, `ln`, ... on `f64` without `std`.

#[allow(unused_imports)]
pub(crate) use num_traits::Float;

use num_complex::Complex64;

pub(crate) const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// coth(x/2) for real x.
#[inline]
pub(crate) fn coth2(x: f64) -> f64 {
    1.0 / Float::tanh(0.5 * x)
}

/// tanh(x/2) for real x.
#[inline]
pub(crate) fn tanh2(x: f64) -> f64 {
    Float::tanh(0.5 * x)
}

/// Picks between `r` and `-r` the root with nonnegative imaginary part. When
/// the root is real the sign follows `side` (nonnegative side wins ties).
#[inline]
pub(crate) fn upper_root(r: Complex64, side: f64) -> Complex64 {
    if r.im > 0.0 {
        r
    } else if r.im < 0.0 {
        -r
    } else if (r.re >= 0.0) == (side >= 0.0) {
        r
    } else {
        -r
    }
}

/// Principal square root. Same branch as `Complex64::sqrt` (cut along the
/// negative real axis, `Re ≥ 0`) without the polar round trip.
#[inline]
pub(crate) fn csqrt(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    if y == 0.0 {
        return if x >= 0.0 {
            Complex64::new(x.sqrt(), y)
        } else {
            Complex64::new(0.0, (-x).sqrt().copysign(y))
        };
    }
    let m = (x * x + y * y).sqrt();
    let t = (0.5 * (m + x.abs())).sqrt();
    if x >= 0.0 {
        Complex64::new(t, 0.5 * y / t)
    } else {
        Complex64::new(0.5 * y.abs() / t, t.copysign(y))
    }
}
