//! Numerical machinery for chordal and strip SLE(κ; ρ⃗) processes.
//!
//! The crate is `no_std` (it needs `alloc`) so the flow code can be reused in
//! constrained settings; enable the `libm` feature in place of `std` there.
//!
//! * [`loewner`]: forward/inverse Loewner maps and traces for a discretized
//!   driving function, in the upper half-plane and in the strip `0 < Im z < π`.
//! * [`sde`]: samplers for driving functions and force-point trajectories.
//! * [`hull`]: swallowing times, hull extent and boundary extraction.
//! * [`frontier`]: outer boundary of a hull from a rasterized trace.
//! * [`dimension`]: box-counting dimension of polylines and point sets.
//! * [`ks`]: Kolmogorov–Smirnov statistics.
//! * [`seed`]: per-sample random streams that do not depend on scheduling.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("sle-core needs either the `std` or the `libm` feature for float math");

extern crate alloc;

mod error;
mod math;

pub mod dimension;
pub mod frontier;
pub mod hull;
pub mod ks;
pub mod loewner;
pub mod sde;
pub mod seed;

pub use error::{Error, Result};
pub use loewner::{Curve, DrivingPath, FlowPoint, Geometry, TracePath};
pub use num_complex::Complex64;
