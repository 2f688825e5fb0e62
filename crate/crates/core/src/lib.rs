//! Constructive solver for the Bezout equation `f1 g1 + f2 g2 = 1` with `g1` invertible, for
//! pairs of real-symmetric finite Blaschke products on the upper half-plane.

// `!(x > 0.0)` is used on purpose so that NaN is rejected with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carleson;
pub mod dbar;
pub mod error;
pub mod geometry;
pub mod halfplane;
pub mod io;
pub mod pipeline;
pub mod poly;
pub mod slits;
pub mod suite;
pub mod vfield;

pub use error::{Error, Result};
pub use halfplane::BlaschkeProduct;
pub use num_complex::Complex64;
