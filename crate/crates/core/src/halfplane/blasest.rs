//! Two-sided estimate of `log(1/|B(z)|)` by the sum of Poisson-type terms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfplane::blaschke::{pseudo_distance, BlaschkeProduct};

/// Bounds and exact value returned by [`log_modulus_sum`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogModulusBounds {
    pub lower: f64,
    pub upper: f64,
    pub actual: f64,
}

impl LogModulusBounds {
    pub fn holds(&self) -> bool {
        let slack = 1e-12 * (1.0 + self.actual.abs());
        self.lower <= self.actual + slack && self.actual <= self.upper + slack
    }
}

/// `sum 2 Im z Im a / |z - conj a|^2 <= log(1/|B(z)|) <= (1/gamma) sum (...)`.
///
/// Each term equals `1 - |b_a(z)|^2`, so the lower bound is `u <= -log(1 - u)` and the upper
/// bound follows from `-log(1 - u) <= u / sqrt(1 - u)` with `sqrt(1 - u) = |b_a(z)| >= gamma`.
pub fn log_modulus_sum(b: &BlaschkeProduct, z: Complex64, gamma: f64) -> Result<LogModulusBounds> {
    let mut lower = 0.0;
    let mut actual = 0.0;
    for a in b.zeros() {
        let d = pseudo_distance(*a, z);
        if d < gamma {
            return Err(Error::BlasEstHypothesis { zero: *a, value: d });
        }
        lower += 2.0 * z.im * a.im / (z - a.conj()).norm_sqr();
        actual -= d.ln();
    }
    let upper = if b.is_empty() { 0.0 } else { lower / gamma };
    Ok(LogModulusBounds { lower, upper, actual })
}
