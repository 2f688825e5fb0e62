//! The real-symmetry operator `f -> (f + f^dagger) / 2` on sampled functions.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfplane::blaschke::reflect;

/// Values of a function at a finite set of points of the closed upper half-plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    pub points: Vec<Complex64>,
    pub values: Vec<Complex64>,
}

fn key(z: Complex64) -> (u64, u64) {
    // -0.0 and 0.0 must map to the same key.
    ((z.re + 0.0).to_bits(), (z.im + 0.0).to_bits())
}

impl SampledFunction {
    pub fn new(points: Vec<Complex64>, values: Vec<Complex64>) -> Self {
        assert_eq!(points.len(), values.len());
        SampledFunction { points, values }
    }

    /// Samples `f` at `points`.
    pub fn from_fn(points: Vec<Complex64>, f: impl Fn(Complex64) -> Complex64) -> Self {
        let values = points.iter().map(|z| f(*z)).collect();
        SampledFunction { points, values }
    }

    /// Index of the reflection of every sample, or an error if some reflection is missing.
    pub fn mirror_indices(&self) -> Result<Vec<usize>> {
        let index: BTreeMap<(u64, u64), usize> = self.points.iter().enumerate().map(|(i, z)| (key(*z), i)).collect();
        self.points.iter().map(|z| index.get(&key(reflect(*z))).copied().ok_or(Error::NotReflectionClosed)).collect()
    }

    /// `(f(z) + conj f(-conj z)) / 2`. The pair value is computed once and assigned to both
    /// members, so the output is exactly symmetric.
    pub fn symmetrize(&self) -> Result<SampledFunction> {
        let mirror = self.mirror_indices()?;
        let mut values = self.values.clone();
        for (i, &j) in mirror.iter().enumerate() {
            if j < i {
                continue;
            }
            let s = (self.values[i] + self.values[j].conj()) * 0.5;
            values[i] = s;
            values[j] = s.conj();
            if i == j {
                values[i] = Complex64::new(s.re, 0.0);
            }
        }
        Ok(SampledFunction { points: self.points.clone(), values })
    }

    /// Largest `|f(z) - conj f(-conj z)|` over the samples.
    pub fn symmetry_defect(&self) -> Result<f64> {
        let mirror = self.mirror_indices()?;
        Ok(mirror.iter().enumerate().map(|(i, &j)| (self.values[i] - self.values[j].conj()).norm()).fold(0.0, f64::max))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_points() -> Vec<Complex64> {
        let mut pts = Vec::new();
        for j in -4..=4 {
            for k in 0..5 {
                pts.push(Complex64::new(j as f64 * 0.25, k as f64 * 0.3));
            }
        }
        pts
    }

    #[test]
    fn iz_is_unchanged() {
        let f = SampledFunction::from_fn(sample_points(), |z| Complex64::i() * z);
        let s = f.symmetrize().unwrap();
        for (a, b) in f.values.iter().zip(&s.values) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn identity_is_annihilated() {
        let f = SampledFunction::from_fn(sample_points(), |z| z);
        let s = f.symmetrize().unwrap();
        assert!(s.sup_norm() < 1e-15);
    }

    #[test]
    fn missing_reflection_is_an_error() {
        let f = SampledFunction::new(vec![Complex64::new(1.0, 1.0)], vec![Complex64::new(1.0, 0.0)]);
        assert_eq!(f.symmetrize(), Err(Error::NotReflectionClosed));
    }
}
