//! Finite Blaschke products on the upper half-plane.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reflection in the imaginary axis, `a -> -conj(a)`.
#[inline]
pub fn reflect(a: Complex64) -> Complex64 {
    // Adding 0.0 turns -0.0 into 0.0 so axis points are their own reflection bitwise.
    Complex64::new(-a.re + 0.0, a.im)
}

/// Elementary factor `b_a(z) = (z - a) / (z - conj a)`.
#[inline]
pub fn factor(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (z - a.conj())
}

/// Pseudo-hyperbolic distance `|b_a(z)|`.
#[inline]
pub fn pseudo_distance(a: Complex64, z: Complex64) -> f64 {
    (z - a).norm() / (z - a.conj()).norm()
}

/// A finite Blaschke product with simple zeros in the open upper half-plane.
///
/// Zeros are stored sorted by `(re, im)` so equal sets compare equal. The empty product is the
/// constant 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    /// The constant function 1.
    pub fn one() -> Self {
        BlaschkeProduct { zeros: Vec::new() }
    }

    /// Builds a real-symmetric product; every zero's reflection must be present.
    pub fn new(zeros: Vec<Complex64>) -> Result<Self> {
        let b = Self::general(zeros)?;
        if let Some(a) = b.missing_partner() {
            return Err(Error::NotSymmetric(a));
        }
        Ok(b)
    }

    /// Builds a product without the symmetry requirement.
    pub fn general(mut zeros: Vec<Complex64>) -> Result<Self> {
        for a in zeros.iter_mut() {
            a.re += 0.0;
            if !(a.im > 0.0) || !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::NotUpperHalfPlane(*a));
            }
        }
        sort_points(&mut zeros);
        for w in zeros.windows(2) {
            if w[0] == w[1] {
                return Err(Error::RepeatedZero(w[0]));
            }
        }
        Ok(BlaschkeProduct { zeros })
    }

    /// Adds the missing reflections of off-axis zeros. Returns the product and the added points.
    pub fn symmetric_completion(zeros: Vec<Complex64>) -> Result<(Self, Vec<Complex64>)> {
        let b = Self::general(zeros)?;
        let mut added = Vec::new();
        let mut all = b.zeros.clone();
        for a in &b.zeros {
            let r = reflect(*a);
            if !b.contains(r) && !added.contains(&r) {
                added.push(r);
                all.push(r);
            }
        }
        sort_points(&mut added);
        Ok((Self::general(all)?, added))
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn contains(&self, a: Complex64) -> bool {
        self.zeros.binary_search_by(|p| cmp_points(p, &a)).is_ok()
    }

    fn missing_partner(&self) -> Option<Complex64> {
        self.zeros.iter().copied().find(|a| !self.contains(reflect(*a)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.missing_partner().is_none()
    }

    /// Zeros on the imaginary axis, sorted by height.
    pub fn axis_zeros(&self) -> Vec<f64> {
        let mut ys: Vec<f64> = self.zeros.iter().filter(|a| a.re == 0.0).map(|a| a.im).collect();
        ys.sort_by(f64::total_cmp);
        ys
    }

    /// Off-axis zeros with positive real part.
    pub fn right_zeros(&self) -> Vec<Complex64> {
        self.zeros.iter().copied().filter(|a| a.re > 0.0).collect()
    }

    /// Product restricted to the given zeros.
    pub fn sub_product(&self, keep: impl Fn(Complex64) -> bool) -> BlaschkeProduct {
        BlaschkeProduct { zeros: self.zeros.iter().copied().filter(|a| keep(*a)).collect() }
    }

    /// Value at `z`. Finite for every `z` with `Im z >= 0`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.zeros.iter().fold(Complex64::new(1.0, 0.0), |acc, a| acc * factor(*a, z))
    }

    /// `log |B(z)|`, summed factor by factor.
    pub fn log_abs(&self, z: Complex64) -> f64 {
        self.zeros.iter().map(|a| pseudo_distance(*a, z).ln()).sum()
    }

    /// Largest modulus of a zero; zero for the empty product.
    pub fn max_modulus(&self) -> f64 {
        self.zeros.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Image of the zero set under `a -> -conj(a)`.
    pub fn reflected(&self) -> BlaschkeProduct {
        let mut zeros: Vec<Complex64> = self.zeros.iter().map(|a| reflect(*a)).collect();
        sort_points(&mut zeros);
        BlaschkeProduct { zeros }
    }
}

pub(crate) fn cmp_points(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

pub(crate) fn sort_points(v: &mut [Complex64]) {
    v.sort_by(cmp_points);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn value_at_own_zero_is_zero() {
        let b = BlaschkeProduct::new(vec![c(0.0, 1.0)]).unwrap();
        assert_eq!(b.eval(c(0.0, 1.0)), c(0.0, 0.0));
    }

    #[test]
    fn unimodular_on_real_line() {
        let b = BlaschkeProduct::new(vec![c(0.0, 1.0)]).unwrap();
        let v = b.eval(c(3.0, 0.0));
        let expected = c(3.0, -1.0) / c(3.0, 1.0);
        assert!((v - expected).norm() < 1e-15);
        assert!((v.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_pair_real_on_axis() {
        let b = BlaschkeProduct::new(vec![c(1.0, 1.0), c(-1.0, 1.0)]).unwrap();
        let z = c(0.0, 2.0);
        // direct arithmetic: (2i-1-i)(2i+1-i) / ((2i-1+i)(2i+1+i)) = (i-1)(i+1)/((3i-1)(3i+1))
        let num = (c(-1.0, 1.0)) * (c(1.0, 1.0));
        let den = (c(-1.0, 3.0)) * (c(1.0, 3.0));
        let oracle = num / den;
        // (i^2 - 1)/((3i)^2 - 1) = -2 / -10 = 0.2
        assert!((oracle - c(0.2, 0.0)).norm() < 1e-15);
        let v = b.eval(z);
        assert!((v - oracle).norm() < 1e-15);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn empty_product_is_one() {
        assert_eq!(BlaschkeProduct::one().eval(c(0.3, 0.7)), c(1.0, 0.0));
    }

    #[test]
    fn rejects_asymmetric_and_repeated() {
        assert!(matches!(BlaschkeProduct::new(vec![c(1.0, 1.0)]), Err(Error::NotSymmetric(_))));
        assert!(matches!(BlaschkeProduct::general(vec![c(0.0, 1.0), c(0.0, 1.0)]), Err(Error::RepeatedZero(_))));
        assert!(matches!(BlaschkeProduct::general(vec![c(0.0, -1.0)]), Err(Error::NotUpperHalfPlane(_))));
    }

    #[test]
    fn completion_reports_added_partners() {
        let (b, added) = BlaschkeProduct::symmetric_completion(vec![c(1.0, 2.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(added, vec![c(-1.0, 2.0)]);
        assert!(b.is_symmetric());
        assert_eq!(b.degree(), 3);
    }
}
