//! Dense polynomials with real or complex coefficients, lowest degree first.

use num_complex::Complex64;

/// Real polynomial `c[0] + c[1] x + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealPoly(pub Vec<f64>);

impl RealPoly {
    pub fn constant(c: f64) -> Self {
        RealPoly(vec![c])
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|c| *c != 0.0).unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &RealPoly) -> RealPoly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RealPoly(out)
    }

    pub fn sub_scaled(&self, other: &RealPoly, s: f64) -> RealPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![0.0; n];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0.get(i).copied().unwrap_or(0.0) - s * other.0.get(i).copied().unwrap_or(0.0);
        }
        RealPoly(out)
    }

    pub fn derivative(&self) -> RealPoly {
        if self.0.len() <= 1 {
            return RealPoly(vec![0.0]);
        }
        RealPoly(self.0.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect())
    }

    /// Cauchy bound on the modulus of every root.
    pub fn root_bound(&self) -> f64 {
        let d = self.degree();
        let lead = self.0[d];
        if d == 0 || lead == 0.0 {
            return 1.0;
        }
        1.0 + self.0[..d].iter().map(|c| (c / lead).abs()).fold(0.0, f64::max)
    }

    /// Real roots in `(lo, hi)` found by splitting at critical points and bisecting each
    /// monotone piece. Roots of even multiplicity are not reported.
    pub fn real_roots(&self, lo: f64, hi: f64, tol: f64) -> Vec<f64> {
        let d = self.degree();
        if d == 0 {
            return Vec::new();
        }
        let mut breaks = vec![lo];
        if d >= 2 {
            breaks.extend(self.derivative().real_roots(lo, hi, tol));
        }
        breaks.push(hi);
        let mut roots = Vec::new();
        for w in breaks.windows(2) {
            if let Some(r) = bisect(|x| self.eval(x), w[0], w[1], tol) {
                roots.push(r);
            }
        }
        roots
    }
}

/// Bisection for a sign change of `f` on `[a, b]`; `None` without a sign change.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Option<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..400 {
        let m = 0.5 * (a + b);
        if b - a <= tol * (1.0 + m.abs()) {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Complex polynomial, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoly(pub Vec<Complex64>);

impl ComplexPoly {
    pub fn one() -> Self {
        ComplexPoly(vec![Complex64::new(1.0, 0.0)])
    }

    pub fn zero() -> Self {
        ComplexPoly(vec![Complex64::new(0.0, 0.0)])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = ComplexPoly::one();
        for r in roots {
            p = p.mul(&ComplexPoly(vec![-r, Complex64::new(1.0, 0.0)]));
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|c| *c != Complex64::new(0.0, 0.0)).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.norm() == 0.0)
    }

    pub fn trim(mut self) -> Self {
        let d = self.degree();
        self.0.truncate(d + 1);
        self
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexPoly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &ComplexPoly) -> Self {
        let n = self.0.len().max(other.0.len());
        let zero = Complex64::new(0.0, 0.0);
        ComplexPoly((0..n).map(|i| self.0.get(i).copied().unwrap_or(zero) + other.0.get(i).copied().unwrap_or(zero)).collect())
    }

    pub fn sub(&self, other: &ComplexPoly) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &ComplexPoly) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPoly(out)
    }

    /// Quotient and remainder of division by `d` (which must be nonzero).
    pub fn div_rem(&self, d: &ComplexPoly) -> (ComplexPoly, ComplexPoly) {
        let d = d.clone().trim();
        let dd = d.degree();
        let lead = d.0[dd];
        let mut rem = self.clone().trim().0;
        if rem.len() <= dd {
            return (ComplexPoly::zero(), ComplexPoly(rem));
        }
        let mut quot = vec![Complex64::new(0.0, 0.0); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd] / lead;
            quot[k] = c;
            for (i, di) in d.0.iter().enumerate() {
                rem[k + i] -= c * di;
            }
            rem[k + dd] = Complex64::new(0.0, 0.0);
        }
        rem.truncate(dd.max(1));
        (ComplexPoly(quot), ComplexPoly(rem))
    }

    pub fn max_coeff(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_roots_of_cubic() {
        // (x-1)(x-2)(x-5)
        let p = RealPoly(vec![-10.0, 17.0, -8.0, 1.0]);
        let r = p.real_roots(0.0, 10.0, 1e-14);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([1.0, 2.0, 5.0]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn division_round_trip() {
        let a = ComplexPoly::from_roots(&[Complex64::new(1.0, 2.0), Complex64::new(-0.5, 1.0), Complex64::new(0.0, 3.0)]);
        let b = ComplexPoly::from_roots(&[Complex64::new(2.0, 1.0)]);
        let (q, r) = a.div_rem(&b);
        let back = q.mul(&b).add(&r);
        for (x, y) in back.0.iter().zip(&a.0) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}
