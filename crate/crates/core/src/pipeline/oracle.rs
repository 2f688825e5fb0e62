//! Polynomial Bezout certificate `f1 u1 + f2 u2 = 1`, independent of the main construction.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfplane::BlaschkeProduct;
use crate::poly::ComplexPoly;

/// Required grid residual of the certificate.
pub const ORACLE_TOLERANCE: f64 = 1e-8;

/// `u_i = c_i(z/s) D1(z) D2(z)` where `A P + B Q = 1` in the scaled variable `t = z/s`,
/// `P = N1 D2` and `Q = N2 D1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BezoutOracle {
    /// Set when one of the products is the constant 1: `u = (1, 0)` or `(0, 1)`.
    pub unit: Option<u8>,
    pub scale: f64,
    /// Coefficients of `A` and `B` in `t`.
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    zeros1: Vec<Complex64>,
    zeros2: Vec<Complex64>,
    /// Largest `|f1 u1 + f2 u2 - 1| / max(1, |f1 u1| + |f2 u2|)` over the samples.
    pub residual: f64,
    /// Largest unscaled defect `|f1 u1 + f2 u2 - 1|`.
    pub absolute_residual: f64,
    /// Largest `|f1 u1| + |f2 u2|`; the cancellation the residual is measured against.
    pub magnitude: f64,
    pub samples: usize,
    #[serde(skip)]
    exact: Option<(IntPoly, IntPoly)>,
}

/// `sum c_k t^k / den` with Gaussian-integer `c_k`: exact cofactor kept for evaluation.
#[derive(Debug, Clone, PartialEq)]
struct IntPoly {
    coeffs: Vec<Complex<BigInt>>,
    den: BigInt,
}

/// `x = m 2^e` exactly.
fn dyadic(x: f64) -> (BigInt, i32) {
    if x == 0.0 {
        return (BigInt::zero(), i32::MAX);
    }
    let (mant, exp, sign) = x.integer_decode();
    (BigInt::from(mant) * BigInt::from(sign), i32::from(exp))
}

impl IntPoly {
    fn new(p: &ExactPoly) -> Self {
        let den = p.0.iter().fold(BigInt::one(), |d, c| d.lcm(c.re.denom()).lcm(c.im.denom()));
        let scale = Rat::from_integer(den.clone());
        let coeffs = p.0.iter().map(|c| Complex::new((&c.re * &scale).to_integer(), (&c.im * &scale).to_integer())).collect();
        IntPoly { coeffs, den }
    }

    /// Exact value at the binary point `t`, rounded once to f64.
    fn eval(&self, t: Complex64) -> Complex64 {
        let Some(top) = self.coeffs.last() else {
            return Complex64::new(0.0, 0.0);
        };
        let ((mr, er), (mi, ei)) = (dyadic(t.re), dyadic(t.im));
        let e = er.min(ei);
        if e == i32::MAX {
            let c = &self.coeffs[0];
            return Complex64::new(ratio(&c.re, &self.den), ratio(&c.im, &self.den));
        }
        // t = m / 2^f with Gaussian-integer m
        let f = (-e).max(0) as usize;
        let lift = |m: BigInt, ex: i32| if ex == i32::MAX { BigInt::zero() } else { m << ((ex as i64 + f as i64) as usize) };
        let m = Complex::new(lift(mr, er), lift(mi, ei));
        let n = self.coeffs.len() - 1;
        let mut acc = top.clone();
        for (k, c) in self.coeffs.iter().enumerate().rev().skip(1) {
            let shift = f * (n - k);
            acc = &acc * &m + Complex::new(&c.re << shift, &c.im << shift);
        }
        let den = &self.den << (f * n);
        Complex64::new(ratio(&acc.re, &den), ratio(&acc.im, &den))
    }
}

fn ratio(num: &BigInt, den: &BigInt) -> f64 {
    Rat::new(num.clone(), den.clone()).to_f64().unwrap_or(f64::NAN)
}

/// `prod (t - a / s)`, or over the conjugates, in factored form.
fn root_product(zeros: &[Complex64], s: f64, conj: bool, t: Complex64) -> Complex64 {
    zeros.iter().map(|a| t - if conj { a.conj() } else { *a } / s).product()
}

impl BezoutOracle {
    fn poly(c: &[Complex64]) -> ComplexPoly {
        ComplexPoly(c.to_vec())
    }

    /// `(A(t), B(t))`, exact up to one final rounding when the exact cofactors are held.
    fn cofactors(&self, t: Complex64) -> (Complex64, Complex64) {
        match &self.exact {
            Some((a, b)) => (a.eval(t), b.eval(t)),
            None => (Self::poly(&self.a).eval(t), Self::poly(&self.b).eval(t)),
        }
    }

    /// `(f1 u1, f2 u2)` at `z`, evaluated as `(A P, B Q)` in the scaled variable. In the unit case
    /// the constant product is 1.
    pub fn terms(&self, z: Complex64) -> (Complex64, Complex64) {
        match self.unit {
            Some(1) => return (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            Some(_) => return (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
            None => {}
        }
        let t = z / self.scale;
        let p = root_product(&self.zeros1, self.scale, false, t) * root_product(&self.zeros2, self.scale, true, t);
        let q = root_product(&self.zeros2, self.scale, false, t) * root_product(&self.zeros1, self.scale, true, t);
        let (a, b) = self.cofactors(t);
        (a * p, b * q)
    }

    /// `f1(z) u1(z) + f2(z) u2(z) - 1`.
    pub fn defect(&self, z: Complex64) -> Complex64 {
        let (a, b) = self.terms(z);
        a + b - 1.0
    }

    fn record(&mut self, z: Complex64) {
        let (a, b) = self.terms(z);
        let size = a.norm() + b.norm();
        let d = (a + b - 1.0).norm();
        self.absolute_residual = self.absolute_residual.max(d);
        self.magnitude = self.magnitude.max(size);
        self.residual = self.residual.max(d / size.max(1.0));
        self.samples += 1;
    }

    /// `(u1(z), u2(z))`.
    pub fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        match self.unit {
            Some(1) => return (one, zero),
            Some(_) => return (zero, one),
            None => {}
        }
        let t = z / self.scale;
        let d1 = root_product(&self.zeros1, self.scale, true, t);
        let d2 = root_product(&self.zeros2, self.scale, true, t);
        let (a, b) = self.cofactors(t);
        (a * d1 * d2, b * d1 * d2)
    }
}

type Rat = BigRational;
type Gauss = Complex<Rat>;

/// Exact polynomial over the Gaussian rationals, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
struct ExactPoly(Vec<Gauss>);

impl ExactPoly {
    fn constant(c: Gauss) -> Self {
        ExactPoly(vec![c]).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// `prod (t - r)` for roots `a / s` read exactly from their binary values.
    fn from_roots(zeros: &[Complex64], s: f64, conj: bool) -> Self {
        let mut p = ExactPoly(vec![Gauss::one()]);
        for a in zeros {
            let r = if conj { a.conj() } else { *a } / s;
            let root = Gauss::new(exact(r.re), exact(r.im));
            p = p.mul(&ExactPoly(vec![-root, Gauss::one()]));
        }
        p
    }

    fn mul(&self, other: &ExactPoly) -> ExactPoly {
        if self.is_zero() || other.is_zero() {
            return ExactPoly(vec![]);
        }
        let mut out = vec![Gauss::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ExactPoly(out).trimmed()
    }

    fn sub(&self, other: &ExactPoly) -> ExactPoly {
        let n = self.0.len().max(other.0.len());
        let zero = Gauss::zero();
        let out = (0..n).map(|i| self.0.get(i).unwrap_or(&zero) - other.0.get(i).unwrap_or(&zero)).collect();
        ExactPoly(out).trimmed()
    }

    fn scale(&self, c: &Gauss) -> ExactPoly {
        ExactPoly(self.0.iter().map(|x| x * c).collect()).trimmed()
    }

    fn div_rem(&self, d: &ExactPoly) -> (ExactPoly, ExactPoly) {
        let lead_inv = Gauss::one() / d.0.last().expect("nonzero divisor");
        let mut rem = self.0.clone();
        if rem.len() < d.0.len() {
            return (ExactPoly(vec![]), self.clone());
        }
        let mut quot = vec![Gauss::zero(); rem.len() - d.0.len() + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d.0.len() - 1] * &lead_inv;
            for (i, di) in d.0.iter().enumerate() {
                rem[k + i] -= &c * di;
            }
            quot[k] = c;
        }
        rem.truncate(d.0.len() - 1);
        (ExactPoly(quot).trimmed(), ExactPoly(rem).trimmed())
    }

    fn to_f64(&self) -> Vec<Complex64> {
        self.0.iter().map(|c| Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN))).collect()
    }
}

fn exact(x: f64) -> Rat {
    Rat::from_float(x).expect("finite coordinate")
}

/// Extended Euclid on `N1 D2` and `N2 D1` over the Gaussian rationals, so a common zero shows up
/// as an exactly vanishing remainder. The cofactors stay exact; their values, rounded once, are
/// checked on a grid over the box that holds all zeros.
pub fn bezout_oracle(f1: &BlaschkeProduct, f2: &BlaschkeProduct) -> Result<BezoutOracle> {
    let (z1, z2) = (f1.zeros().to_vec(), f2.zeros().to_vec());
    if z1.is_empty() || z2.is_empty() {
        let unit = if z1.is_empty() { 1 } else { 2 };
        return Ok(BezoutOracle {
            unit: Some(unit),
            scale: 1.0,
            a: vec![],
            b: vec![],
            zeros1: z1,
            zeros2: z2,
            residual: 0.0,
            absolute_residual: 0.0,
            magnitude: 1.0,
            samples: 0,
            exact: None,
        });
    }
    // a power of two keeps the scaled roots exact
    let m = z1.iter().chain(&z2).map(|a| a.norm()).fold(1.0, f64::max);
    let s = m.log2().ceil().exp2();
    let p = ExactPoly::from_roots(&z1, s, false).mul(&ExactPoly::from_roots(&z2, s, true));
    let q = ExactPoly::from_roots(&z2, s, false).mul(&ExactPoly::from_roots(&z1, s, true));
    // invariant: r0 = a0 P + b0 Q, r1 = a1 P + b1 Q, with r1 monic
    let (mut r0, mut r1) = (p, q);
    let (mut a0, mut b0) = (ExactPoly::constant(Gauss::one()), ExactPoly(vec![]));
    let (mut a1, mut b1) = (ExactPoly(vec![]), ExactPoly::constant(Gauss::one()));
    while r1.degree() > 0 {
        let (quot, rem) = r0.div_rem(&r1);
        if rem.is_zero() {
            return Err(Error::CommonZero);
        }
        let k = Gauss::one() / rem.0.last().expect("nonzero remainder");
        let (a2, b2) = (a0.sub(&quot.mul(&a1)).scale(&k), b0.sub(&quot.mul(&b1)).scale(&k));
        r0 = std::mem::replace(&mut r1, rem.scale(&k));
        a0 = std::mem::replace(&mut a1, a2);
        b0 = std::mem::replace(&mut b1, b2);
    }
    if r1.is_zero() {
        return Err(Error::CommonZero);
    }
    // r1 is the constant 1 after the monic scaling
    let mut oracle = BezoutOracle {
        unit: None,
        scale: s,
        a: a1.to_f64(),
        b: b1.to_f64(),
        zeros1: z1,
        zeros2: z2,
        residual: 0.0,
        absolute_residual: 0.0,
        magnitude: 0.0,
        samples: 0,
        exact: Some((IntPoly::new(&a1), IntPoly::new(&b1))),
    };
    let (nx, ny) = (64usize, 32usize);
    let r = 2.0 * s;
    for k in 0..ny {
        for j in 0..=nx {
            let z = Complex64::new(-r + 2.0 * r * j as f64 / nx as f64, r * (k + 1) as f64 / ny as f64);
            oracle.record(z);
        }
    }
    for a in f1.zeros().iter().chain(f2.zeros()) {
        oracle.record(*a);
    }
    if !(oracle.residual < ORACLE_TOLERANCE) {
        return Err(Error::Tolerance {
            stage: "bezout-oracle",
            detail: format!("relative grid residual {:.3e} exceeds {:.0e}", oracle.residual, ORACLE_TOLERANCE),
        });
    }
    Ok(oracle)
}
