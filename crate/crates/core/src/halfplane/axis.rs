//! Sublevel sets of `|f2|` on the imaginary axis and the sign condition for `f1` there.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfplane::blaschke::BlaschkeProduct;
use crate::poly::{bisect, RealPoly};

const ROOT_TOL: f64 = 1e-10;

/// Disjoint open intervals `(y_lo, y_hi)` of the positive imaginary axis, sorted by height.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AxisIntervalSet {
    pub intervals: Vec<(f64, f64)>,
}

impl AxisIntervalSet {
    pub fn contains(&self, y: f64) -> bool {
        self.intervals.iter().any(|(lo, hi)| *lo < y && y < *hi)
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Index of the gap containing `y`: gap 0 lies below the first interval, gap `k` lies
    /// between intervals `k-1` and `k`, gap `len()` lies above the last one.
    pub fn gap_index(&self, y: f64) -> usize {
        self.intervals.iter().filter(|(_, hi)| *hi <= y).count()
    }
}

/// Value of `f` at `iy`; real for symmetric `f`.
fn axis_value(f: &BlaschkeProduct, y: f64) -> f64 {
    f.eval(Complex64::new(0.0, y)).re
}

/// `{y > 0 : |f(iy)| < t}` as a finite union of open intervals.
///
/// `|f(iy)|^2 = N(y) / D(y)` with real polynomials; the crossings of level `t` are isolated on
/// `N - t^2 D` and polished by bisection on `|f(iy)| - t` to 1e-10.
pub fn axis_sublevel_set(f: &BlaschkeProduct, t: f64) -> AxisIntervalSet {
    if f.is_empty() {
        return AxisIntervalSet::default();
    }
    let mut num = RealPoly::constant(1.0);
    let mut den = RealPoly::constant(1.0);
    for a in f.zeros() {
        let (al, be) = (a.re, a.im);
        // |iy - a|^2 = al^2 + (y - be)^2 and |iy - conj a|^2 = al^2 + (y + be)^2
        num = num.mul(&RealPoly(vec![al * al + be * be, -2.0 * be, 1.0]));
        den = den.mul(&RealPoly(vec![al * al + be * be, 2.0 * be, 1.0]));
    }
    let p = num.sub_scaled(&den, t * t);
    let hi = p.root_bound().max(f.max_modulus() * 4.0 + 1.0);
    let g = |y: f64| f.eval(Complex64::new(0.0, y)).norm() - t;

    let mut crit = vec![0.0];
    crit.extend(p.derivative().real_roots(0.0, hi, 1e-14));
    crit.push(hi);
    // Axis zeros of f are touching points of |f| and always lie in the sublevel set.
    crit.extend(f.axis_zeros());
    crit.sort_by(f64::total_cmp);
    crit.dedup();

    let mut roots = Vec::new();
    for w in crit.windows(2) {
        if let Some(r) = bisect(g, w[0], w[1], ROOT_TOL) {
            if r > 0.0 && g(r - 1e-9 * (1.0 + r)).signum() != g(r + 1e-9 * (1.0 + r)).signum() {
                roots.push(r);
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + a.abs()));

    let mut breaks = vec![0.0];
    breaks.extend(&roots);
    let mut intervals = Vec::new();
    for (i, lo) in breaks.iter().enumerate() {
        let hi = breaks.get(i + 1).copied();
        let mid = match hi {
            Some(h) => 0.5 * (lo + h),
            None => 2.0 * lo + 1.0,
        };
        if g(mid) < 0.0 {
            intervals.push((*lo, hi.unwrap_or(f64::INFINITY)));
        }
    }
    AxisIntervalSet { intervals }
}

/// Two axis points where `f1` takes opposite signs inside the sublevel set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignViolation {
    pub y_low: f64,
    pub value_low: f64,
    pub y_high: f64,
    pub value_high: f64,
}

/// Outcome of [`axis_sign_condition`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SignOutcome {
    Holds { intervals: AxisIntervalSet, sign: i8, witnesses: Vec<(f64, f64)> },
    Violated { intervals: AxisIntervalSet, violation: SignViolation },
}

impl SignOutcome {
    pub fn intervals(&self) -> &AxisIntervalSet {
        match self {
            SignOutcome::Holds { intervals, .. } | SignOutcome::Violated { intervals, .. } => intervals,
        }
    }
}

/// Checks that `f1` keeps one sign on `{iy : |f2(iy)| < threshold}`.
///
/// Within a sublevel interval `f1` can only change sign at one of its own axis zeros, so the
/// check is exact: an axis zero of `f1` inside an interval is a violation, otherwise the sign at
/// a witness decides. An empty set holds with sign `+1`.
pub fn axis_sign_condition(f1: &BlaschkeProduct, f2: &BlaschkeProduct, threshold: f64) -> Result<SignOutcome> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::Degenerate(format!("threshold {threshold} is not in (0, 1)")));
    }
    let intervals = axis_sublevel_set(f2, threshold);
    let f1_axis = f1.axis_zeros();
    let mut witnesses: Vec<(f64, f64)> = Vec::new();
    for &(lo, hi) in &intervals.intervals {
        let hi_f = if hi.is_finite() { hi } else { 2.0 * lo + 2.0 };
        if let Some(&c) = f1_axis.iter().find(|c| lo < **c && **c < hi) {
            let below = 0.5 * (lo + c);
            let above = 0.5 * (c + hi_f);
            return Ok(SignOutcome::Violated {
                violation: SignViolation {
                    y_low: below,
                    value_low: axis_value(f1, below),
                    y_high: above,
                    value_high: axis_value(f1, above),
                },
                intervals,
            });
        }
        let mid = 0.5 * (lo + hi_f);
        witnesses.push((mid, axis_value(f1, mid)));
        for c in f2.axis_zeros() {
            if lo < c && c < hi {
                witnesses.push((c, axis_value(f1, c)));
            }
        }
    }
    for (y, v) in &witnesses {
        if *v == 0.0 {
            return Err(Error::Degenerate(format!("f1 vanishes at the witness y = {y}")));
        }
    }
    let first_neg = witnesses.iter().find(|w| w.1 < 0.0);
    let first_pos = witnesses.iter().find(|w| w.1 > 0.0);
    if let (Some(n), Some(p)) = (first_neg, first_pos) {
        let (low, high) = if n.0 < p.0 { (n, p) } else { (p, n) };
        return Ok(SignOutcome::Violated {
            violation: SignViolation { y_low: low.0, value_low: low.1, y_high: high.0, value_high: high.1 },
            intervals,
        });
    }
    let sign = if first_neg.is_some() { -1 } else { 1 };
    Ok(SignOutcome::Holds { intervals, sign, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axis(ys: &[f64]) -> BlaschkeProduct {
        BlaschkeProduct::new(ys.iter().map(|y| Complex64::new(0.0, *y)).collect()).unwrap()
    }

    #[test]
    fn negative_sign_detected() {
        // f1(2i) = (1/3)(-1/5) = -1/15
        let f1 = axis(&[1.0, 3.0]);
        let direct = axis_value(&f1, 2.0);
        assert!((direct + 1.0 / 15.0).abs() < 1e-15);
        match axis_sign_condition(&f1, &axis(&[2.0]), 0.1).unwrap() {
            SignOutcome::Holds { intervals, sign, .. } => {
                assert_eq!(sign, -1);
                assert_eq!(intervals.len(), 1);
                let (lo, hi) = intervals.intervals[0];
                // |y-2|/(y+2) = 0.1 at y = 1.8/1.1 and y = 2.2/0.9
                assert!((lo - 1.8 / 1.1).abs() < 1e-9);
                assert!((hi - 2.2 / 0.9).abs() < 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn separated_zeros_violate() {
        let out = axis_sign_condition(&axis(&[2.0]), &axis(&[1.0, 4.0]), 0.05).unwrap();
        match out {
            SignOutcome::Violated { violation, .. } => {
                assert!(violation.value_low < 0.0 && violation.value_high > 0.0);
                assert!((violation.y_low - 1.0).abs() < 0.2);
                assert!((violation.y_high - 4.0).abs() < 0.5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_sublevel_set_holds_with_plus() {
        let f2 = BlaschkeProduct::new(vec![Complex64::new(1.0, 1.0), Complex64::new(-1.0, 1.0)]).unwrap();
        // min over the axis of |f2(iy)| = min (1 + (y-1)^2)/(1 + (y+1)^2) is about 0.17
        match axis_sign_condition(&axis(&[1.0]), &f2, 0.01).unwrap() {
            SignOutcome::Holds { intervals, sign, .. } => {
                assert!(intervals.is_empty());
                assert_eq!(sign, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn off_axis_pair_sublevel_matches_scan() {
        let f2 = BlaschkeProduct::new(vec![Complex64::new(0.05, 1.0), Complex64::new(-0.05, 1.0)]).unwrap();
        let set = axis_sublevel_set(&f2, 0.1);
        for i in 1..20_000 {
            let y = i as f64 * 0.0005;
            let inside = f2.eval(Complex64::new(0.0, y)).norm() < 0.1;
            let near_edge = set.intervals.iter().any(|(lo, hi)| (y - lo).abs() < 1e-8 || (y - hi).abs() < 1e-8);
            if !near_edge {
                assert_eq!(inside, set.contains(y), "y = {y}");
            }
        }
    }
}
