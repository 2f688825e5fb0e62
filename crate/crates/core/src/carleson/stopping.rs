//! Dyadic stopping-time selection of heavy intervals inside a Carleson square.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::carleson::intensity::{carleson_intensity, PointMassMeasure};
use crate::error::{Error, Result};
use crate::geometry::Interval;
use crate::halfplane::blaschke::BlaschkeProduct;

/// Sampling density of the pointwise check, per side of the square.
pub const POINTWISE_SAMPLES: usize = 64;

/// Largest `|B|` over a sample of the top half `{Re z in I, |I|/2 <= Im z <= |I|}` of `Q(I)`.
pub fn top_half_witness(b: &BlaschkeProduct, interval: Interval) -> (f64, Complex64) {
    let l = interval.len();
    let mut best = (-1.0, Complex64::new(interval.center(), 0.75 * l));
    let (nx, ny) = (16, 8);
    for k in 0..=ny {
        for j in 0..=nx {
            let z = Complex64::new(interval.lo + l * j as f64 / nx as f64, 0.5 * l + 0.5 * l * k as f64 / ny as f64);
            let v = b.eval(z).norm();
            if v > best.0 {
                best = (v, z);
            }
        }
    }
    best
}

/// `sum Im a` over zeros in `Q(3J)`.
pub fn triple_square_mass(b: &BlaschkeProduct, j: Interval) -> f64 {
    let t = j.triple();
    b.zeros().iter().filter(|a| t.contains(a.re) && a.im <= t.len()).map(|a| a.im).sum()
}

/// Selected intervals with the re-verified properties of the selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoppingResult {
    pub base: Interval,
    pub intervals: Vec<Interval>,
    pub mass_threshold: f64,
    pub eta: f64,
    pub witness: Complex64,
    pub witness_value: f64,
    /// `sum |I_k|` and its bound `20 log(1/eta) |I| / M`.
    pub total_length: f64,
    pub length_bound: f64,
    /// Smallest `mass(Q(3 I_k)) / |I_k|`; at least `M`.
    pub min_mass_ratio: f64,
    /// Intensity of the residual measure and its bound `5 M`.
    pub residual_intensity: f64,
    pub residual_bound: f64,
    /// Sampled `max sum Im z Im a / |z - conj a|^2` off the selected squares, divided by
    /// `M + log(1/eta)`.
    pub pointwise_constant: f64,
}

impl StoppingResult {
    pub fn length_ok(&self) -> bool {
        self.total_length <= self.length_bound * (1.0 + 1e-12)
    }

    pub fn mass_ok(&self) -> bool {
        self.intervals.is_empty() || self.min_mass_ratio >= self.mass_threshold * (1.0 - 1e-12)
    }

    pub fn residual_ok(&self) -> bool {
        self.residual_intensity <= self.residual_bound * (1.0 + 1e-12)
    }
}

/// Maximal dyadic subintervals `J` of `base` with `sum_{a in Q(3J)} Im a >= M |J|`.
///
/// The search descends only into intervals whose triple square still holds zeros, so it stops
/// once `3|J|` drops below the lowest zero. Properties (i), (ii) and (iv) are checked before
/// returning; a failure is reported as a tolerance error naming the property.
pub fn stopping_intervals(b: &BlaschkeProduct, base: Interval, mass_threshold: f64, eta: f64) -> Result<StoppingResult> {
    if !(mass_threshold > 0.0) || !(eta > 0.0 && eta < 1.0) {
        return Err(Error::Degenerate(format!("M = {mass_threshold}, eta = {eta}")));
    }
    let (witness_value, witness) = top_half_witness(b, base);
    if witness_value < eta {
        return Err(Error::NoTopHalfWitness { eta, best: witness_value });
    }
    let mut selected = Vec::new();
    let mut stack = vec![base];
    while let Some(j) = stack.pop() {
        let mass = triple_square_mass(b, j);
        if mass >= mass_threshold * j.len() {
            selected.push(j);
        } else if mass > 0.0 {
            let (l, r) = j.halves();
            stack.push(r);
            stack.push(l);
        }
    }
    crate::geometry::sort_intervals(&mut selected);
    let result = verify_selection(b, base, selected, mass_threshold, eta, witness, witness_value);
    if !result.length_ok() {
        return Err(Error::Tolerance {
            stage: "stopping",
            detail: format!("sum |I_k| = {} exceeds {}", result.total_length, result.length_bound),
        });
    }
    if !result.mass_ok() {
        return Err(Error::Tolerance {
            stage: "stopping",
            detail: format!("mass ratio {} below M = {}", result.min_mass_ratio, mass_threshold),
        });
    }
    if !result.residual_ok() {
        return Err(Error::Tolerance {
            stage: "stopping",
            detail: format!("residual intensity {} exceeds 5M = {}", result.residual_intensity, result.residual_bound),
        });
    }
    Ok(result)
}

/// Recomputes every checked property of a selection from scratch.
pub fn verify_selection(
    b: &BlaschkeProduct,
    base: Interval,
    intervals: Vec<Interval>,
    mass_threshold: f64,
    eta: f64,
    witness: Complex64,
    witness_value: f64,
) -> StoppingResult {
    let total_length: f64 = intervals.iter().map(Interval::len).sum();
    let length_bound = 20.0 * (1.0 / eta).ln() * base.len() / mass_threshold;
    let min_mass_ratio = intervals.iter().map(|j| triple_square_mass(b, *j) / j.len()).fold(f64::INFINITY, f64::min);
    let in_selected = |z: Complex64| intervals.iter().any(|j| j.square_contains(z));
    let residual: Vec<Complex64> = b.zeros().iter().copied().filter(|a| base.square_contains(*a) && !in_selected(*a)).collect();
    let residual_intensity = carleson_intensity(&PointMassMeasure::from_zeros(&residual)).value;

    let n = POINTWISE_SAMPLES;
    let l = base.len();
    let mut pointwise: f64 = 0.0;
    for k in 0..n {
        for j in 0..n {
            let z = Complex64::new(base.lo + l * (j as f64 + 0.5) / n as f64, l * (k as f64 + 0.5) / n as f64);
            if in_selected(z) {
                continue;
            }
            let s: f64 = b.zeros().iter().map(|a| z.im * a.im / (z - a.conj()).norm_sqr()).sum();
            pointwise = pointwise.max(s);
        }
    }
    StoppingResult {
        base,
        intervals,
        mass_threshold,
        eta,
        witness,
        witness_value,
        total_length,
        length_bound,
        min_mass_ratio,
        residual_intensity,
        residual_bound: 5.0 * mass_threshold,
        pointwise_constant: pointwise / (mass_threshold + (1.0 / eta).ln()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stacked_zeros() -> BlaschkeProduct {
        // 20 mirror pairs at heights 0.5..0.69 close to the axis; total Im mass 11.9.
        let mut z = Vec::new();
        for k in 0..20 {
            let a = Complex64::new(0.01 * (k + 1) as f64, 0.5 + 0.01 * k as f64);
            z.push(a);
            z.push(Complex64::new(-a.re, a.im));
        }
        BlaschkeProduct::new(z).unwrap()
    }

    /// All dyadic subintervals of `base` down to `depth` levels, for the brute-force oracle.
    fn all_dyadic(base: Interval, depth: usize) -> Vec<Interval> {
        let mut out = vec![base];
        let mut level = vec![base];
        for _ in 0..depth {
            level = level
                .iter()
                .flat_map(|j| {
                    let (a, b) = j.halves();
                    [a, b]
                })
                .collect();
            out.extend(&level);
        }
        out
    }

    #[test]
    fn single_zero_selects_nothing() {
        let b = BlaschkeProduct::new(vec![Complex64::new(0.0, 1.0)]).unwrap();
        let base = Interval::new(-8.0, 8.0);
        let r = stopping_intervals(&b, base, 100.0, 0.5).unwrap();
        assert!(r.intervals.is_empty());
        // Oracle: no dyadic interval anywhere carries enough mass.
        for j in all_dyadic(base, 12) {
            assert!(triple_square_mass(&b, j) < 100.0 * j.len());
        }
    }

    #[test]
    fn heavy_stack_is_selected_and_verified() {
        let b = stacked_zeros();
        let base = Interval::new(-8.0, 8.0);
        let r = stopping_intervals(&b, base, 10.0, 0.01).unwrap();
        assert!(!r.intervals.is_empty());
        for j in &r.intervals {
            let direct: f64 =
                b.zeros().iter().filter(|a| a.re >= j.lo - j.len() && a.re <= j.hi + j.len() && a.im <= 3.0 * j.len()).map(|a| a.im).sum();
            assert!(direct >= 10.0 * j.len());
        }
        // Maximality: no selected interval has a selected-quality dyadic ancestor.
        for j in all_dyadic(base, 10) {
            let heavy = triple_square_mass(&b, j) >= 10.0 * j.len();
            let strictly_contains = r.intervals.iter().any(|s| j.lo <= s.lo && s.hi <= j.hi && j.len() > s.len());
            assert!(!(heavy && strictly_contains), "{j:?}");
        }
        assert!(r.length_ok() && r.mass_ok() && r.residual_ok());
    }

    #[test]
    fn missing_witness_is_an_error() {
        let b = stacked_zeros();
        assert!(matches!(stopping_intervals(&b, Interval::new(0.0, 1.0), 10.0, 0.9), Err(Error::NoTopHalfWitness { .. })));
    }
}
