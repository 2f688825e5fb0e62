//! Deterministic generators of real-symmetric test pairs.
//!
//! Admissible pairs have well-separated `f2` zeros and `f1` axis zeros kept clear of the axis
//! sublevel set of `f2`, so both the corona and the sign condition hold by construction.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::halfplane::{axis_sublevel_set, pseudo_distance, BlaschkeProduct};

/// Lower bound on [`separation_constant`] for the `f2` zeros of an admissible pair.
pub const MIN_SEPARATION: f64 = 0.2;
/// Largest degree drawn for either product.
pub const MAX_DEGREE: usize = 8;

/// `min_i prod_{j != i} rho(z_i, z_j)`; 1 for fewer than two zeros.
pub fn separation_constant(zeros: &[Complex64]) -> f64 {
    zeros
        .iter()
        .enumerate()
        .map(|(i, a)| zeros.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, b)| pseudo_distance(*a, *b)).product::<f64>())
        .fold(1.0, f64::min)
}

#[derive(Debug, Clone)]
pub struct SuitePair {
    pub index: usize,
    pub f1: BlaschkeProduct,
    pub f2: BlaschkeProduct,
    pub epsilon: f64,
}

/// Symmetric zero set of the given degree: mirror pairs in `[0.3, x_max) x [0.6, x_max + 0.5)`
/// and axis zeros from `axis`, pairwise `rho > sep` and `rho > 0.3` from `avoid`.
fn draw_zeros(
    rng: &mut ChaCha8Rng,
    degree: usize,
    sep: f64,
    x_max: f64,
    axis: &dyn Fn(&mut ChaCha8Rng) -> f64,
    avoid: &[Complex64],
) -> Vec<Complex64> {
    let mut z: Vec<Complex64> = Vec::new();
    let mut tries = 0;
    while z.len() < degree {
        tries += 1;
        if tries > 20_000 {
            z.clear();
            tries = 0;
        }
        let cand = if degree - z.len() >= 2 && rng.random_bool(0.5) {
            let a = Complex64::new(rng.random_range(0.3..x_max), rng.random_range(0.6..x_max + 0.5));
            vec![a, Complex64::new(-a.re, a.im)]
        } else {
            vec![Complex64::new(0.0, axis(rng))]
        };
        let clear =
            cand.iter().all(|c| z.iter().all(|w| pseudo_distance(*c, *w) > sep) && avoid.iter().all(|w| pseudo_distance(*c, *w) > 0.3));
        if clear && (cand.len() == 1 || pseudo_distance(cand[0], cand[1]) > sep) {
            z.extend(cand);
        }
    }
    z
}

/// Pair `index` of the admissible suite; degrees cycle through `1..=8`.
pub fn admissible_pair(index: usize, seed: u64) -> SuitePair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64));
    let d1 = 1 + index % MAX_DEGREE;
    let d2 = 1 + (5 * index + 3) % MAX_DEGREE;
    let z2 = loop {
        let z = draw_zeros(&mut rng, d2, 0.4, 5.0, &|r| r.random_range(0.6..6.0), &[]);
        if separation_constant(&z) >= MIN_SEPARATION {
            break z;
        }
    };
    let f2 = BlaschkeProduct::new(z2.clone()).expect("finite zeros");
    // shrink epsilon until the sublevel set sits inside [0.5, 5]
    let mut epsilon = 0.1;
    let (lo, hi) = loop {
        let set = axis_sublevel_set(&f2, epsilon);
        let lo = set.intervals.iter().map(|i| i.0).fold(f64::INFINITY, f64::min).min(1.0);
        let hi = set.intervals.iter().map(|i| i.1).fold(0.0, f64::max).max(2.5);
        if (lo >= 0.5 && hi <= 5.0) || epsilon < 0.011 {
            break (lo, hi);
        }
        epsilon /= 2.0;
    };
    let below_or_above =
        |r: &mut ChaCha8Rng| if r.random_bool(0.5) { r.random_range(0.3 * lo..0.6 * lo) } else { r.random_range(1.5 * hi..2.5 * hi) };
    let z1 = draw_zeros(&mut rng, d1, 0.3, 3.0, &below_or_above, &z2);
    SuitePair { index, f1: BlaschkeProduct::new(z1).expect("finite zeros"), f2, epsilon }
}

/// The first `count` admissible pairs for `seed`.
pub fn admissible_suite(count: usize, seed: u64) -> Vec<SuitePair> {
    (0..count).map(|k| admissible_pair(k, seed)).collect()
}

/// Sign-violating pairs: an odd number of `f1` axis zeros between two `f2` axis zeros makes `f1`
/// change sign across the sublevel set of `f2`. Off-axis mirror pairs are added for variety.
pub fn violation_pairs(count: usize, seed: u64) -> Vec<SuitePair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|index| {
            let c: f64 = rng.random_range(1.0..4.0);
            let mut z1 = vec![Complex64::new(0.0, c)];
            let mut z2 = vec![Complex64::new(0.0, c / 3.0), Complex64::new(0.0, 3.0 * c)];
            for _ in 0..index % 3 {
                let a = Complex64::new(rng.random_range(0.5..3.0), rng.random_range(0.5..4.0) * c);
                z1.extend([a, Complex64::new(-a.re, a.im)]);
                let b = Complex64::new(rng.random_range(4.0..6.0) * c, rng.random_range(0.5..2.0) * c);
                z2.extend([b, Complex64::new(-b.re, b.im)]);
            }
            SuitePair {
                index,
                f1: BlaschkeProduct::new(z1).expect("finite zeros"),
                f2: BlaschkeProduct::new(z2).expect("finite zeros"),
                epsilon: 0.05,
            }
        })
        .collect()
}
