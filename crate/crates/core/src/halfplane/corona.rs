//! Measurement of `delta = inf (|f1| + |f2|)` over the upper half-plane.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::halfplane::blaschke::BlaschkeProduct;

/// Values below this are treated as a common zero.
pub const COMMON_ZERO_LEVEL: f64 = 1e-12;

/// Result of [`corona_delta`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoronaDelta {
    pub delta: f64,
    pub argmin: Complex64,
    /// False when the minimum is below [`COMMON_ZERO_LEVEL`].
    pub unimodular: bool,
    /// Half-width of the search box `[-R, R] x (0, R]`.
    pub box_radius: f64,
    /// `min_{dQ} |f1| + min_{dQ} |f2|` over the box boundary. Both products are zero-free
    /// outside the box, so by the minimum principle this bounds `|f1| + |f2|` from below there.
    pub exterior_bound: f64,
    pub enclosure: String,
}

fn objective(f1: &BlaschkeProduct, f2: &BlaschkeProduct, z: Complex64) -> f64 {
    f1.eval(z).norm() + f2.eval(z).norm()
}

/// Grid minimisation with three rounds of tenfold local zoom, seeded also at every zero.
///
/// `resolution` is the number of grid columns over the box; rows are half as many.
pub fn corona_delta(f1: &BlaschkeProduct, f2: &BlaschkeProduct, resolution: usize) -> CoronaDelta {
    let n = resolution.max(16);
    let mut radius = 2.0 * f1.max_modulus().max(f2.max_modulus()).max(0.5);
    loop {
        let result = search_box(f1, f2, n, radius);
        if result.delta < COMMON_ZERO_LEVEL || result.exterior_bound >= result.delta || radius > 1e8 {
            return result;
        }
        radius *= 2.0;
    }
}

fn search_box(f1: &BlaschkeProduct, f2: &BlaschkeProduct, n: usize, radius: f64) -> CoronaDelta {
    let nx = n;
    let ny = (n / 2).max(8);
    let hx = 2.0 * radius / nx as f64;
    let hy = radius / ny as f64;
    let mut samples: Vec<(f64, Complex64)> = Vec::with_capacity(nx * ny + 16);
    for k in 0..ny {
        let y = (k as f64 + 0.5) * hy;
        for j in 0..nx {
            let x = -radius + (j as f64 + 0.5) * hx;
            let z = Complex64::new(x, y);
            samples.push((objective(f1, f2, z), z));
        }
    }
    for a in f1.zeros().iter().chain(f2.zeros()) {
        samples.push((objective(f1, f2, *a), *a));
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.re.total_cmp(&b.1.re)).then(a.1.im.total_cmp(&b.1.im)));

    let mut best = (f64::INFINITY, Complex64::new(0.0, radius));
    let mut seeds: Vec<Complex64> = Vec::new();
    for &(_, z) in &samples {
        if seeds.iter().all(|s| (s - z).norm() > 2.0 * hx.max(hy)) {
            seeds.push(z);
        }
        if seeds.len() == 8 {
            break;
        }
    }
    for seed in seeds {
        let (v, z) = refine(f1, f2, seed, hx, hy);
        if v < best.0 || (v == best.0 && (z.re, z.im) < (best.1.re, best.1.im)) {
            best = (v, z);
        }
    }

    let boundary_samples = 8 * n;
    let mut min1 = f64::INFINITY;
    let mut min2 = f64::INFINITY;
    for i in 0..=boundary_samples {
        let t = i as f64 / boundary_samples as f64;
        for z in
            [Complex64::new(-radius + 2.0 * radius * t, radius), Complex64::new(-radius, radius * t), Complex64::new(radius, radius * t)]
        {
            min1 = min1.min(f1.eval(z).norm());
            min2 = min2.min(f2.eval(z).norm());
        }
    }
    let exterior_bound = min1 + min2;
    let unimodular = best.0 >= COMMON_ZERO_LEVEL;
    let delta = if unimodular { best.0 } else { 0.0 };
    CoronaDelta {
        delta,
        argmin: best.1,
        unimodular,
        box_radius: radius,
        exterior_bound,
        enclosure: format!(
            "grid {nx}x{ny} on [-{radius}, {radius}] x (0, {radius}] with three rounds of 10x zoom; \
             both products are zero-free outside the box, so |f1|+|f2| >= {exterior_bound:.6e} there \
             by the minimum principle applied to each factor"
        ),
    }
}

fn refine(f1: &BlaschkeProduct, f2: &BlaschkeProduct, seed: Complex64, hx: f64, hy: f64) -> (f64, Complex64) {
    let mut center = seed;
    let mut value = objective(f1, f2, seed);
    let (mut wx, mut wy) = (hx, hy);
    for _ in 0..3 {
        let m = 10;
        let mut local = (value, center);
        for a in -m..=m {
            for b in -m..=m {
                let z = center + Complex64::new(wx * a as f64 / m as f64, wy * b as f64 / m as f64);
                if z.im < 0.0 {
                    continue;
                }
                let v = objective(f1, f2, z);
                if v < local.0 {
                    local = (v, z);
                }
            }
        }
        value = local.0;
        center = local.1;
        wx /= 10.0;
        wy /= 10.0;
    }
    (value, center)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axis(ys: &[f64]) -> BlaschkeProduct {
        BlaschkeProduct::new(ys.iter().map(|y| Complex64::new(0.0, *y)).collect()).unwrap()
    }

    #[test]
    fn common_zero_gives_zero() {
        let d = corona_delta(&axis(&[1.0]), &axis(&[1.0]), 64);
        assert_eq!(d.delta, 0.0);
        assert!(!d.unimodular);
    }

    #[test]
    fn constant_one_gives_one() {
        let d = corona_delta(&BlaschkeProduct::one(), &axis(&[1.0]), 64);
        assert!((d.delta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_axis_zeros_match_axis_restriction() {
        // Axis restriction |y-1|/(y+1) + |y-2|/(y+2) has minimum 1/3 at y = 1 and y = 2.
        let axis_min = (0..=100_000)
            .map(|i| {
                let y = 1.0 + i as f64 / 100_000.0;
                (y - 1.0).abs() / (y + 1.0) + (y - 2.0).abs() / (y + 2.0)
            })
            .fold(f64::INFINITY, f64::min);
        assert!((axis_min - 1.0 / 3.0).abs() < 1e-12);
        let d = corona_delta(&axis(&[1.0]), &axis(&[2.0]), 128);
        assert!((d.delta - 1.0 / 3.0).abs() < 1e-9, "delta = {}", d.delta);
        assert!(d.exterior_bound >= d.delta);
    }
}
