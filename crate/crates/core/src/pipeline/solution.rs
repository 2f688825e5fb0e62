//! `g1 = s e^{-(kappa + h)}`, `g2 = G1 e^{-h}` with `G1 = (e^h - F1 e^{-kappa}) / f2`, and their
//! verification.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfplane::{reflect, BlaschkeProduct};
use crate::pipeline::interpolate::{InterpolationProblem, SymmetricInterpolant};
use crate::vfield::GridField;

/// Largest `|e^h - F1 e^{-kappa}|` accepted at a zero of `f2`.
pub const CONSISTENCY_TOLERANCE: f64 = 1e-6;
/// Nodes with `|f2| < FILL_LEVEL` take `G1` from their four neighbours.
pub const FILL_LEVEL: f64 = 1e-9;

/// Local bicubic (4 x 4 Lagrange) evaluation of a grid field; exact at nodes.
pub fn bicubic(field: &GridField, z: Complex64) -> Option<Complex64> {
    let g = field.grid;
    let (j, k, tx, ty) = g.locate(z)?;
    let j0 = (j as isize - 1).clamp(0, g.nx as isize - 4) as usize;
    let k0 = (k as isize - 1).clamp(0, g.ny as isize - 4) as usize;
    let (u, v) = (tx + (j - j0) as f64, ty + (k - k0) as f64);
    let wx = lagrange4(u);
    let wy = lagrange4(v);
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, cy) in wy.iter().enumerate() {
        for (a, cx) in wx.iter().enumerate() {
            let i = g.index(j0 + a, k0 + b);
            if !field.mask[i] {
                return None;
            }
            acc += field.values[i] * (cx * cy);
        }
    }
    Some(acc)
}

/// Lagrange weights on the nodes 0, 1, 2, 3.
fn lagrange4(t: f64) -> [f64; 4] {
    let mut w = [0.0; 4];
    for (i, wi) in w.iter_mut().enumerate() {
        let mut num = 1.0;
        let mut den = 1.0;
        for m in 0..4 {
            if m != i {
                num *= t - m as f64;
                den *= i as f64 - m as f64;
            }
        }
        *wi = num / den;
    }
    w
}

/// `kappa` at the reflection-closed zeros of `f2`; right-half values are mirrored and axis values
/// made real so the symmetry is exact.
pub fn kappa_at(kappa: &GridField, z: Complex64) -> Result<Complex64> {
    let at = |w: Complex64| bicubic(kappa, w).ok_or_else(|| Error::GridTooSmall(format!("{w} is outside the kappa grid")));
    if z.re == 0.0 {
        Ok(Complex64::new(at(z)?.re, 0.0))
    } else if z.re > 0.0 {
        at(z)
    } else {
        Ok(at(reflect(z))?.conj())
    }
}

/// Targets `log(F1 e^{-kappa})` at the zeros of `f2`, principal branch.
pub fn interpolation_targets(
    f1: &BlaschkeProduct,
    sign: f64,
    f2: &BlaschkeProduct,
    kappa: &GridField,
    gamma: f64,
) -> Result<InterpolationProblem> {
    let mut nodes = Vec::new();
    let mut targets = Vec::new();
    for &a in f2.zeros() {
        let base = if a.re < 0.0 { reflect(a) } else { a };
        let w = (f1.eval(base) * sign * (-kappa_at(kappa, base)?).exp()).ln();
        let w = if a.re == 0.0 {
            let v = f1.eval(a).re * sign * (-kappa_at(kappa, a)?.re).exp();
            if !(v > 0.0) {
                return Err(Error::Inconsistent(format!("F1 e^(-kappa) is not positive at the axis zero {a}")));
            }
            Complex64::new(v.ln(), 0.0)
        } else if a.re < 0.0 {
            w.conj()
        } else {
            w
        };
        nodes.push(a);
        targets.push(w);
    }
    Ok(InterpolationProblem { nodes, targets, gamma })
}

/// The assembled solution, evaluable on the grid box.
#[derive(Debug, Clone)]
pub struct Solution {
    pub f1: BlaschkeProduct,
    pub f2: BlaschkeProduct,
    pub sign: f64,
    pub kappa: GridField,
    pub h: Option<SymmetricInterpolant>,
    pub g1: GridField,
    pub g2: GridField,
    pub filled_nodes: usize,
    pub consistency: f64,
    /// Reflection defect of `g2` before symmetrization, relative to its sup norm.
    pub raw_symmetry_defect: f64,
}

impl Solution {
    /// `(g1(z), g2(z))` off the grid, with `kappa` interpolated bicubically.
    pub fn eval(&self, z: Complex64) -> Option<(Complex64, Complex64)> {
        let one = Complex64::new(1.0, 0.0);
        let h = match &self.h {
            None => return Some((one, one - self.f1.eval(z))),
            Some(h) => h.eval(z),
        };
        let k = bicubic(&self.kappa, z)?;
        let g1 = (-(k + h)).exp() * self.sign;
        let num = h.exp() - self.f1.eval(z) * self.sign * (-k).exp();
        let f2 = self.f2.eval(z);
        if f2.norm() < FILL_LEVEL {
            return None;
        }
        Some((g1, num / f2 * (-h).exp()))
    }
}

/// Builds `g1`, `g2` on the grid. With `f2 = 1` the pair is `(1, 1 - f1)`.
pub fn assemble_solution(
    f1: &BlaschkeProduct,
    f2: &BlaschkeProduct,
    sign: f64,
    kappa: &GridField,
    h: Option<SymmetricInterpolant>,
) -> Result<Solution> {
    let g = kappa.grid;
    let one = Complex64::new(1.0, 0.0);
    let Some(hh) = h.clone().filter(|_| !f2.is_empty()) else {
        return Ok(Solution {
            f1: f1.clone(),
            f2: f2.clone(),
            sign,
            kappa: kappa.clone(),
            h: None,
            g1: GridField::from_fn(g, |_| one),
            g2: GridField::from_fn(g, |z| one - f1.eval(z)),
            filled_nodes: 0,
            consistency: 0.0,
            raw_symmetry_defect: 0.0,
        });
    };
    let mut consistency: f64 = 0.0;
    for &a in f2.zeros() {
        let k = kappa_at(kappa, a)?;
        let num = hh.eval(a).exp() - f1.eval(a) * sign * (-k).exp();
        consistency = consistency.max(num.norm());
    }
    if !(consistency < CONSISTENCY_TOLERANCE) {
        return Err(Error::Tolerance { stage: "assembly", detail: format!("numerator {consistency:.3e} does not vanish at a zero of f2") });
    }
    let mut hv = vec![Complex64::new(0.0, 0.0); g.len()];
    let mut big_g = vec![Complex64::new(0.0, 0.0); g.len()];
    let mut fill = Vec::new();
    for i in 0..g.len() {
        let z = g.point_of(i);
        let h = hh.eval(z);
        hv[i] = h;
        let f2z = f2.eval(z);
        if f2z.norm() < FILL_LEVEL {
            fill.push(i);
            continue;
        }
        let num = h.exp() - f1.eval(z) * sign * (-kappa.values[i]).exp();
        big_g[i] = num / f2z;
    }
    for &i in &fill {
        let (j, k) = g.coords(i);
        if j == 0 || k == 0 || j + 1 >= g.nx || k + 1 >= g.ny {
            return Err(Error::GridTooSmall(format!("zero of f2 at {} lies on the grid edge", g.point_of(i))));
        }
        let (wx, wy) = (g.hy * g.hy, g.hx * g.hx);
        let sx = big_g[g.index(j - 1, k)] + big_g[g.index(j + 1, k)];
        let sy = big_g[g.index(j, k - 1)] + big_g[g.index(j, k + 1)];
        big_g[i] = (sx * wx + sy * wy) / (2.0 * (wx + wy));
    }
    let mut g1 = GridField::zeros(g);
    let mut g2 = GridField::zeros(g);
    for i in 0..g.len() {
        g1.values[i] = (-(kappa.values[i] + hv[i])).exp() * sign;
        g2.values[i] = big_g[i] * (-hv[i]).exp();
    }
    // rounding in the product and the division breaks the reflection symmetry slightly
    let raw_symmetry_defect = g2.symmetry_defect() / g2.sup_norm().max(1.0);
    let (g1, g2) = (g1.symmetrize(), g2.symmetrize());
    Ok(Solution {
        f1: f1.clone(),
        f2: f2.clone(),
        sign,
        kappa: kappa.clone(),
        h,
        g1,
        g2,
        filled_nodes: fill.len(),
        consistency,
        raw_symmetry_defect,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub grid_nodes: usize,
    pub random_points: usize,
    pub residual_grid: f64,
    pub residual_random: f64,
    pub residual: f64,
    pub g1_sup: f64,
    pub g1_inf: f64,
    pub g1_inv_sup: f64,
    pub g2_sup: f64,
    pub g1_symmetry: f64,
    pub g2_symmetry: f64,
    /// `min |g1| e^{sup |Re(kappa + h)|}`; at least 1 by construction.
    pub invertibility_ratio: f64,
}

/// Residual and norms over the grid and `random` seeded points of the grid box.
pub fn verify_solution(sol: &Solution, random: usize, seed: u64) -> VerificationReport {
    let g = sol.g1.grid;
    let mut residual_grid: f64 = 0.0;
    let (mut g1_sup, mut g1_inf, mut g2_sup) = (0.0f64, f64::INFINITY, 0.0f64);
    let mut exponent_sup: f64 = 0.0;
    for i in 0..g.len() {
        let z = g.point_of(i);
        let (a, b) = (sol.g1.values[i], sol.g2.values[i]);
        let r = (sol.f1.eval(z) * a + sol.f2.eval(z) * b - 1.0).norm();
        residual_grid = residual_grid.max(r);
        g1_sup = g1_sup.max(a.norm());
        g1_inf = g1_inf.min(a.norm());
        g2_sup = g2_sup.max(b.norm());
        if let Some(h) = &sol.h {
            exponent_sup = exponent_sup.max((sol.kappa.values[i] + h.eval(z)).re.abs());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut residual_random: f64 = 0.0;
    let mut used = 0;
    let (x_max, y_lo, y_hi) = (g.x(g.nx - 1), g.y(0), g.y(g.ny - 1));
    for _ in 0..random {
        let z = Complex64::new(rng.random_range(-x_max..x_max), rng.random_range(y_lo..y_hi));
        if let Some((a, b)) = sol.eval(z) {
            residual_random = residual_random.max((sol.f1.eval(z) * a + sol.f2.eval(z) * b - 1.0).norm());
            g1_sup = g1_sup.max(a.norm());
            g1_inf = g1_inf.min(a.norm());
            g2_sup = g2_sup.max(b.norm());
            used += 1;
        }
    }
    VerificationReport {
        grid_nodes: g.len(),
        random_points: used,
        residual_grid,
        residual_random,
        residual: residual_grid.max(residual_random),
        g1_sup,
        g1_inf,
        g1_inv_sup: 1.0 / g1_inf,
        g2_sup,
        g1_symmetry: sol.g1.symmetry_defect(),
        g2_symmetry: sol.g2.symmetry_defect(),
        invertibility_ratio: if sol.h.is_some() { g1_inf * exponent_sup.exp() } else { f64::INFINITY },
    }
}
