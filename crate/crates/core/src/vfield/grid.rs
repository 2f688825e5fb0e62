//! Reflection-closed rectangular grids on the upper half-plane and complex fields on them.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nodes `x_j = -X + j hx` (`j = 0..=n`, `hx = 2X/n`) and `y_k = (k + 1) hy` (`k = 0..n`,
/// `hy = Y/n`). Column `n/2` is the imaginary axis and column `j` mirrors to `n - j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub n: usize,
    pub nx: usize,
    pub ny: usize,
    pub half_width: f64,
    pub height: f64,
    pub hx: f64,
    pub hy: f64,
}

impl Grid {
    pub fn new(n: usize, half_width: f64, height: f64) -> Result<Grid> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::Config(format!("grid resolution {n} must be even and at least 4")));
        }
        if !(half_width > 0.0 && height > 0.0) {
            return Err(Error::Config(format!("grid box {half_width} x {height} is empty")));
        }
        Ok(Grid { n, nx: n + 1, ny: n, half_width, height, hx: 2.0 * half_width / n as f64, hy: height / n as f64 })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, j: usize) -> f64 {
        if j == self.n / 2 {
            0.0
        } else {
            -self.half_width + j as f64 * self.hx
        }
    }

    pub fn y(&self, k: usize) -> f64 {
        (k + 1) as f64 * self.hy
    }

    pub fn point(&self, j: usize, k: usize) -> Complex64 {
        Complex64::new(self.x(j), self.y(k))
    }

    pub fn index(&self, j: usize, k: usize) -> usize {
        k * self.nx + j
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    pub fn axis_column(&self) -> usize {
        self.n / 2
    }

    pub fn mirror_column(&self, j: usize) -> usize {
        self.nx - 1 - j
    }

    pub fn mirror_index(&self, idx: usize) -> usize {
        let (j, k) = self.coords(idx);
        self.index(self.mirror_column(j), k)
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx).map(|j| self.x(j)).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        (0..self.ny).map(|k| self.y(k)).collect()
    }

    /// Cell holding `z` and the local coordinates in it, for bilinear interpolation.
    pub fn locate(&self, z: Complex64) -> Option<(usize, usize, f64, f64)> {
        let u = (z.re + self.half_width) / self.hx;
        let v = z.im / self.hy - 1.0;
        if !(u >= 0.0 && v >= 0.0) || u > (self.nx - 1) as f64 || v > (self.ny - 1) as f64 {
            return None;
        }
        let j = (u.floor() as usize).min(self.nx - 2);
        let k = (v.floor() as usize).min(self.ny - 2);
        Some((j, k, u - j as f64, v - k as f64))
    }

    /// Same grid with twice the resolution over the same box.
    pub fn refined(&self) -> Grid {
        Grid::new(2 * self.n, self.half_width, self.height).expect("refining a valid grid")
    }
}

/// Complex samples on a grid; `mask[i]` is false where the value is undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub grid: Grid,
    pub values: Vec<Complex64>,
    pub mask: Vec<bool>,
}

impl GridField {
    pub fn zeros(grid: Grid) -> Self {
        GridField { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()], mask: vec![true; grid.len()] }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(Complex64) -> Complex64) -> Self {
        let mut out = GridField::zeros(grid);
        for k in 0..grid.ny {
            for j in 0..grid.nx {
                out.values[grid.index(j, k)] = f(grid.point(j, k));
            }
        }
        out
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.values[self.grid.index(j, k)]
    }

    fn check(&self, other: &GridField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &GridField) -> Result<GridField> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridField) -> Result<GridField> {
        self.zip(other, |a, b| a - b)
    }

    pub fn zip(&self, other: &GridField, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<GridField> {
        self.check(other)?;
        Ok(GridField {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect(),
            mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a && *b).collect(),
        })
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> GridField {
        GridField { grid: self.grid, values: self.values.iter().map(|v| f(*v)).collect(), mask: self.mask.clone() }
    }

    pub fn scale(&self, s: f64) -> GridField {
        self.map(|v| v * s)
    }

    fn defined(&self) -> impl Iterator<Item = &Complex64> {
        self.values.iter().zip(&self.mask).filter(|(_, m)| **m).map(|(v, _)| v)
    }

    pub fn sup_norm(&self) -> f64 {
        self.defined().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn sup_re(&self) -> f64 {
        self.defined().map(|v| v.re.abs()).fold(0.0, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.defined().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// `F†(z) = conj F(-conj z)`.
    pub fn reflected(&self) -> GridField {
        let g = self.grid;
        let mut out = self.clone();
        for i in 0..g.len() {
            let m = g.mirror_index(i);
            out.values[i] = self.values[m].conj();
            out.mask[i] = self.mask[m];
        }
        out
    }

    /// `max |F(z) - conj F(-conj z)|` over node pairs.
    pub fn symmetry_defect(&self) -> f64 {
        let g = self.grid;
        (0..g.len())
            .filter(|&i| self.mask[i] && self.mask[g.mirror_index(i)])
            .map(|i| (self.values[i] - self.values[g.mirror_index(i)].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// `(F + F†)/2`; axis values come out exactly real.
    pub fn symmetrize(&self) -> GridField {
        let g = self.grid;
        let mut out = self.clone();
        for i in 0..g.len() {
            let m = g.mirror_index(i);
            out.mask[i] = self.mask[i] && self.mask[m];
            out.values[i] = if i == m { Complex64::new(self.values[i].re, 0.0) } else { (self.values[i] + self.values[m].conj()) * 0.5 };
        }
        // pairwise evaluation order differs; copy the right half over the left for exactness
        for k in 0..g.ny {
            for j in 0..g.axis_column() {
                let a = g.index(g.mirror_column(j), k);
                out.values[g.index(j, k)] = out.values[a].conj();
            }
        }
        out
    }

    /// Bilinear interpolation; `None` outside the grid or next to masked nodes.
    pub fn bilinear(&self, z: Complex64) -> Option<Complex64> {
        let (j, k, tx, ty) = self.grid.locate(z)?;
        let g = self.grid;
        let ids = [g.index(j, k), g.index(j + 1, k), g.index(j, k + 1), g.index(j + 1, k + 1)];
        if ids.iter().any(|&i| !self.mask[i]) {
            return None;
        }
        let v = &self.values;
        Some(v[ids[0]] * ((1.0 - tx) * (1.0 - ty)) + v[ids[1]] * (tx * (1.0 - ty)) + v[ids[2]] * ((1.0 - tx) * ty) + v[ids[3]] * (tx * ty))
    }

    /// Text dump: a header line `X Y nx ny` then one `re im` line per node in row-major order.
    /// Masked nodes are written as `nan nan`.
    pub fn dump(&self) -> String {
        let g = self.grid;
        let mut s = format!("{:?} {:?} {} {}\n", g.half_width, g.height, g.nx, g.ny);
        for (v, m) in self.values.iter().zip(&self.mask) {
            if *m {
                let _ = writeln!(s, "{:?} {:?}", v.re, v.im);
            } else {
                s.push_str("nan nan\n");
            }
        }
        s
    }

    /// Central first differences, second-order one-sided at the edges.
    fn partial(&self, along_x: bool) -> (Vec<Complex64>, Vec<bool>) {
        let g = self.grid;
        let (len, h) = if along_x { (g.nx, g.hx) } else { (g.ny, g.hy) };
        let at = |j: usize, k: usize, t: usize| if along_x { g.index(t, k) } else { g.index(j, t) };
        let mut out = vec![Complex64::new(0.0, 0.0); g.len()];
        let mut mask = vec![false; g.len()];
        for k in 0..g.ny {
            for j in 0..g.nx {
                let t = if along_x { j } else { k };
                let (ids, w): ([usize; 3], [f64; 3]) = if t == 0 {
                    ([at(j, k, 0), at(j, k, 1), at(j, k, 2)], [-1.5, 2.0, -0.5])
                } else if t == len - 1 {
                    ([at(j, k, t), at(j, k, t - 1), at(j, k, t - 2)], [1.5, -2.0, 0.5])
                } else {
                    ([at(j, k, t - 1), at(j, k, t), at(j, k, t + 1)], [-0.5, 0.0, 0.5])
                };
                let i = g.index(j, k);
                if ids.iter().all(|&q| self.mask[q]) {
                    mask[i] = true;
                    out[i] = (self.values[ids[0]] * w[0] + self.values[ids[1]] * w[1] + self.values[ids[2]] * w[2]) / h;
                }
            }
        }
        (out, mask)
    }

    fn second(&self, along_x: bool) -> (Vec<Complex64>, Vec<bool>) {
        let g = self.grid;
        let (len, h) = if along_x { (g.nx, g.hx) } else { (g.ny, g.hy) };
        let at = |j: usize, k: usize, t: usize| if along_x { g.index(t, k) } else { g.index(j, t) };
        let mut out = vec![Complex64::new(0.0, 0.0); g.len()];
        let mut mask = vec![false; g.len()];
        for k in 0..g.ny {
            for j in 0..g.nx {
                let t = if along_x { j } else { k };
                let (ids, w): ([usize; 4], [f64; 4]) = if t == 0 {
                    ([at(j, k, 0), at(j, k, 1), at(j, k, 2), at(j, k, 3)], [2.0, -5.0, 4.0, -1.0])
                } else if t == len - 1 {
                    ([at(j, k, t), at(j, k, t - 1), at(j, k, t - 2), at(j, k, t - 3)], [2.0, -5.0, 4.0, -1.0])
                } else {
                    ([at(j, k, t - 1), at(j, k, t), at(j, k, t + 1), at(j, k, t)], [1.0, -2.0, 1.0, 0.0])
                };
                let i = g.index(j, k);
                if ids.iter().all(|&q| self.mask[q]) {
                    mask[i] = true;
                    let s: Complex64 = ids.iter().zip(w).map(|(&q, c)| self.values[q] * c).sum();
                    out[i] = s / (h * h);
                }
            }
        }
        (out, mask)
    }

    fn combine(&self, a: (Vec<Complex64>, Vec<bool>), b: (Vec<Complex64>, Vec<bool>), wb: Complex64) -> GridField {
        GridField {
            grid: self.grid,
            values: a.0.iter().zip(&b.0).map(|(x, y)| (x + y * wb) * 0.5).collect(),
            mask: a.1.iter().zip(&b.1).map(|(x, y)| *x && *y).collect(),
        }
    }

    /// `dF/dz = (F_x - i F_y)/2`.
    pub fn d(&self) -> GridField {
        self.combine(self.partial(true), self.partial(false), Complex64::new(0.0, -1.0))
    }

    /// `dF/dconj z = (F_x + i F_y)/2`.
    pub fn dbar(&self) -> GridField {
        self.combine(self.partial(true), self.partial(false), Complex64::new(0.0, 1.0))
    }

    /// `F_xx + F_yy`.
    pub fn laplacian(&self) -> GridField {
        let mut out = self.combine(self.second(true), self.second(false), Complex64::new(1.0, 0.0));
        for v in &mut out.values {
            *v *= 2.0;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Grid {
        Grid::new(n, 2.0, 2.0).unwrap()
    }

    #[test]
    fn layout_and_mirror() {
        let g = grid(8);
        assert_eq!((g.nx, g.ny), (9, 8));
        assert_eq!(g.x(4), 0.0);
        for j in 0..g.nx {
            assert_eq!(g.x(g.mirror_column(j)), -g.x(j));
        }
        assert_eq!(g.y(0), g.hy);
        assert!((g.y(g.ny - 1) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn analytic_field_has_small_dbar() {
        let g = grid(64);
        let f = GridField::from_fn(g, |z| z * z);
        let db = f.dbar();
        assert!(db.sup_norm() < 1e-10);
        let d = f.d();
        let err = (0..g.len()).map(|i| (d.values[i] - g.point(i % g.nx, i / g.nx) * 2.0).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10);
    }

    #[test]
    fn conjugate_has_unit_dbar_and_zero_laplacian() {
        let g = grid(32);
        let f = GridField::from_fn(g, |z| z.conj());
        assert!(f.dbar().values.iter().all(|v| (v - 1.0).norm() < 1e-12));
        let l = GridField::from_fn(g, |z| Complex64::new(z.norm_sqr(), 0.0)).laplacian();
        assert!(l.values.iter().all(|v| (v - 4.0).norm() < 1e-9));
    }

    #[test]
    fn second_order_convergence() {
        let f = |z: Complex64| z.exp() + z.conj() * z.conj() * z;
        let exact = |z: Complex64| 2.0 * z.conj() * z;
        let err = |n| {
            let g = grid(n);
            let d = GridField::from_fn(g, f).dbar();
            (0..g.len()).map(|i| (d.values[i] - exact(g.point(i % g.nx, i / g.nx))).norm()).fold(0.0, f64::max)
        };
        let (e1, e2) = (err(32), err(64));
        assert!(e1 / e2 > 3.5, "{e1} {e2}");
    }

    #[test]
    fn symmetrize_is_exact_and_idempotent() {
        let g = grid(16);
        let f = GridField::from_fn(g, |z| z.sin() + Complex64::new(0.3, 0.7) * z);
        let s = f.symmetrize();
        assert_eq!(s.symmetry_defect(), 0.0);
        assert_eq!(s.symmetrize(), s);
    }

    #[test]
    fn bilinear_reproduces_linear_functions() {
        let g = grid(16);
        let f = GridField::from_fn(g, |z| z * 3.0 + 1.0);
        let z = Complex64::new(0.37, 1.21);
        assert!((f.bilinear(z).unwrap() - (z * 3.0 + 1.0)).norm() < 1e-12);
        assert!(f.bilinear(Complex64::new(5.0, 1.0)).is_none());
    }
}
