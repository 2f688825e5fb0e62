//! Bounded solution of `dbar v = dbar V` by the Cauchy area transform, and `kappa = V - v`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vfield::{Grid, GridField};

/// Relative residual `max |dbar_h v - F| / max |F|` accepted by the solver.
pub const RESIDUAL_TOLERANCE: f64 = 1e-3;
/// Absolute bound on `max |dbar_h kappa|`.
pub const ANALYTICITY_TOLERANCE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DbarOptions {
    /// Defect-correction sweeps `v += C(F - dbar_h v)` after the first transform.
    pub sweeps: usize,
    /// First-order correction of the singular cell.
    pub cell_correction: bool,
}

impl Default for DbarOptions {
    fn default() -> Self {
        DbarOptions { sweeps: 16, cell_correction: true }
    }
}

/// `(1/pi) * integral over a centred `hx x hy` cell of `conj(w)/w`; zero for square cells.
pub fn cell_moment(hx: f64, hy: f64) -> f64 {
    let (a, b) = (hx / 2.0, hy / 2.0);
    let i = 0.5 * b * b * (a / b).atan() + 0.5 * a * b - 0.5 * a * a * (b / a).atan();
    (4.0 * a * b - 8.0 * i) / PI
}

/// Midpoint-rule Cauchy transform `v(z) = (1/pi) sum F(zeta) hx hy / (z - zeta)` on a fixed grid,
/// evaluated as one zero-padded FFT convolution.
pub struct CauchyTransform {
    grid: Grid,
    ghost: usize,
    px: usize,
    py: usize,
    kernel_hat: Vec<Complex64>,
    fwd_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
    moment: f64,
}

impl CauchyTransform {
    pub fn new(grid: Grid) -> Self {
        let ghost = if grid.ny >= 4 { GHOST_ROWS } else { 0 };
        let px = fast_size(2 * grid.nx - 1);
        let py = fast_size(2 * grid.ny + ghost - 1);
        let mut planner = FftPlanner::new();
        let fwd_x = planner.plan_fft_forward(px);
        let fwd_y = planner.plan_fft_forward(py);
        let inv_x = planner.plan_fft_inverse(px);
        let inv_y = planner.plan_fft_inverse(py);
        let area = grid.hx * grid.hy;
        let mut kernel = vec![Complex64::new(0.0, 0.0); px * py];
        for l in -(grid.ny as isize - 1)..(grid.ny + ghost) as isize {
            for m in -(grid.nx as isize - 1)..grid.nx as isize {
                if m == 0 && l == 0 {
                    continue;
                }
                let w = Complex64::new(m as f64 * grid.hx, l as f64 * grid.hy);
                let (u, t) = (m.rem_euclid(px as isize) as usize, l.rem_euclid(py as isize) as usize);
                kernel[t * px + u] = area / (PI * w);
            }
        }
        let mut t = CauchyTransform {
            grid,
            ghost,
            px,
            py,
            kernel_hat: Vec::new(),
            fwd_x,
            fwd_y,
            inv_x,
            inv_y,
            moment: cell_moment(grid.hx, grid.hy),
        };
        t.fft2(&mut kernel, false);
        t.kernel_hat = kernel;
        t
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    fn fft2(&self, buf: &mut [Complex64], inverse: bool) {
        let (fx, fy) = if inverse { (&self.inv_x, &self.inv_y) } else { (&self.fwd_x, &self.fwd_y) };
        for row in buf.chunks_exact_mut(self.px) {
            fx.process(row);
        }
        let mut col = vec![Complex64::new(0.0, 0.0); self.py];
        for u in 0..self.px {
            for t in 0..self.py {
                col[t] = buf[t * self.px + u];
            }
            fy.process(&mut col);
            for t in 0..self.py {
                buf[t * self.px + u] = col[t];
            }
        }
    }

    /// Transform of `data`; masked nodes contribute nothing.
    pub fn apply(&self, data: &GridField, cell_correction: bool) -> Result<GridField> {
        if data.grid != self.grid {
            return Err(Error::GridMismatch);
        }
        let g = self.grid;
        let gh = self.ghost;
        let mut buf = vec![Complex64::new(0.0, 0.0); self.px * self.py];
        let at = |j: usize, k: usize| {
            let i = g.index(j, k);
            if data.mask[i] {
                data.values[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        for k in 0..g.ny {
            for j in 0..g.nx {
                buf[(k + gh) * self.px + j] = at(j, k);
            }
        }
        // below the grid the data is continued by F(conj z) = -conj F(z), the reflection that
        // V itself satisfies, and tapered to zero
        if gh > 0 {
            for j in 0..g.nx {
                let e = at(j, 0) * 3.0 - at(j, 1) * 3.0 + at(j, 2);
                buf[(gh - 1) * self.px + j] = Complex64::new(0.0, e.im);
                for m in 1..gh {
                    let refl = -at(j, (m - 1).min(g.ny - 1)).conj();
                    buf[(gh - 1 - m) * self.px + j] = refl * taper(m as f64 / gh as f64);
                }
            }
        }
        self.fft2(&mut buf, false);
        for (b, h) in buf.iter_mut().zip(&self.kernel_hat) {
            *b *= h;
        }
        self.fft2(&mut buf, true);
        let norm = 1.0 / (self.px * self.py) as f64;
        let mut out = GridField::zeros(g);
        for k in 0..g.ny {
            for j in 0..g.nx {
                out.values[g.index(j, k)] = buf[(k + gh) * self.px + j] * norm;
            }
        }
        if cell_correction {
            let filled = fill_masked(data);
            let (d, db) = (filled.d(), filled.dbar());
            let area = g.hx * g.hy / PI;
            for i in 0..g.len() {
                if data.mask[i] {
                    out.values[i] -= d.values[i] * area + db.values[i] * self.moment;
                }
            }
        }
        Ok(out)
    }
}

/// Rows of tapered data extension below the grid.
pub const GHOST_ROWS: usize = 24;

fn taper(t: f64) -> f64 {
    if t >= 1.0 {
        0.0
    } else {
        (-t * t / (1.0 - t * t)).exp()
    }
}

/// Smallest `2^a 3^b >= n`.
fn fast_size(n: usize) -> usize {
    let mut best = n.next_power_of_two();
    let mut p3 = 1;
    while p3 < best {
        let mut v = p3;
        while v < n {
            v *= 2;
        }
        best = best.min(v);
        p3 *= 3;
    }
    best
}

fn fill_masked(data: &GridField) -> GridField {
    let mut f = data.clone();
    for i in 0..f.values.len() {
        if !f.mask[i] {
            f.values[i] = Complex64::new(0.0, 0.0);
            f.mask[i] = true;
        }
    }
    f
}

/// Residual of `dbar_h v` against `F` on nodes at least one step inside the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub p99_abs: f64,
    pub data_sup: f64,
    pub max_rel: f64,
    pub p99_rel: f64,
}

pub fn verify_dbar(v: &GridField, data: &GridField) -> Result<ResidualReport> {
    if v.grid != data.grid {
        return Err(Error::GridMismatch);
    }
    let g = v.grid;
    let dv = v.dbar();
    let mut res = Vec::with_capacity(g.len());
    for k in 1..g.ny - 1 {
        for j in 1..g.nx - 1 {
            let i = g.index(j, k);
            if dv.mask[i] && data.mask[i] {
                res.push((dv.values[i] - data.values[i]).norm());
            }
        }
    }
    res.sort_by(f64::total_cmp);
    let max_abs = res.last().copied().unwrap_or(0.0);
    let p99_abs = if res.is_empty() { 0.0 } else { res[((res.len() - 1) as f64 * 0.99).round() as usize] };
    let data_sup = data.sup_norm();
    let rel = |x: f64| if data_sup > 0.0 { x / data_sup } else { x };
    Ok(ResidualReport { max_abs, p99_abs, data_sup, max_rel: rel(max_abs), p99_rel: rel(p99_abs) })
}

#[derive(Debug, Clone)]
pub struct DbarSolution {
    pub v: GridField,
    pub sup_v: f64,
    pub residual: ResidualReport,
    /// Symmetry defect of the raw transform before projection.
    pub raw_symmetry_defect: f64,
    pub sweeps_used: usize,
}

/// Solves `dbar v = data`, then projects onto symmetric fields.
pub fn solve_dbar_data(transform: &CauchyTransform, data: &GridField, opts: DbarOptions) -> Result<DbarSolution> {
    let mut v = transform.apply(data, opts.cell_correction)?;
    let mut res = verify_dbar(&v, data)?;
    let mut used = 0;
    for _ in 0..opts.sweeps {
        if res.max_rel < RESIDUAL_TOLERANCE * 1e-3 {
            break;
        }
        let dv = v.dbar();
        let mut defect = data.clone();
        for i in 0..defect.values.len() {
            defect.mask[i] = data.mask[i] && dv.mask[i];
            defect.values[i] = if defect.mask[i] { data.values[i] - dv.values[i] } else { Complex64::new(0.0, 0.0) };
        }
        let next = v.add(&transform.apply(&defect, opts.cell_correction)?)?;
        let next_res = verify_dbar(&next, data)?;
        if next_res.max_rel >= res.max_rel {
            break;
        }
        v = next;
        res = next_res;
        used += 1;
    }
    let raw_symmetry_defect = v.symmetry_defect();
    let v = v.symmetrize();
    let residual = verify_dbar(&v, data)?;
    Ok(DbarSolution { sup_v: v.sup_norm(), v, residual, raw_symmetry_defect, sweeps_used: used })
}

/// Solves `dbar v = dbar_h V`.
pub fn solve_dbar(v_field: &GridField, opts: DbarOptions) -> Result<DbarSolution> {
    let transform = CauchyTransform::new(v_field.grid);
    let data = fill_masked(&v_field.dbar());
    solve_dbar_data(&transform, &data, opts)
}

/// `kappa = V - v` and its measured bounds.
#[derive(Debug, Clone)]
pub struct Kappa {
    pub kappa: GridField,
    pub sup_re: f64,
    pub dbar_max: f64,
    pub symmetry_defect: f64,
    pub exp_sup: f64,
    pub exp_neg_sup: f64,
}

pub fn make_kappa(v_field: &GridField, sol: &DbarSolution) -> Result<Kappa> {
    let kappa = v_field.sub(&sol.v)?;
    let db = kappa.dbar();
    let g = kappa.grid;
    let mut dbar_max: f64 = 0.0;
    for k in 1..g.ny - 1 {
        for j in 1..g.nx - 1 {
            let i = g.index(j, k);
            if db.mask[i] {
                dbar_max = dbar_max.max(db.values[i].norm());
            }
        }
    }
    let sup_re = kappa.sup_re();
    let (lo, hi) = kappa
        .values
        .iter()
        .zip(&kappa.mask)
        .filter(|(_, m)| **m)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (v, _)| (lo.min(v.re), hi.max(v.re)));
    Ok(Kappa { symmetry_defect: kappa.symmetry_defect(), exp_sup: hi.exp(), exp_neg_sup: (-lo).exp(), sup_re, dbar_max, kappa })
}

/// Checks the solver's residual and the analyticity of `kappa` against the fixed tolerances.
pub fn check_dbar(sol: &DbarSolution, kappa: &Kappa) -> Result<()> {
    if !(sol.residual.max_rel < RESIDUAL_TOLERANCE) {
        return Err(Error::Tolerance {
            stage: "dbar",
            detail: format!("relative residual {:.3e} exceeds {:.0e}", sol.residual.max_rel, RESIDUAL_TOLERANCE),
        });
    }
    if !(kappa.dbar_max < ANALYTICITY_TOLERANCE) {
        return Err(Error::Tolerance {
            stage: "kappa",
            detail: format!("max |dbar kappa| = {:.3e} exceeds {:.0e}", kappa.dbar_max, ANALYTICITY_TOLERANCE),
        });
    }
    Ok(())
}

/// Exact `(1/pi) * integral over [x0,x1] x [y0,y1] of dA(zeta)/(z - zeta)`.
pub fn rectangle_cauchy(x0: f64, x1: f64, y0: f64, y1: f64, z: Complex64) -> Complex64 {
    fn g1(x: f64, y: f64) -> f64 {
        let r2 = x * x + y * y;
        let l = if y == 0.0 || r2 == 0.0 { 0.0 } else { 0.5 * y * r2.ln() };
        let a = if x == 0.0 { 0.0 } else { x * (y / x).atan() };
        l + a
    }
    let corner = |x: f64, y: f64| Complex64::new(g1(x, y), -g1(y, x));
    let (xa, xb) = (z.re - x1, z.re - x0);
    let (ya, yb) = (z.im - y1, z.im - y0);
    (corner(xb, yb) - corner(xa, yb) - corner(xb, ya) + corner(xa, ya)) / PI
}
