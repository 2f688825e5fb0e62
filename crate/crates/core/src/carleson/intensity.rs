//! Carleson intensity `sup_I mu(Q(I)) / |I|` of discrete measures.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::Segment;

/// A weighted point in the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub point: Complex64,
    pub weight: f64,
}

/// Finite sum of point masses.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PointMassMeasure {
    pub atoms: Vec<Atom>,
}

impl PointMassMeasure {
    /// `sum Im a delta_a` over the given points.
    pub fn from_zeros(zeros: &[Complex64]) -> Self {
        PointMassMeasure { atoms: zeros.iter().map(|a| Atom { point: *a, weight: a.im }).collect() }
    }

    /// Arc-length measure of polylines, discretised into atoms of length at most `step`.
    pub fn from_segments(segments: &[Segment], step: f64) -> Self {
        let mut atoms = Vec::new();
        for s in segments {
            let len = s.len();
            let n = ((len / step).ceil() as usize).max(1);
            for k in 0..n {
                let t = (k as f64 + 0.5) / n as f64;
                atoms.push(Atom { point: s.a + (s.b - s.a) * t, weight: len / n as f64 });
            }
        }
        PointMassMeasure { atoms }
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Mass of the Carleson square over `[lo, hi]`.
    pub fn square_mass(&self, lo: f64, hi: f64) -> f64 {
        let l = hi - lo;
        self.atoms.iter().filter(|a| lo <= a.point.re && a.point.re <= hi && a.point.im > 0.0 && a.point.im <= l).map(|a| a.weight).sum()
    }
}

/// Value and maximising square of [`carleson_intensity`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Intensity {
    pub value: f64,
    pub base_lo: f64,
    pub base_hi: f64,
}

/// Exact intensity of a point-mass measure.
///
/// A maximising square can be shrunk until its length is `max(Re a - x, Im a)` for some captured
/// atom `a` and slid until one endpoint `x` sits at an atom abscissa. For each candidate left
/// endpoint the atoms enter in order of that key, so one sort and a prefix sum cover every
/// candidate; right endpoints are handled by reflection.
pub fn carleson_intensity(measure: &PointMassMeasure) -> Intensity {
    let atoms: Vec<Atom> = measure.atoms.iter().copied().filter(|a| a.point.im > 0.0 && a.weight > 0.0).collect();
    let mut best = Intensity { value: 0.0, base_lo: 0.0, base_hi: 0.0 };
    if atoms.is_empty() {
        return best;
    }
    for reflect in [false, true] {
        let pts: Vec<(f64, f64, f64)> =
            atoms.iter().map(|a| (if reflect { -a.point.re } else { a.point.re }, a.point.im, a.weight)).collect();
        let mut starts: Vec<f64> = pts.iter().map(|p| p.0).collect();
        starts.sort_by(f64::total_cmp);
        starts.dedup();
        let mut keyed: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
        for &x in &starts {
            keyed.clear();
            keyed.extend(pts.iter().filter(|p| p.0 >= x).map(|p| ((p.0 - x).max(p.1), p.2)));
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut mass = 0.0;
            for (i, &(key, w)) in keyed.iter().enumerate() {
                mass += w;
                if i + 1 < keyed.len() && keyed[i + 1].0 == key {
                    continue;
                }
                let ratio = mass / key;
                if ratio > best.value {
                    let (lo, hi) = if reflect { (-(x + key), -x) } else { (x, x + key) };
                    best = Intensity { value: ratio, base_lo: lo, base_hi: hi };
                }
            }
        }
    }
    best
}

/// Node masses on a rectangular grid with columns `xs` (increasing) and rows `ys` (increasing,
/// positive). `mass[k * xs.len() + j]` sits at `(xs[j], ys[k])`.
#[derive(Debug, Clone)]
pub struct GridMeasure<'a> {
    pub xs: &'a [f64],
    pub ys: &'a [f64],
    pub mass: &'a [f64],
}

/// Intensity of a grid measure over all squares whose base runs between two grid columns.
///
/// Column-aligned bases and a two-dimensional prefix sum make every candidate O(1).
pub fn grid_intensity(m: &GridMeasure) -> Intensity {
    let (nx, ny) = (m.xs.len(), m.ys.len());
    assert_eq!(m.mass.len(), nx * ny);
    // prefix[k][j] = mass of rows < k, columns < j
    let mut prefix = vec![0.0; (ny + 1) * (nx + 1)];
    for k in 0..ny {
        let mut row = 0.0;
        for j in 0..nx {
            row += m.mass[k * nx + j];
            prefix[(k + 1) * (nx + 1) + j + 1] = prefix[k * (nx + 1) + j + 1] + row;
        }
    }
    let rect_mass = |j0: usize, j1: usize, k1: usize| {
        // columns j0..=j1, rows 0..k1
        prefix[k1 * (nx + 1) + j1 + 1] - prefix[k1 * (nx + 1) + j0]
    };
    let mut best = Intensity { value: 0.0, base_lo: 0.0, base_hi: 0.0 };
    for j0 in 0..nx {
        let mut k1 = 0;
        for j1 in (j0 + 1)..nx {
            let l = m.xs[j1] - m.xs[j0];
            while k1 < ny && m.ys[k1] <= l {
                k1 += 1;
            }
            let ratio = rect_mass(j0, j1, k1) / l;
            if ratio > best.value {
                best = Intensity { value: ratio, base_lo: m.xs[j0], base_hi: m.xs[j1] };
            }
        }
    }
    best
}
