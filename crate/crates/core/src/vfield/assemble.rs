//! Assembly of `V` from its summands and the measured certificates on it.

use std::collections::VecDeque;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::carleson::{grid_intensity, CarlesonDecomposition, GridMeasure};
use crate::error::{Error, Result};
use crate::halfplane::BlaschkeProduct;
use crate::slits::{PairingKind, SlitSystem};
use crate::vfield::grid::{Grid, GridField};
use crate::vfield::mollify::mollify;
use crate::vfield::summand::{summand_phi, summand_specs, SummandSpec};

/// Per-summand measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummandReport {
    pub pairing: usize,
    pub kind: PairingKind,
    pub degree: usize,
    pub pieces: usize,
    pub mollified_nodes: usize,
    pub sup_re: f64,
    /// `max |dbar V_s| * scale` and `max |Laplacian V_s| * scale^2`.
    pub dbar_scaled: f64,
    pub laplacian_scaled: f64,
    /// Largest `|Im V_s|` on the axis.
    pub axis_im: f64,
}

/// Measured properties of `V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VCertificates {
    pub sup_re: f64,
    pub laplacian_intensity: f64,
    pub gradient_intensity: f64,
    pub closeness_nodes: usize,
    pub closeness_max: f64,
    pub closeness_at_q_zeros: f64,
    pub treil_max: f64,
    pub symmetry_defect: f64,
}

#[derive(Debug, Clone)]
pub struct VField {
    pub v: GridField,
    pub summands: Vec<SummandReport>,
    pub specs: Vec<SummandSpec>,
    pub certificates: VCertificates,
    pub radius: f64,
}

/// Smallest mollifier and disc radius on a grid of half-width `2L`: six steps of the
/// 512-column grid, and never fewer than six steps of `grid`.
pub fn radius_floor(grid: &Grid) -> f64 {
    6.0 * grid.hx.max(2.0 * grid.half_width / 512.0)
}

/// Nodewise sum; all fields must share one grid.
pub fn assemble_v(grid: Grid, summands: &[GridField]) -> Result<GridField> {
    let mut v = GridField::zeros(grid);
    for s in summands {
        v = v.add(s)?;
    }
    Ok(v)
}

/// Builds every summand, mollifies it with `radius` (floored per family by `delta'/100 * scale`)
/// and sums them.
pub fn build_v(
    grid: Grid,
    d: &CarlesonDecomposition,
    sys: &SlitSystem,
    p: &BlaschkeProduct,
    q: &BlaschkeProduct,
    radius: f64,
) -> Result<VField> {
    let specs = summand_specs(d, sys, radius)?;
    let mut fields = Vec::with_capacity(specs.len());
    let mut reports = Vec::with_capacity(specs.len());
    for spec in &specs {
        let phi = summand_phi(spec, &grid)?;
        let r = radius.max(0.01 * sys.delta_prime * spec.scale);
        let (field, mollified_nodes) = mollify(&phi, r)?;
        let jc = grid.axis_column();
        let axis_im = (0..grid.ny).map(|k| field.get(jc, k).im.abs()).fold(0.0, f64::max);
        reports.push(SummandReport {
            pairing: spec.pairing,
            kind: spec.kind,
            degree: spec.product.degree(),
            pieces: phi.pieces,
            mollified_nodes,
            sup_re: field.sup_re(),
            dbar_scaled: field.dbar().sup_norm() * spec.scale,
            laplacian_scaled: field.laplacian().sup_norm() * spec.scale * spec.scale,
            axis_im,
        });
        fields.push(field);
    }
    let v = assemble_v(grid, &fields)?;
    if !v.all_finite() {
        return Err(Error::Branch("V has non-finite values".into()));
    }
    let certificates = certify(&v, &specs, p, q, sys.delta_prime);
    Ok(VField { v, summands: reports, specs, certificates, radius })
}

fn intensity_of(grid: &Grid, field: &GridField, weight: impl Fn(Complex64, f64) -> f64) -> f64 {
    let xs = grid.xs();
    let ys = grid.ys();
    let mass: Vec<f64> =
        (0..grid.len()).map(|i| if field.mask[i] { weight(grid.point_of(i), field.values[i].norm()) } else { 0.0 }).collect();
    grid_intensity(&GridMeasure { xs: &xs, ys: &ys, mass: &mass }).value
}

/// Imaginary part reduced into `(-pi, pi]`.
pub fn reduce_im(z: Complex64) -> Complex64 {
    let mut im = z.im % (2.0 * PI);
    if im > PI {
        im -= 2.0 * PI;
    } else if im <= -PI {
        im += 2.0 * PI;
    }
    Complex64::new(z.re, im)
}

/// `|log p - V|` on `{|q| < delta'}` with `log p` continued within each 4-connected component of
/// that node set, then shifted by the multiple of `2 pi i` that best matches `V` there.
fn closeness(v: &GridField, p: &BlaschkeProduct, q: &BlaschkeProduct, delta_prime: f64) -> (usize, f64, f64) {
    let g = v.grid;
    let inside: Vec<bool> = (0..g.len()).map(|i| q.eval(g.point_of(i)).norm() < delta_prime).collect();
    let mut seen = vec![false; g.len()];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for s in 0..g.len() {
        if !inside[s] || seen[s] {
            continue;
        }
        let mut comp = vec![(s, p.eval(g.point_of(s)).ln())];
        seen[s] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(ci) = queue.pop_front() {
            let (u, lu) = comp[ci];
            let (j, k) = g.coords(u);
            let mut nb = Vec::with_capacity(4);
            if j + 1 < g.nx {
                nb.push(g.index(j + 1, k));
            }
            if j > 0 {
                nb.push(g.index(j - 1, k));
            }
            if k + 1 < g.ny {
                nb.push(g.index(j, k + 1));
            }
            if k > 0 {
                nb.push(g.index(j, k - 1));
            }
            for w in nb {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    let raw = p.eval(g.point_of(w)).ln();
                    let k = ((lu.im - raw.im) / (2.0 * PI)).round();
                    comp.push((w, Complex64::new(raw.re, raw.im + 2.0 * PI * k)));
                    queue.push_back(comp.len() - 1);
                }
            }
        }
        let mean_gap: f64 = comp.iter().map(|(i, l)| v.values[*i].im - l.im).sum::<f64>() / comp.len() as f64;
        let shift = 2.0 * PI * (mean_gap / (2.0 * PI)).round();
        for (i, l) in &comp {
            worst = worst.max((Complex64::new(l.re, l.im + shift) - v.values[*i]).norm());
        }
        count += comp.len();
    }
    let mut at_zeros: f64 = 0.0;
    for b in q.zeros() {
        if let Some(vb) = v.bilinear(*b) {
            at_zeros = at_zeros.max(reduce_im(p.eval(*b).ln() - vb).norm());
        }
    }
    (count, worst, at_zeros)
}

fn certify(v: &GridField, specs: &[SummandSpec], p: &BlaschkeProduct, q: &BlaschkeProduct, dp: f64) -> VCertificates {
    let g = v.grid;
    let area = g.hx * g.hy;
    let laplacian_intensity = intensity_of(&g, &v.laplacian(), |z, m| m * z.im * area);
    let gradient_intensity = intensity_of(&g, &v.d(), |_, m| m * area);
    let (closeness_nodes, closeness_max, closeness_at_q_zeros) = closeness(v, p, q, dp);
    let mut treil_max: f64 = 0.0;
    for i in 0..g.len() {
        let z = g.point_of(i);
        let s: f64 = specs.iter().map(|sp| 1.0 - sp.product.eval(z).norm_sqr()).sum();
        treil_max = treil_max.max(s);
    }
    VCertificates {
        sup_re: v.sup_re(),
        laplacian_intensity,
        gradient_intensity,
        closeness_nodes,
        closeness_max,
        closeness_at_q_zeros,
        treil_max,
        symmetry_defect: v.symmetry_defect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carleson::{build_generations, DecompositionOptions};
    use crate::slits::build_slit_system;

    fn instance(zeros: Vec<Complex64>, qz: &[f64], dp: f64, n: usize) -> (Grid, VField, BlaschkeProduct) {
        let p = BlaschkeProduct::new(zeros).unwrap();
        let q = BlaschkeProduct::new(qz.iter().map(|y| Complex64::new(0.0, *y)).collect()).unwrap();
        let d = build_generations(&p, &q, dp, DecompositionOptions::default()).unwrap();
        let sys = build_slit_system(&d, &q, dp).unwrap();
        let grid = Grid::new(n, 2.0 * d.half_width, 2.0 * d.half_width).unwrap();
        let radius = radius_floor(&Grid::new(128, 2.0 * d.half_width, 2.0 * d.half_width).unwrap());
        let vf = build_v(grid, &d, &sys, &p, &q, radius).unwrap();
        (grid, vf, p)
    }

    #[test]
    fn empty_summand_list_gives_zero() {
        let g = Grid::new(8, 1.0, 1.0).unwrap();
        assert_eq!(assemble_v(g, &[]).unwrap(), GridField::zeros(g));
        let other = Grid::new(16, 1.0, 1.0).unwrap();
        assert!(matches!(assemble_v(g, &[GridField::zeros(other)]), Err(Error::GridMismatch)));
    }

    #[test]
    fn two_pairs_add_log_moduli_far_up_the_axis() {
        let zeros = vec![Complex64::new(1.0, 0.5), Complex64::new(-1.0, 0.5), Complex64::new(0.5, 1.5), Complex64::new(-0.5, 1.5)];
        let (grid, vf, p) = instance(zeros, &[3.0], 0.05, 128);
        assert_eq!(vf.summands.len(), 2);
        let k = grid.ny - 1;
        let z = grid.point(grid.axis_column(), k);
        assert!((vf.v.get(grid.axis_column(), k).re - p.log_abs(z)).abs() < 1e-12);
        assert_eq!(vf.certificates.symmetry_defect, 0.0);
        assert!(vf.certificates.sup_re.is_finite());
        assert!(vf.certificates.treil_max.is_finite());
    }

    #[test]
    fn certificates_are_stable_under_refinement() {
        let zeros = vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 3.0)];
        let (_, a, _) = instance(zeros.clone(), &[2.0], 0.05, 128);
        let (_, b, _) = instance(zeros, &[2.0], 0.05, 256);
        let drift = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs());
        assert!(drift(a.certificates.sup_re, b.certificates.sup_re) < 0.15);
        assert!(
            drift(a.certificates.gradient_intensity, b.certificates.gradient_intensity) < 0.15,
            "{:?} {:?}",
            a.certificates,
            b.certificates
        );
    }
}
