//! The logarithm of one family product, continued along the grid around its cuts.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::carleson::CarlesonDecomposition;
use crate::error::{Error, Result};
use crate::geometry::{Rect, Segment};
use crate::halfplane::BlaschkeProduct;
use crate::slits::{Disc, PairingKind, SlitOwner, SlitSystem};
use crate::vfield::grid::{Grid, GridField};

use std::f64::consts::PI;

/// Geometry of one summand of `V`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummandSpec {
    pub pairing: usize,
    pub kind: PairingKind,
    pub product: BlaschkeProduct,
    /// Discs where the summand vanishes, radius already floored.
    pub discs: Vec<Disc>,
    /// Region rectangles where the summand vanishes.
    pub rects: Vec<Rect>,
    /// Pseudo-hyperbolic width of the neighborhood added around `rects`.
    pub rect_margin: f64,
    /// Axis-parallel cuts, each reaching the real line through the chain it belongs to.
    pub cuts: Vec<Segment>,
    /// Height scale of the family.
    pub scale: f64,
}

impl SummandSpec {
    pub fn is_interior(&self, z: Complex64) -> bool {
        self.discs.iter().any(|d| d.contains(z)) || self.rects.iter().any(|r| r.contains(z) || r.pseudo_distance(z) < self.rect_margin)
    }
}

/// Extends a polyline that stops above the real line by a vertical drop to it.
fn grounded(polyline: &[Segment]) -> Vec<Segment> {
    let mut out = polyline.to_vec();
    if let Some(last) = polyline.last() {
        if last.b.im > 0.0 {
            out.push(Segment::new(last.b, Complex64::new(last.b.re, 0.0)));
        }
    }
    out
}

/// One spec per pairing. Disc radii are raised to `radius_floor` so that sub-grid discs keep a
/// resolution-independent size.
pub fn summand_specs(d: &CarlesonDecomposition, sys: &SlitSystem, radius_floor: f64) -> Result<Vec<SummandSpec>> {
    let mut out = Vec::with_capacity(sys.pairings.len());
    for p in &sys.pairings {
        let product = BlaschkeProduct::general(p.zeros.clone())?;
        let discs = p.discs.iter().map(|c| Disc { center: c.center, radius: c.radius.max(radius_floor) }).collect();
        let rects: Vec<Rect> = p.components.iter().flat_map(|&c| d.components[c].rects.iter().copied()).collect();
        let mut cuts = Vec::new();
        for s in &p.connectors {
            cuts.extend(grounded(&s.polyline));
        }
        for s in &sys.slits {
            if let SlitOwner::Component(c) = s.owner {
                if p.components.contains(&c) {
                    cuts.extend(grounded(&s.polyline));
                }
            }
        }
        out.push(SummandSpec {
            pairing: p.id,
            kind: p.kind,
            product,
            discs,
            rects,
            rect_margin: 0.01 * sys.delta_prime,
            cuts,
            scale: p.scale(),
        });
    }
    Ok(out)
}

/// Raw `phi` of one family with the bookkeeping needed for mollification.
#[derive(Debug, Clone)]
pub struct Phi {
    pub field: GridField,
    /// Nodes where `phi` is set to 0.
    pub interior: Vec<bool>,
    /// Axis nodes lying on a cut; only the real part is kept there.
    pub axis_cut: Vec<bool>,
    /// Nodes next to a discontinuity of `phi`.
    pub jump: Vec<bool>,
    /// Connected pieces of the cut complement in the right half.
    pub pieces: usize,
}

/// `sum_a Arg((v - a)/(u - a)) - Arg((v - conj a)/(u - conj a))`: the exact change of
/// `Arg Theta` along the straight edge from `u` to `v`.
fn arg_increment(zeros: &[Complex64], u: Complex64, v: Complex64, near: f64) -> f64 {
    let mut s = 0.0;
    for a in zeros {
        let (r, q) = ((v - a) / (u - a), (v - a.conj()) / (u - a.conj()));
        if (u - a).norm() > near {
            s += (r * q.conj()).arg();
        } else {
            s += r.arg() - q.arg();
        }
    }
    s
}

/// Blocked-edge tables for axis-parallel cuts, after a tiny common shift that puts every cut
/// off the grid lines.
struct Blocks {
    /// `horizontal[index(j, k)]`: edge from `(j, k)` to `(j + 1, k)`.
    horizontal: Vec<bool>,
    /// `vertical[index(j, k)]`: edge from `(j, k)` to `(j, k + 1)`.
    vertical: Vec<bool>,
}

fn rasterize_cuts(grid: &Grid, cuts: &[Segment], zeros: &[Complex64]) -> Result<Blocks> {
    let g = grid;
    let mut b = Blocks { horizontal: vec![false; g.len()], vertical: vec![false; g.len()] };
    let ex = 1e-7 * g.hx;
    let ey = 1.3e-7 * g.hy;
    let col = |x: f64| (x + g.half_width) / g.hx;
    let row = |y: f64| y / g.hy - 1.0;
    for s in cuts {
        if s.is_vertical() {
            let c = col(s.a.re + ex);
            if c < 0.0 || c >= (g.nx - 1) as f64 {
                return Err(Error::GridTooSmall(format!("cut at x = {} leaves the grid", s.a.re)));
            }
            let j = c.floor() as usize;
            let (y0, y1) = (s.a.im.min(s.b.im) + ey, s.a.im.max(s.b.im) + ey);
            for k in 0..g.ny {
                let y = g.y(k);
                if y0 <= y && y <= y1 {
                    b.horizontal[g.index(j, k)] = true;
                }
            }
        } else if s.is_horizontal() {
            let r = row(s.a.im + ey);
            if r >= (g.ny - 1) as f64 {
                return Err(Error::GridTooSmall(format!("cut at y = {} leaves the grid", s.a.im)));
            }
            if r < 0.0 {
                continue;
            }
            let k = r.floor() as usize;
            let (x0, x1) = (s.a.re.min(s.b.re) + ex, s.a.re.max(s.b.re) + ex);
            for j in 0..g.nx {
                let x = g.x(j);
                if x0 <= x && x <= x1 {
                    b.vertical[g.index(j, k)] = true;
                }
            }
        } else {
            return Err(Error::SlitGeometry(format!("cut {s:?} is not axis-parallel")));
        }
    }
    // an edge through a zero has no well-defined argument change
    for a in zeros {
        let (u, v) = (col(a.re), row(a.im));
        if v < 0.0 || u < 0.0 || u > (g.nx - 1) as f64 || v > (g.ny - 1) as f64 {
            continue;
        }
        if (u - u.round()).abs() < 1e-9 && v.floor() < (g.ny - 1) as f64 {
            b.vertical[g.index(u.round() as usize, v.floor() as usize)] = true;
        }
        if (v - v.round()).abs() < 1e-9 && u.floor() < (g.nx - 1) as f64 {
            b.horizontal[g.index(u.floor() as usize, v.round() as usize)] = true;
        }
    }
    Ok(b)
}

/// `log Theta` on the cut complement: `Re = log |Theta|`, `Im` continued edge by edge with
/// exact argument increments. Pieces meeting the axis are anchored to `Im = 0` there; other
/// pieces take the branch closest to an anchored neighbor across a cut. Computed on the right
/// half and reflected.
pub fn summand_phi(spec: &SummandSpec, grid: &Grid) -> Result<Phi> {
    let g = *grid;
    let n = g.len();
    let jc = g.axis_column();
    let zeros = spec.product.zeros();
    let blocks = rasterize_cuts(&g, &spec.cuts, zeros)?;
    let near = 4.0 * g.hx.max(g.hy);

    let mut interior = vec![false; n];
    let mut axis_cut = vec![false; n];
    for k in 0..g.ny {
        for j in jc..g.nx {
            let z = g.point(j, k);
            let i = g.index(j, k);
            interior[i] = spec.is_interior(z);
            if j == jc && !interior[i] {
                axis_cut[i] =
                    spec.cuts.iter().any(|s| s.is_vertical() && s.a.re == 0.0 && s.a.im.min(s.b.im) <= z.im && z.im <= s.a.im.max(s.b.im));
            }
        }
    }
    let active = |i: usize| !interior[i] && !axis_cut[i];

    // neighbors of (j, k) in the right half with the blocked flag of the connecting edge
    let neighbors = |i: usize| -> [(Option<usize>, bool); 4] {
        let (j, k) = g.coords(i);
        [
            if j + 1 < g.nx { (Some(g.index(j + 1, k)), blocks.horizontal[i]) } else { (None, true) },
            if j > jc { (Some(g.index(j - 1, k)), blocks.horizontal[g.index(j - 1, k)]) } else { (None, true) },
            if k + 1 < g.ny { (Some(g.index(j, k + 1)), blocks.vertical[i]) } else { (None, true) },
            if k > 0 { (Some(g.index(j, k - 1)), blocks.vertical[g.index(j, k - 1)]) } else { (None, true) },
        ]
    };

    let mut im = vec![0.0; n];
    let mut piece = vec![usize::MAX; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for k in (0..g.ny).rev() {
        for j in jc..g.nx {
            let s = g.index(j, k);
            if !active(s) || piece[s] != usize::MAX {
                continue;
            }
            let id = members.len();
            let mut list = vec![s];
            piece[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for (v, blocked) in neighbors(u) {
                    let Some(v) = v else { continue };
                    if blocked || !active(v) || piece[v] != usize::MAX {
                        continue;
                    }
                    piece[v] = id;
                    im[v] = im[u] + arg_increment(zeros, g.point_of(u), g.point_of(v), near);
                    list.push(v);
                    queue.push_back(v);
                }
            }
            members.push(list);
        }
    }

    // anchoring
    let mut offset: Vec<Option<f64>> = vec![None; members.len()];
    for (id, list) in members.iter().enumerate() {
        let axis: Vec<usize> = list.iter().copied().filter(|&i| g.coords(i).0 == jc).collect();
        let Some(&top) = axis.iter().max_by_key(|&&i| g.coords(i).1) else { continue };
        let value = spec.product.eval(g.point_of(top));
        if value.re <= 0.0 {
            return Err(Error::Branch(format!(
                "family product is not positive on the axis at {} (pairing {})",
                g.point_of(top),
                spec.pairing
            )));
        }
        let off = -im[top];
        for &i in &axis {
            if (im[i] + off).abs() > 1e-6 {
                return Err(Error::Branch(format!(
                    "argument {} at axis node {} after anchoring (pairing {})",
                    im[i] + off,
                    g.point_of(i),
                    spec.pairing
                )));
            }
        }
        offset[id] = Some(off);
    }
    loop {
        let mut progress = false;
        let mut pending = false;
        for id in 0..members.len() {
            if offset[id].is_some() {
                continue;
            }
            pending = true;
            'search: for &u in &members[id] {
                for (v, _) in neighbors(u) {
                    let Some(v) = v else { continue };
                    if !active(v) || piece[v] == id {
                        continue;
                    }
                    if let Some(ov) = offset[piece[v]] {
                        let target = im[v] + ov;
                        let principal = spec.product.eval(g.point_of(u)).arg();
                        let base = principal - im[u];
                        let k = ((target - (im[u] + base)) / (2.0 * PI)).round();
                        offset[id] = Some(base + 2.0 * PI * k);
                        progress = true;
                        break 'search;
                    }
                }
            }
        }
        if !pending {
            break;
        }
        if !progress {
            // an isolated piece: principal value at its seed
            let id = (0..members.len()).find(|&id| offset[id].is_none()).unwrap();
            let s = members[id][0];
            offset[id] = Some(spec.product.eval(g.point_of(s)).arg() - im[s]);
        }
    }

    let mut field = GridField::zeros(g);
    for k in 0..g.ny {
        for j in jc..g.nx {
            let i = g.index(j, k);
            let z = g.point(j, k);
            field.values[i] = if interior[i] {
                Complex64::new(0.0, 0.0)
            } else if axis_cut[i] {
                Complex64::new(spec.product.log_abs(z), 0.0)
            } else {
                let v = if j == jc { 0.0 } else { im[i] + offset[piece[i]].unwrap() };
                Complex64::new(spec.product.log_abs(z), v)
            };
        }
    }

    // continuity along every open edge
    let mut jump = vec![false; n];
    for i in 0..n {
        let (j, _) = g.coords(i);
        if j < jc {
            continue;
        }
        for (v, blocked) in neighbors(i) {
            let Some(v) = v else { continue };
            if active(i) && active(v) && !blocked {
                let expect = arg_increment(zeros, g.point_of(i), g.point_of(v), near);
                let got = field.values[v].im - field.values[i].im;
                if (got - expect).abs() > 1e-6 {
                    return Err(Error::Branch(format!(
                        "winding detected between {} and {} (pairing {})",
                        g.point_of(i),
                        g.point_of(v),
                        spec.pairing
                    )));
                }
            } else if active(i) != active(v) || blocked || interior[i] != interior[v] || axis_cut[i] != axis_cut[v] {
                jump[i] = true;
                jump[v] = true;
            }
        }
    }

    for k in 0..g.ny {
        for j in 0..jc {
            let m = g.index(g.mirror_column(j), k);
            let i = g.index(j, k);
            field.values[i] = field.values[m].conj();
            interior[i] = interior[m];
            axis_cut[i] = axis_cut[m];
            jump[i] = jump[m];
        }
    }
    Ok(Phi { field, interior, axis_cut, jump, pieces: members.len() })
}

impl Grid {
    pub fn point_of(&self, idx: usize) -> Complex64 {
        let (j, k) = self.coords(idx);
        self.point(j, k)
    }
}
