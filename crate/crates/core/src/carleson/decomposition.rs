//! Symmetric generations of stopping intervals, their regions, and the components of the union.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::carleson::intensity::{carleson_intensity, PointMassMeasure};
use crate::carleson::stopping::{stopping_intervals, top_half_witness, StoppingResult};
use crate::error::{Error, Result};
use crate::geometry::{
    mirror_point, rect_components, sort_intervals, total_length, union_boundary, union_contains, Interval, Rect, Segment,
};
use crate::halfplane::blaschke::BlaschkeProduct;

/// Hard cap on the number of generations.
pub const MAX_GENERATIONS: usize = 64;
const MAX_DYADIC_DEPTH: usize = 60;

/// The mass threshold used when none is configured: `max(200 log(1/delta'), 1)` with a 1% margin.
pub fn default_mass_threshold(delta_prime: f64) -> f64 {
    (200.0 * (1.0 / delta_prime).ln()).max(1.0) * 1.01
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DecompositionOptions {
    /// Overrides [`default_mass_threshold`].
    pub mass_threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generation {
    pub level: usize,
    pub intervals: Vec<Interval>,
}

/// `U(J)`: the square over `J` with the squares over its dyadic children removed, stored as one
/// rectangle `[J'] x [|J'|, |J|]` per child.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub generation: usize,
    pub interval: Interval,
    pub children: Vec<Interval>,
    pub rects: Vec<Rect>,
}

/// A connected component of the union of all regions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub id: usize,
    pub regions: Vec<usize>,
    pub rects: Vec<Rect>,
    pub zeros: Vec<Complex64>,
    /// Id of the reflected component; equal to `id` for self-symmetric components.
    pub mirror: usize,
    pub boundary: Vec<Segment>,
    pub perimeter: f64,
}

impl Component {
    pub fn is_self_symmetric(&self) -> bool {
        self.mirror == self.id
    }

    pub fn axis_zero_count(&self) -> usize {
        self.zeros.iter().filter(|a| a.re == 0.0).count()
    }

    /// Lowest and highest point of the component on the imaginary axis.
    pub fn axis_span(&self) -> Option<(f64, f64)> {
        let on_axis: Vec<&Rect> = self.rects.iter().filter(|r| r.x0 <= 0.0 && 0.0 <= r.x1).collect();
        if on_axis.is_empty() {
            return None;
        }
        let lo = on_axis.iter().map(|r| r.y0).fold(f64::INFINITY, f64::min);
        let hi = on_axis.iter().map(|r| r.y1).fold(f64::NEG_INFINITY, f64::max);
        Some((lo, hi))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        union_contains(&self.rects, z)
    }

    /// Children of every region in the component: the bases of the vertical slits.
    pub fn children<'a>(&'a self, regions: &'a [Region]) -> impl Iterator<Item = Interval> + 'a {
        self.regions.iter().flat_map(move |&r| regions[r].children.iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarlesonDecomposition {
    /// Half-width `L` of the base interval `(-L, L)`.
    pub half_width: f64,
    pub mass_threshold: f64,
    pub eta: f64,
    pub generations: Vec<Generation>,
    pub regions: Vec<Region>,
    pub components: Vec<Component>,
    pub sigma1: Vec<Complex64>,
    /// Every stopping-time call with its re-verified properties.
    pub stopping: Vec<StoppingResult>,
    /// Largest sampled `|p|` inside the union of regions.
    pub region_max_modulus: f64,
    /// Intensity of arc length on the boundary of the union.
    pub boundary_intensity: f64,
    /// Intensity of `sum_{sigma_1} Im a delta_a`.
    pub sigma1_intensity: f64,
}

impl CarlesonDecomposition {
    fn empty(half_width: f64, mass_threshold: f64, eta: f64) -> Self {
        CarlesonDecomposition {
            half_width,
            mass_threshold,
            eta,
            generations: Vec::new(),
            regions: Vec::new(),
            components: Vec::new(),
            sigma1: Vec::new(),
            stopping: Vec::new(),
            region_max_modulus: 0.0,
            boundary_intensity: 0.0,
            sigma1_intensity: 0.0,
        }
    }

    pub fn all_rects(&self) -> Vec<Rect> {
        self.components.iter().flat_map(|c| c.rects.iter().copied()).collect()
    }

    /// Component holding `z`, if any.
    pub fn component_of(&self, z: Complex64) -> Option<usize> {
        self.components.iter().position(|c| c.contains(z))
    }

    /// Boundary of the union of all regions.
    pub fn boundary(&self) -> Vec<Segment> {
        self.components.iter().flat_map(|c| c.boundary.iter().copied()).collect()
    }
}

/// Smallest power of two `L >= 4 max(|Re a| + Im a)`.
pub fn base_half_width(p: &BlaschkeProduct) -> f64 {
    let m = p.zeros().iter().map(|a| a.re.abs() + a.im).fold(0.0, f64::max);
    if m == 0.0 {
        return 1.0;
    }
    2f64.powi((4.0 * m).log2().ceil() as i32)
}

/// Mirrors right-half intervals and merges an interval with its reflection when they meet at 0.
///
/// An interval equal to one of the `bases` it was selected in stays unmerged, since the merged
/// interval would repeat the parent.
fn symmetrize_generation(right: Vec<Interval>, bases: &[Interval]) -> Vec<Interval> {
    let mut out = Vec::with_capacity(2 * right.len());
    for j in right {
        if j.lo <= 0.0 && !bases.contains(&j) {
            out.push(Interval::new(-j.hi, j.hi));
        } else {
            out.push(j);
            out.push(j.mirror());
        }
    }
    sort_intervals(&mut out);
    out.dedup();
    out
}

/// Maximal dyadic subintervals of `k` (including `k`) whose top half has a sample with `|p| > eta`.
fn dyadic_cover(p: &BlaschkeProduct, k: Interval, eta: f64, out: &mut Vec<Interval>, depth: usize) -> Result<()> {
    if depth > MAX_DYADIC_DEPTH {
        return Err(Error::Degenerate(format!("dyadic cover did not terminate near {k:?}")));
    }
    if top_half_witness(p, k).0 > eta {
        out.push(k);
        return Ok(());
    }
    let (l, r) = k.halves();
    dyadic_cover(p, l, eta, out, depth + 1)?;
    dyadic_cover(p, r, eta, out, depth + 1)
}

/// `D(J)` for `J` in the right half or self-symmetric, computed on the right half and mirrored.
fn children_of(p: &BlaschkeProduct, j: Interval, eta: f64) -> Result<Vec<Interval>> {
    let mut right = Vec::new();
    if j.is_self_symmetric() {
        dyadic_cover(p, Interval::new(0.0, j.hi), eta, &mut right, 0)?;
        let mut all: Vec<Interval> = right.iter().map(Interval::mirror).collect();
        all.extend(right);
        sort_intervals(&mut all);
        Ok(all)
    } else {
        let (l, r) = j.halves();
        dyadic_cover(p, l, eta, &mut right, 0)?;
        dyadic_cover(p, r, eta, &mut right, 0)?;
        sort_intervals(&mut right);
        Ok(right)
    }
}

/// Builds the symmetric decomposition of `p` with stopping parameter `eta = delta'`.
///
/// Only intervals in the closed right half are processed; left-half intervals, children and
/// regions are exact mirror images.
pub fn build_generations(
    p: &BlaschkeProduct,
    q: &BlaschkeProduct,
    delta_prime: f64,
    options: DecompositionOptions,
) -> Result<CarlesonDecomposition> {
    if !(delta_prime > 0.0 && delta_prime < 1.0) {
        return Err(Error::Degenerate(format!("delta' = {delta_prime} is not in (0, 1)")));
    }
    let mass_threshold = options.mass_threshold.unwrap_or_else(|| default_mass_threshold(delta_prime));
    let mut half_width = base_half_width(p);
    if p.is_empty() {
        return Ok(CarlesonDecomposition::empty(half_width, mass_threshold, delta_prime));
    }
    while top_half_witness(p, Interval::new(0.0, half_width)).0 < delta_prime {
        half_width *= 2.0;
        if half_width > 1e12 {
            return Err(Error::NoTopHalfWitness { eta: delta_prime, best: 0.0 });
        }
    }

    let mut stopping = Vec::new();
    let first = stopping_intervals(p, Interval::new(0.0, half_width), mass_threshold, delta_prime)?;
    let mut current = symmetrize_generation(first.intervals.clone(), &[]);
    stopping.push(first);

    let mut generations = Vec::new();
    let mut regions: Vec<Region> = Vec::new();
    while !current.is_empty() {
        let level = generations.len() + 1;
        if level > MAX_GENERATIONS {
            return Err(Error::GenerationLimit(MAX_GENERATIONS));
        }
        let mut next_right = Vec::new();
        let mut bases = Vec::new();
        for j in &current {
            if j.hi <= 0.0 {
                continue;
            }
            let children = children_of(p, *j, delta_prime)?;
            for child in children.iter().filter(|c| c.lo >= 0.0) {
                let res = stopping_intervals(p, *child, mass_threshold, delta_prime)?;
                next_right.extend(res.intervals.iter().copied());
                bases.push(*child);
                stopping.push(res);
            }
            let make = |interval: Interval, children: Vec<Interval>| {
                let rects = children.iter().map(|c| Rect::new(c.lo, c.hi, c.len(), interval.len())).collect();
                Region { generation: level, interval, children, rects }
            };
            if !j.is_self_symmetric() {
                let mirrored: Vec<Interval> = {
                    let mut m: Vec<Interval> = children.iter().map(Interval::mirror).collect();
                    sort_intervals(&mut m);
                    m
                };
                regions.push(make(j.mirror(), mirrored));
            }
            regions.push(make(*j, children));
        }
        generations.push(Generation { level, intervals: current });
        current = symmetrize_generation(next_right, &bases);
    }
    regions.sort_by(|a, b| {
        a.generation.cmp(&b.generation).then(a.interval.lo.total_cmp(&b.interval.lo)).then(a.interval.hi.total_cmp(&b.interval.hi))
    });

    let (components, sigma1) = extract_components(p, &regions);
    let mut decomposition = CarlesonDecomposition {
        half_width,
        mass_threshold,
        eta: delta_prime,
        generations,
        regions,
        components,
        sigma1,
        stopping,
        region_max_modulus: 0.0,
        boundary_intensity: 0.0,
        sigma1_intensity: 0.0,
    };
    check_regions(p, q, &mut decomposition)?;
    Ok(decomposition)
}

/// Union-find over all region rectangles, then zero membership.
fn extract_components(p: &BlaschkeProduct, regions: &[Region]) -> (Vec<Component>, Vec<Complex64>) {
    let mut rects = Vec::new();
    let mut owner = Vec::new();
    for (i, r) in regions.iter().enumerate() {
        for rect in &r.rects {
            rects.push(*rect);
            owner.push(i);
        }
    }
    let groups = rect_components(&rects);
    let mut components: Vec<Component> = groups
        .iter()
        .enumerate()
        .map(|(id, g)| {
            let crects: Vec<Rect> = g.iter().map(|&i| rects[i]).collect();
            let mut regs: Vec<usize> = g.iter().map(|&i| owner[i]).collect();
            regs.sort_unstable();
            regs.dedup();
            let boundary = union_boundary(&crects);
            let perimeter = total_length(&boundary);
            Component { id, regions: regs, rects: crects, zeros: Vec::new(), mirror: id, boundary, perimeter }
        })
        .collect();
    let mirror_ids: Vec<usize> = components
        .iter()
        .map(|c| {
            let m = c.rects[0].mirror();
            components.iter().position(|d| d.rects.contains(&m)).unwrap_or(c.id)
        })
        .collect();
    for (c, m) in components.iter_mut().zip(mirror_ids) {
        c.mirror = m;
    }
    let mut sigma1 = Vec::new();
    for a in p.zeros() {
        match components.iter_mut().find(|c| c.contains(*a)) {
            Some(c) => c.zeros.push(*a),
            None => sigma1.push(*a),
        }
    }
    (components, sigma1)
}

fn check_regions(p: &BlaschkeProduct, q: &BlaschkeProduct, d: &mut CarlesonDecomposition) -> Result<()> {
    let mut region_max: f64 = 0.0;
    for rect in d.all_rects() {
        for k in 0..8 {
            for j in 0..8 {
                let z = Complex64::new(
                    rect.x0 + (rect.x1 - rect.x0) * (j as f64 + 0.5) / 8.0,
                    rect.y0 + (rect.y1 - rect.y0) * (k as f64 + 0.5) / 8.0,
                );
                region_max = region_max.max(p.eval(z).norm());
            }
        }
    }
    let boundary = d.boundary();
    for s in &boundary {
        for t in 0..=16 {
            let z = s.a + (s.b - s.a) * (t as f64 / 16.0);
            let v = p.eval(z).norm() + q.eval(z).norm();
            if v < d.eta {
                return Err(Error::Inconsistent(format!("|p| + |q| = {v} < delta' at region boundary point {z}")));
            }
        }
    }
    let step = d.all_rects().iter().map(|r| (r.x1 - r.x0).min(r.y1 - r.y0)).fold(f64::INFINITY, f64::min) / 4.0;
    d.region_max_modulus = region_max;
    d.boundary_intensity =
        if boundary.is_empty() { 0.0 } else { carleson_intensity(&PointMassMeasure::from_segments(&boundary, step)).value };
    d.sigma1_intensity = carleson_intensity(&PointMassMeasure::from_zeros(&d.sigma1)).value;
    Ok(())
}

/// Exact reflection check: generations, regions and sigma_1 are closed under `z -> -conj z`.
pub fn reflection_defect(d: &CarlesonDecomposition) -> Option<String> {
    for g in &d.generations {
        for j in &g.intervals {
            if !g.intervals.contains(&j.mirror()) {
                return Some(format!("generation {} lacks the mirror of {j:?}", g.level));
            }
        }
    }
    for r in &d.regions {
        let m: Vec<Rect> = r.rects.iter().map(Rect::mirror).collect();
        if !d.regions.iter().any(|s| m.iter().all(|x| s.rects.contains(x)) && s.rects.len() == m.len()) {
            return Some(format!("region over {:?} has no mirror", r.interval));
        }
    }
    for a in &d.sigma1 {
        if !d.sigma1.contains(&mirror_point(*a)) {
            return Some(format!("sigma_1 lacks the mirror of {a}"));
        }
    }
    None
}
