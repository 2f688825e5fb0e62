//! Cuts attached to the regions: vertical slits, Gamma-slits and axis connectors, plus the
//! pairing of odd axis objects and the neighborhood census.

pub mod census;
pub mod pairing;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::carleson::{CarlesonDecomposition, Component};
use crate::error::{Error, Result};
use crate::geometry::{mirror_point, Rect, Segment, SNAP};

pub use census::{census_grid, neighborhood_census, Census, CensusSummary};
pub use pairing::{classify_and_pair, AxisObject, Disc, Pairing, PairingKind};

/// Neighborhood radius of a slit relative to its altitude, times `delta'`.
pub const NEIGHBORHOOD_FACTOR: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlitKind {
    Vertical,
    Gamma,
    AxisConnector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlitOwner {
    Component(usize),
    Pairing(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slit {
    pub kind: SlitKind,
    pub polyline: Vec<Segment>,
    pub altitude: f64,
    pub rank: i32,
    pub origin: Complex64,
    pub owner: SlitOwner,
}

/// `floor(log2 d)`.
pub fn rank_of(altitude: f64) -> i32 {
    let mut k = altitude.log2().floor() as i32;
    // guard against rounding at exact powers of two
    if 2f64.powi(k) > altitude {
        k -= 1;
    } else if 2f64.powi(k + 1) <= altitude {
        k += 1;
    }
    k
}

impl Slit {
    pub fn new(kind: SlitKind, polyline: Vec<Segment>, altitude: f64, origin: Complex64, owner: SlitOwner) -> Self {
        Slit { kind, polyline, altitude, rank: rank_of(altitude), origin, owner }
    }

    pub fn mirror(&self) -> Slit {
        Slit { polyline: self.polyline.iter().map(Segment::mirror).collect(), origin: mirror_point(self.origin), ..*self }
    }

    pub fn length(&self) -> f64 {
        self.polyline.iter().map(Segment::len).sum()
    }

    pub fn distance(&self, z: Complex64) -> f64 {
        self.polyline.iter().map(|s| s.distance(z)).fold(f64::INFINITY, f64::min)
    }

    pub fn distance_to(&self, other: &Slit) -> f64 {
        let mut d = f64::INFINITY;
        for s in &self.polyline {
            for t in &other.polyline {
                d = d.min(s.distance_to(t));
            }
        }
        d
    }

    /// Euclidean neighborhood radius `delta'/100 * d`.
    pub fn radius(&self, delta_prime: f64) -> f64 {
        NEIGHBORHOOD_FACTOR * delta_prime * self.altitude
    }

    pub fn rank_ok(&self) -> bool {
        2f64.powi(self.rank) <= self.altitude && self.altitude < 2f64.powi(self.rank + 1)
    }
}

/// One Gamma-slit prescribed by the rule on a vertical boundary piece `[a + ib, a + ic]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaSpec {
    pub k: u32,
    pub height: f64,
    pub length: f64,
}

/// For `k >= 1` with `c 2^(-k-2) > b`: a horizontal piece of length `c 2^(-k)` ending at height
/// `c 2^(-k)`.
pub fn gamma_rule(b: f64, c: f64) -> Vec<GammaSpec> {
    let mut out = Vec::new();
    let mut k = 1u32;
    while k < 64 && c * 2f64.powi(-(k as i32) - 2) > b {
        let h = c * 2f64.powi(-(k as i32));
        out.push(GammaSpec { k, height: h, length: h });
        k += 1;
    }
    out
}

/// A Gamma-slit left out because it would meet other geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedGamma {
    pub component: usize,
    pub origin: Complex64,
    pub reason: String,
}

/// All cuts of one build, with their pairings and the axis sublevel set of `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlitSystem {
    pub delta_prime: f64,
    pub slits: Vec<Slit>,
    pub skipped: Vec<SkippedGamma>,
    pub pairings: Vec<Pairing>,
    pub z_intervals: Vec<(f64, f64)>,
}

impl SlitSystem {
    pub fn component_slits(&self, id: usize) -> impl Iterator<Item = &Slit> {
        self.slits.iter().filter(move |s| s.owner == SlitOwner::Component(id))
    }

    pub fn count(&self, kind: SlitKind) -> usize {
        self.slits.iter().filter(|s| s.kind == kind).count()
    }
}

/// Points sampled along a polyline, skipping `skip` around its first point.
fn polyline_samples(polyline: &[Segment], skip: f64) -> Vec<Complex64> {
    let mut out = Vec::new();
    let start = polyline[0].a;
    for s in polyline {
        let n = 32;
        for t in 0..=n {
            let z = s.a + (s.b - s.a) * (t as f64 / n as f64);
            if (z - start).norm() > skip {
                out.push(z);
            }
        }
    }
    out
}

/// Reason the candidate cannot be placed, if any: it enters a region, touches a region away from
/// its origin, or comes within the neighborhood of a placed slit.
fn conflict(candidate: &Slit, rects: &[Rect], placed: &[Slit], delta_prime: f64) -> Option<String> {
    for s in &candidate.polyline {
        if rects.iter().any(|r| r.segment_meets_interior(s.a, s.b)) {
            return Some("enters a region".into());
        }
    }
    let skip = 1e-9 * candidate.altitude;
    for z in polyline_samples(&candidate.polyline, skip) {
        if rects.iter().any(|r| r.contains(z)) {
            return Some(format!("touches a region at {z}"));
        }
    }
    let r = candidate.radius(delta_prime);
    for other in placed {
        if candidate.distance_to(other) <= r + other.radius(delta_prime) {
            return Some(format!("too close to the slit at {}", other.origin));
        }
    }
    None
}

/// Lowest point below `(x, top)` where a vertical drop meets one of `rects`, or 0.
fn drop_floor(x: f64, top: f64, rects: &[Rect]) -> f64 {
    rects.iter().filter(|r| r.x0 <= x && x <= r.x1 && r.y0 < top - SNAP * top).map(|r| r.y1.min(top)).fold(0.0, f64::max)
}

fn right_half_slits(
    component: &Component,
    decomposition: &CarlesonDecomposition,
    rects: &[Rect],
    delta_prime: f64,
    skipped: &mut Vec<SkippedGamma>,
) -> Vec<Slit> {
    let owner = SlitOwner::Component(component.id);
    let self_symmetric = component.is_self_symmetric();
    let keep = |x: f64| !self_symmetric || x >= 0.0;
    let mut slits = Vec::new();

    for child in component.children(&decomposition.regions) {
        let c = child.center();
        if !keep(c) {
            continue;
        }
        let top = child.len();
        let floor = drop_floor(c, top, rects);
        if floor >= top - SNAP * top {
            continue;
        }
        let origin = Complex64::new(c, top);
        let seg = Segment::new(origin, Complex64::new(c, floor));
        slits.push(Slit::new(SlitKind::Vertical, vec![seg], top, origin, owner));
    }

    for piece in component.boundary.iter().filter(|s| s.is_vertical()) {
        let a = piece.a.re;
        if !keep(a) || (self_symmetric && a == 0.0) {
            continue;
        }
        let (b, c) = (piece.a.im.min(piece.b.im), piece.a.im.max(piece.b.im));
        let probe = SNAP.max(1e-9 * c);
        let mid = 0.5 * (b + c);
        let outward = if component.contains(Complex64::new(a + probe, mid)) { -1.0 } else { 1.0 };
        for g in gamma_rule(b, c) {
            let origin = Complex64::new(a, g.height);
            let corner = Complex64::new(a + outward * g.length, g.height);
            let foot = Complex64::new(corner.re, 0.0);
            let slit = Slit::new(SlitKind::Gamma, vec![Segment::new(origin, corner), Segment::new(corner, foot)], g.height, origin, owner);
            match conflict(&slit, rects, &slits, delta_prime) {
                None => slits.push(slit),
                Some(reason) => skipped.push(SkippedGamma { component: component.id, origin, reason }),
            }
        }
    }
    slits
}

/// Slits of every component; mirrored components and the left half of self-symmetric ones are
/// exact reflections.
pub fn build_slits(decomposition: &CarlesonDecomposition, delta_prime: f64) -> (Vec<Slit>, Vec<SkippedGamma>) {
    let rects = decomposition.all_rects();
    let mut per_component: Vec<Vec<Slit>> = vec![Vec::new(); decomposition.components.len()];
    let mut skipped = Vec::new();
    for c in &decomposition.components {
        if c.mirror < c.id {
            continue;
        }
        let right = right_half_slits(c, decomposition, &rects, delta_prime, &mut skipped);
        if c.is_self_symmetric() {
            let mut all = right.clone();
            all.extend(right.iter().filter(|s| s.origin.re > 0.0).map(Slit::mirror));
            per_component[c.id] = all;
        } else {
            let m = c.mirror;
            per_component[m] = right.iter().map(|s| Slit { owner: SlitOwner::Component(m), ..s.mirror() }).collect();
            per_component[c.id] = right;
        }
    }
    let mirrored_skips: Vec<SkippedGamma> = skipped
        .iter()
        .filter(|s| s.origin.re > 0.0 || decomposition.components[s.component].mirror != s.component)
        .map(|s| SkippedGamma {
            component: decomposition.components[s.component].mirror,
            origin: mirror_point(s.origin),
            reason: s.reason.clone(),
        })
        .collect();
    skipped.extend(mirrored_skips);
    (per_component.into_iter().flatten().collect(), skipped)
}

/// Geometric checks on a finished set of component slits.
pub fn verify_slits(slits: &[Slit], decomposition: &CarlesonDecomposition, delta_prime: f64) -> Result<()> {
    let rects = decomposition.all_rects();
    for (i, s) in slits.iter().enumerate() {
        if !s.rank_ok() {
            return Err(Error::SlitGeometry(format!("rank {} inconsistent with altitude {}", s.rank, s.altitude)));
        }
        for seg in &s.polyline {
            if rects.iter().any(|r| r.segment_meets_interior(seg.a, seg.b)) {
                return Err(Error::SlitGeometry(format!("slit at {} enters a region", s.origin)));
            }
        }
        // a vertical slit may end on a lower region; only its top is the origin
        let tail = s.polyline.last().map(|seg| seg.b);
        for z in polyline_samples(&s.polyline, 1e-9 * s.altitude) {
            let at_foot = s.kind == SlitKind::Vertical && tail.is_some_and(|t| (z - t).norm() <= SNAP * s.altitude);
            if !at_foot && rects.iter().any(|r| r.contains(z)) {
                return Err(Error::SlitGeometry(format!("slit at {} touches a region at {z}", s.origin)));
            }
        }
        if !rects.iter().any(|r| r.contains(s.origin)) {
            return Err(Error::SlitGeometry(format!("origin {} is not on a region", s.origin)));
        }
        for t in &slits[i + 1..] {
            if s.polyline.iter().any(|a| t.polyline.iter().any(|b| a.intersects(b))) {
                return Err(Error::SlitGeometry(format!("slits at {} and {} intersect", s.origin, t.origin)));
            }
            if s.owner == t.owner && s.distance_to(t) <= s.radius(delta_prime) + t.radius(delta_prime) {
                return Err(Error::SlitGeometry(format!("neighborhoods of the slits at {} and {} overlap", s.origin, t.origin)));
            }
        }
    }
    Ok(())
}

/// Slits and pairings for a decomposition; checks run before returning.
pub fn build_slit_system(decomposition: &CarlesonDecomposition, q: &crate::BlaschkeProduct, delta_prime: f64) -> Result<SlitSystem> {
    let (mut slits, skipped) = build_slits(decomposition, delta_prime);
    verify_slits(&slits, decomposition, delta_prime)?;
    let z = crate::halfplane::axis_sublevel_set(q, delta_prime);
    let pairings = classify_and_pair(decomposition, &z, delta_prime)?;
    for p in &pairings {
        slits.extend(p.connectors.iter().cloned());
    }
    Ok(SlitSystem { delta_prime, slits, skipped, pairings, z_intervals: z.intervals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carleson::{build_generations, DecompositionOptions};
    use crate::BlaschkeProduct;

    #[test]
    fn gamma_rule_matches_worked_example() {
        let g = gamma_rule(1.0 / 64.0, 1.0);
        assert_eq!(g.len(), 3);
        assert_eq!(g.iter().map(|s| s.length).collect::<Vec<_>>(), vec![0.5, 0.25, 0.125]);
        assert_eq!(g.iter().map(|s| s.height).collect::<Vec<_>>(), vec![0.5, 0.25, 0.125]);
        assert!(gamma_rule(0.125, 1.0).is_empty());
        assert!(gamma_rule(0.2, 1.0).is_empty());
    }

    #[test]
    fn rank_brackets_altitude() {
        for d in [0.3, 1.0, 1.5, 2.0, 1024.0, 1e-5, 0.125] {
            let k = rank_of(d);
            assert!(2f64.powi(k) <= d && d < 2f64.powi(k + 1), "{d}");
        }
        assert_eq!(rank_of(1.0), 0);
        assert_eq!(rank_of(0.5), -1);
    }

    fn clustered() -> (BlaschkeProduct, CarlesonDecomposition) {
        let mut zeros = Vec::new();
        for k in 0..6 {
            let a = Complex64::new(0.6 + 0.02 * k as f64, 0.05 + 0.01 * k as f64);
            zeros.push(a);
            zeros.push(Complex64::new(-a.re, a.im));
        }
        let p = BlaschkeProduct::new(zeros).unwrap();
        let q = BlaschkeProduct::new(vec![Complex64::new(0.0, 3.0)]).unwrap();
        let d = build_generations(&p, &q, 0.05, DecompositionOptions { mass_threshold: Some(0.3) }).unwrap();
        (q, d)
    }

    #[test]
    fn slits_are_disjoint_and_mirror_closed() {
        let (q, d) = clustered();
        assert!(!d.components.is_empty());
        let sys = build_slit_system(&d, &q, 0.05).unwrap();
        assert!(sys.count(SlitKind::Vertical) > 0);
        for s in &sys.slits {
            let m = s.mirror();
            assert!(sys.slits.iter().any(|t| t.polyline == m.polyline && t.kind == s.kind), "no mirror for {:?}", s.origin);
        }
    }
}
