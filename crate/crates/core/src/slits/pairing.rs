//! Classification of components and sigma_1 zeros into summand families, and the pairing of odd
//! axis objects within the gaps between the axis sublevel intervals of `q`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::carleson::CarlesonDecomposition;
use crate::error::{Error, Result};
use crate::geometry::{mirror_point, Rect, Segment};
use crate::halfplane::AxisIntervalSet;
use crate::slits::{Slit, SlitKind, SlitOwner};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairingKind {
    RegionRegion,
    RegionZero,
    ZeroZero,
    OffAxisPair,
    OffAxisMergedDisc,
    RegionSoloEven,
    /// A component and its reflection.
    RegionMirrorPair,
    /// A lone odd axis zero cut down to the real line.
    ZeroGrounded,
    /// A lone odd self-symmetric component cut down to the real line.
    RegionSolo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: Complex64,
    pub radius: f64,
}

impl Disc {
    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }
}

/// An object on the imaginary axis that needs a partner: an axis zero of sigma_1 or a
/// self-symmetric component with an odd number of axis zeros.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisObject {
    Zero(f64),
    Component { id: usize, lo: f64, hi: f64 },
}

impl AxisObject {
    /// Lowest point on the axis.
    pub fn lo(&self) -> f64 {
        match *self {
            AxisObject::Zero(y) => y,
            AxisObject::Component { lo, .. } => lo,
        }
    }

    /// Highest point on the axis.
    pub fn hi(&self) -> f64 {
        match *self {
            AxisObject::Zero(y) => y,
            AxisObject::Component { hi, .. } => hi,
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, AxisObject::Zero(_))
    }
}

/// One summand family: its zeros, the components whose regions it owns, its cuts and discs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    pub id: usize,
    pub kind: PairingKind,
    pub zeros: Vec<Complex64>,
    pub components: Vec<usize>,
    pub connectors: Vec<Slit>,
    pub discs: Vec<Disc>,
}

impl Pairing {
    /// Height scale of the family, used for mollifier radii.
    pub fn scale(&self) -> f64 {
        self.zeros.iter().map(|a| a.im).fold(f64::INFINITY, f64::min)
    }
}

fn axis_disc(y: f64, delta_prime: f64) -> Disc {
    Disc { center: Complex64::new(0.0, y), radius: delta_prime * y }
}

struct Builder<'a> {
    d: &'a CarlesonDecomposition,
    delta_prime: f64,
    out: Vec<Pairing>,
}

impl Builder<'_> {
    fn push(&mut self, kind: PairingKind, zeros: Vec<Complex64>, components: Vec<usize>, discs: Vec<Disc>) -> usize {
        let id = self.out.len();
        self.out.push(Pairing { id, kind, zeros, components, connectors: Vec::new(), discs });
        id
    }

    fn object_parts(&self, o: &AxisObject) -> (Vec<Complex64>, Vec<usize>, Vec<Disc>) {
        match *o {
            AxisObject::Zero(y) => (vec![Complex64::new(0.0, y)], vec![], vec![axis_disc(y, self.delta_prime)]),
            AxisObject::Component { id, .. } => (self.d.components[id].zeros.clone(), vec![id], vec![]),
        }
    }

    /// Axis cut from 0 to `top`; it may cross only the components of the family.
    fn axis_connector(&mut self, pairing: usize, top: f64, origin: f64) -> Result<()> {
        let seg = Segment::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, top));
        let own = &self.out[pairing].components;
        for c in &self.d.components {
            if own.contains(&c.id) {
                continue;
            }
            if c.rects.iter().any(|r: &Rect| r.x0 <= 0.0 && 0.0 <= r.x1 && r.y0 <= top) {
                return Err(Error::SlitGeometry(format!("axis connector up to {top} meets component {} outside its pairing", c.id)));
            }
        }
        let slit = Slit::new(SlitKind::AxisConnector, vec![seg], top, Complex64::new(0.0, origin), SlitOwner::Pairing(pairing));
        self.out[pairing].connectors.push(slit);
        Ok(())
    }

    fn pair(&mut self, lower: AxisObject, upper: AxisObject) -> Result<()> {
        let kind = match (lower.is_zero(), upper.is_zero()) {
            (true, true) => PairingKind::ZeroZero,
            (false, false) => PairingKind::RegionRegion,
            _ => PairingKind::RegionZero,
        };
        let (mut zeros, mut comps, mut discs) = self.object_parts(&lower);
        let (z2, c2, d2) = self.object_parts(&upper);
        zeros.extend(z2);
        comps.extend(c2);
        discs.extend(d2);
        let id = self.push(kind, zeros, comps, discs);
        let origin = match kind {
            PairingKind::RegionRegion => lower.hi(),
            _ => upper.lo(),
        };
        self.axis_connector(id, upper.lo(), origin)
    }

    fn ground(&mut self, o: AxisObject) -> Result<()> {
        let kind = if o.is_zero() { PairingKind::ZeroGrounded } else { PairingKind::RegionSolo };
        let (zeros, comps, discs) = self.object_parts(&o);
        let id = self.push(kind, zeros, comps, discs);
        self.axis_connector(id, o.lo(), o.lo())
    }

    fn pair_consecutive(&mut self, objects: &[AxisObject]) -> Result<()> {
        for pair in objects.chunks(2) {
            self.pair(pair[0], pair[1])?;
        }
        Ok(())
    }
}

/// Splits off the lowest object when the count is odd.
fn split_odd(objects: &[AxisObject]) -> (Option<AxisObject>, &[AxisObject]) {
    if objects.len() % 2 == 1 {
        (Some(objects[0]), &objects[1..])
    } else {
        (None, objects)
    }
}

/// Builds every summand family.
///
/// Odd objects in a gap bounded by two axis intervals are paired consecutively by height; an odd
/// count there is the sign-condition violation. In the unbounded end gaps one odd object may be
/// left over: if both end gaps have one, the two are paired across, otherwise the leftover is
/// cut down to the real line.
pub fn classify_and_pair(d: &CarlesonDecomposition, z: &AxisIntervalSet, delta_prime: f64) -> Result<Vec<Pairing>> {
    let mut b = Builder { d, delta_prime, out: Vec::new() };

    for a in d.sigma1.iter().filter(|a| a.re > 0.0) {
        let m = mirror_point(*a);
        if a.re < delta_prime * a.im {
            let id = b.push(
                PairingKind::OffAxisMergedDisc,
                vec![m, *a],
                vec![],
                vec![Disc { center: Complex64::new(0.0, a.im), radius: a.re + delta_prime * a.im }],
            );
            let seg = Segment::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, a.im));
            let slit = Slit::new(SlitKind::AxisConnector, vec![seg], a.im, Complex64::new(0.0, a.im), SlitOwner::Pairing(id));
            b.out[id].connectors.push(slit);
        } else {
            let r = delta_prime * a.im;
            let id =
                b.push(PairingKind::OffAxisPair, vec![m, *a], vec![], vec![Disc { center: m, radius: r }, Disc { center: *a, radius: r }]);
            let rects = d.all_rects();
            let floor = rects.iter().filter(|q| q.x0 <= a.re && a.re <= q.x1 && q.y1 < a.im).map(|q| q.y1).fold(0.0, f64::max);
            let seg = Segment::new(*a, Complex64::new(a.re, floor));
            let right = Slit::new(SlitKind::Vertical, vec![seg], a.im, *a, SlitOwner::Pairing(id));
            let left = right.mirror();
            b.out[id].connectors.extend([left, right]);
        }
    }

    for c in &d.components {
        if c.mirror > c.id {
            let mut zeros = c.zeros.clone();
            zeros.extend(d.components[c.mirror].zeros.iter().copied());
            b.push(PairingKind::RegionMirrorPair, zeros, vec![c.id, c.mirror], vec![]);
        }
    }

    let mut objects: Vec<AxisObject> = d.sigma1.iter().filter(|a| a.re == 0.0).map(|a| AxisObject::Zero(a.im)).collect();
    for c in d.components.iter().filter(|c| c.is_self_symmetric()) {
        let (lo, hi) = c.axis_span().unwrap_or((0.0, 0.0));
        if c.axis_zero_count() % 2 == 1 {
            objects.push(AxisObject::Component { id: c.id, lo, hi });
        } else {
            b.push(PairingKind::RegionSoloEven, c.zeros.clone(), vec![c.id], vec![]);
        }
    }
    objects.sort_by(|x, y| x.lo().total_cmp(&y.lo()));

    let n = z.len();
    let mut gaps: Vec<Vec<AxisObject>> = vec![Vec::new(); n + 1];
    for o in objects {
        gaps[z.gap_index(o.lo())].push(o);
    }
    for (g, objs) in gaps.iter().enumerate().take(n).skip(1) {
        if objs.len() % 2 == 1 {
            return Err(Error::SignCondition { y_low: z.intervals[g - 1].1, y_high: z.intervals[g].0 });
        }
        b.pair_consecutive(objs)?;
    }
    if n == 0 {
        let (odd, rest) = split_odd(&gaps[0]);
        if let Some(o) = odd {
            b.ground(o)?;
        }
        b.pair_consecutive(rest)?;
    } else {
        let bottom = gaps[0].clone();
        let top = gaps[n].clone();
        let (odd_bottom, rest_bottom) = split_odd(&bottom);
        let (odd_top, rest_top) = split_odd(&top);
        match (odd_bottom, odd_top) {
            (Some(x), Some(y)) => b.pair(x, y)?,
            (Some(x), None) | (None, Some(x)) => b.ground(x)?,
            (None, None) => {}
        }
        b.pair_consecutive(rest_bottom)?;
        b.pair_consecutive(rest_top)?;
    }
    Ok(b.out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carleson::{build_generations, DecompositionOptions};
    use crate::halfplane::axis_sublevel_set;
    use crate::BlaschkeProduct;

    fn axis(ys: &[f64]) -> BlaschkeProduct {
        BlaschkeProduct::new(ys.iter().map(|y| Complex64::new(0.0, *y)).collect()).unwrap()
    }

    fn pairings(p: &BlaschkeProduct, q: &BlaschkeProduct, dp: f64) -> Result<Vec<Pairing>> {
        let d = build_generations(p, q, dp, DecompositionOptions::default()).unwrap();
        classify_and_pair(&d, &axis_sublevel_set(q, dp), dp)
    }

    #[test]
    fn two_axis_zeros_around_one_interval_pair_up() {
        let out = pairings(&axis(&[1.0, 4.0]), &axis(&[2.0]), 0.01).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].kind, PairingKind::ZeroZero);
        let c = &out[0].connectors[0];
        assert_eq!(c.polyline[0].b, Complex64::new(0.0, 4.0));
        assert_eq!(c.origin, Complex64::new(0.0, 4.0));
    }

    #[test]
    fn odd_bounded_gap_violates_sign_condition() {
        // q has axis intervals near 1 and 4; p has one zero between them.
        let err = pairings(&axis(&[2.0]), &axis(&[1.0, 4.0]), 0.01).unwrap_err();
        assert!(matches!(err, Error::SignCondition { .. }));
    }

    #[test]
    fn lone_zero_is_grounded() {
        let out = pairings(&axis(&[1.0]), &axis(&[5.0]), 0.01).unwrap();
        assert_eq!(out[0].kind, PairingKind::ZeroGrounded);
        assert_eq!(out[0].connectors[0].polyline[0].b, Complex64::new(0.0, 1.0));
    }

    #[test]
    fn off_axis_disc_kinds() {
        let q = axis(&[5.0]);
        let p = BlaschkeProduct::new(vec![Complex64::new(1.0, 0.05), Complex64::new(-1.0, 0.05)]).unwrap();
        let out = pairings(&p, &q, 0.2).unwrap();
        assert_eq!(out[0].kind, PairingKind::OffAxisPair);
        assert!((out[0].discs[0].radius - 0.01).abs() < 1e-15);
        assert!(
            (out[0].discs[0].center - Complex64::new(-1.0, 0.05)).norm() + (out[0].discs[1].center - Complex64::new(1.0, 0.05)).norm()
                == 0.0
        );
        let p = BlaschkeProduct::new(vec![Complex64::new(0.001, 1.0), Complex64::new(-0.001, 1.0)]).unwrap();
        let out = pairings(&p, &q, 0.2).unwrap();
        assert_eq!(out[0].kind, PairingKind::OffAxisMergedDisc);
    }

    #[test]
    fn even_pairs_in_bounded_gap() {
        let out = pairings(&axis(&[2.0, 2.5]), &axis(&[1.0, 4.0]), 0.01).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].kind, PairingKind::ZeroZero);
    }
}
