//! Planar primitives: closed intervals, axis-aligned rectangles, segments and polylines.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Coordinates closer than this are treated as equal when comparing edges.
pub const SNAP: f64 = 1e-12;

/// A closed interval `[lo, hi]` of the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(hi > lo);
        Interval { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Image under `x -> -x`. Exact in floating point.
    pub fn mirror(&self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }

    /// Concentric interval of three times the length.
    pub fn triple(&self) -> Interval {
        let l = self.len();
        Interval { lo: self.lo - l, hi: self.hi + l }
    }

    pub fn halves(&self) -> (Interval, Interval) {
        let c = self.center();
        (Interval { lo: self.lo, hi: c }, Interval { lo: c, hi: self.hi })
    }

    pub fn is_self_symmetric(&self) -> bool {
        self.lo == -self.hi
    }

    /// `z` lies in the Carleson square `Q(self)`.
    pub fn square_contains(&self, z: Complex64) -> bool {
        self.contains(z.re) && z.im > 0.0 && z.im <= self.len()
    }
}

pub fn sort_intervals(v: &mut [Interval]) {
    v.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
}

/// A closed axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.x0 <= z.re && z.re <= self.x1 && self.y0 <= z.im && z.im <= self.y1
    }

    pub fn contains_open(&self, z: Complex64) -> bool {
        self.x0 < z.re && z.re < self.x1 && self.y0 < z.im && z.im < self.y1
    }

    pub fn mirror(&self) -> Rect {
        Rect { x0: -self.x1, x1: -self.x0, y0: self.y0, y1: self.y1 }
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }

    /// Euclidean distance from `z` to the closed rectangle.
    pub fn distance(&self, z: Complex64) -> f64 {
        let dx = (self.x0 - z.re).max(0.0).max(z.re - self.x1);
        let dy = (self.y0 - z.im).max(0.0).max(z.im - self.y1);
        dx.hypot(dy)
    }

    /// Smallest pseudo-hyperbolic distance `|z - w| / |z - conj w|` over `w` in the rectangle.
    ///
    /// For fixed height the ratio is increasing in `|Re(z - w)|`, so `Re w` is clamped to the
    /// rectangle; the remaining one-dimensional problem is unimodal and solved by ternary search.
    pub fn pseudo_distance(&self, z: Complex64) -> f64 {
        if self.contains(z) {
            return 0.0;
        }
        let u = z.re.clamp(self.x0, self.x1);
        let dx2 = (z.re - u).powi(2);
        let f = |v: f64| ((dx2 + (z.im - v).powi(2)) / (dx2 + (z.im + v).powi(2))).sqrt();
        let (mut lo, mut hi) = (self.y0, self.y1);
        for _ in 0..100 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if f(m1) <= f(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        f(0.5 * (lo + hi)).min(f(self.y0)).min(f(self.y1))
    }

    /// True when the closed segment meets the open interior of the rectangle.
    pub fn segment_meets_interior(&self, a: Complex64, b: Complex64) -> bool {
        // Liang-Barsky clipping against the open box.
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        let d = b - a;
        for (p, q) in [(-d.re, a.re - self.x0), (d.re, self.x1 - a.re), (-d.im, a.im - self.y0), (d.im, self.y1 - a.im)] {
            if p == 0.0 {
                if q <= 0.0 {
                    return false;
                }
            } else {
                let r = q / p;
                if p < 0.0 {
                    t0 = t0.max(r);
                } else {
                    t1 = t1.min(r);
                }
            }
        }
        t0 < t1
    }
}

/// A closed straight segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Complex64,
    pub b: Complex64,
}

impl Segment {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        Segment { a, b }
    }

    pub fn len(&self) -> f64 {
        (self.b - self.a).norm()
    }

    pub fn mirror(&self) -> Segment {
        Segment { a: mirror_point(self.a), b: mirror_point(self.b) }
    }

    pub fn is_vertical(&self) -> bool {
        self.a.re == self.b.re
    }

    pub fn is_horizontal(&self) -> bool {
        self.a.im == self.b.im
    }

    /// Euclidean distance from `z` to the segment.
    pub fn distance(&self, z: Complex64) -> f64 {
        let d = self.b - self.a;
        let l2 = d.norm_sqr();
        if l2 == 0.0 {
            return (z - self.a).norm();
        }
        let t = (((z - self.a) * d.conj()).re / l2).clamp(0.0, 1.0);
        (z - (self.a + d * t)).norm()
    }

    /// Distance between two segments.
    pub fn distance_to(&self, other: &Segment) -> f64 {
        if self.intersects(other) {
            return 0.0;
        }
        self.distance(other.a).min(self.distance(other.b)).min(other.distance(self.a)).min(other.distance(self.b))
    }

    /// Closed segments share at least one point.
    pub fn intersects(&self, other: &Segment) -> bool {
        let o1 = orient(self.a, self.b, other.a);
        let o2 = orient(self.a, self.b, other.b);
        let o3 = orient(other.a, other.b, self.a);
        let o4 = orient(other.a, other.b, self.b);
        if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
            return true;
        }
        (o1 == 0.0 && on_segment(self.a, self.b, other.a))
            || (o2 == 0.0 && on_segment(self.a, self.b, other.b))
            || (o3 == 0.0 && on_segment(other.a, other.b, self.a))
            || (o4 == 0.0 && on_segment(other.a, other.b, self.b))
    }
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let v = (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re);
    if v.abs() <= SNAP * (1.0 + a.norm() + b.norm() + c.norm()).powi(2) {
        0.0
    } else {
        v
    }
}

fn on_segment(a: Complex64, b: Complex64, p: Complex64) -> bool {
    p.re >= a.re.min(b.re) - SNAP && p.re <= a.re.max(b.re) + SNAP && p.im >= a.im.min(b.im) - SNAP && p.im <= a.im.max(b.im) + SNAP
}

/// `z -> -conj z`.
pub fn mirror_point(z: Complex64) -> Complex64 {
    Complex64::new(-z.re + 0.0, z.im)
}

/// Total length of a set of segments.
pub fn total_length(segments: &[Segment]) -> f64 {
    segments.iter().map(Segment::len).sum()
}

pub fn union_contains(rects: &[Rect], z: Complex64) -> bool {
    rects.iter().any(|r| r.contains(z))
}

/// Boundary of a union of rectangles as a list of maximal straight pieces.
///
/// Every rectangle edge is cut at all coordinates of the other rectangles; an elementary piece
/// belongs to the boundary when exactly one of its two sides lies in the union.
pub fn union_boundary(rects: &[Rect]) -> Vec<Segment> {
    let mut xs: Vec<f64> = rects.iter().flat_map(|r| [r.x0, r.x1]).collect();
    let mut ys: Vec<f64> = rects.iter().flat_map(|r| [r.y0, r.y1]).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= SNAP);
    ys.sort_by(f64::total_cmp);
    ys.dedup_by(|a, b| (*a - *b).abs() <= SNAP);
    let scale = rects.iter().map(|r| (r.x1 - r.x0).min(r.y1 - r.y0)).fold(f64::INFINITY, f64::min);
    let eps = 1e-7 * scale;
    let inside = |z: Complex64| union_contains(rects, z);

    let mut pieces: Vec<Segment> = Vec::new();
    // Horizontal pieces on every y line, vertical pieces on every x line.
    for &y in &ys {
        for w in xs.windows(2) {
            let m = Complex64::new(0.5 * (w[0] + w[1]), y);
            let on_edge = rects.iter().any(|r| r.x0 <= m.re && m.re <= r.x1 && (r.y0 == y || r.y1 == y));
            if on_edge && inside(m + Complex64::new(0.0, eps)) != inside(m - Complex64::new(0.0, eps)) {
                pieces.push(Segment::new(Complex64::new(w[0], y), Complex64::new(w[1], y)));
            }
        }
    }
    for &x in &xs {
        for w in ys.windows(2) {
            let m = Complex64::new(x, 0.5 * (w[0] + w[1]));
            let on_edge = rects.iter().any(|r| r.y0 <= m.im && m.im <= r.y1 && (r.x0 == x || r.x1 == x));
            if on_edge && inside(m + Complex64::new(eps, 0.0)) != inside(m - Complex64::new(eps, 0.0)) {
                pieces.push(Segment::new(Complex64::new(x, w[0]), Complex64::new(x, w[1])));
            }
        }
    }
    merge_collinear(pieces)
}

/// Joins consecutive collinear pieces into maximal segments.
fn merge_collinear(mut pieces: Vec<Segment>) -> Vec<Segment> {
    let key = |s: &Segment| {
        if s.is_horizontal() {
            (0u8, s.a.im, s.a.re.min(s.b.re))
        } else {
            (1u8, s.a.re, s.a.im.min(s.b.im))
        }
    };
    pieces.sort_by(|p, q| {
        let (a, b) = (key(p), key(q));
        a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2))
    });
    let mut out: Vec<Segment> = Vec::new();
    for s in pieces {
        if let Some(last) = out.last_mut() {
            let joinable = if s.is_horizontal() && last.is_horizontal() {
                last.a.im == s.a.im && (last.b.re - s.a.re).abs() <= SNAP
            } else if s.is_vertical() && last.is_vertical() && !last.is_horizontal() {
                last.a.re == s.a.re && (last.b.im - s.a.im).abs() <= SNAP
            } else {
                false
            };
            if joinable {
                last.b = s.b;
                continue;
            }
        }
        out.push(s);
    }
    out
}

/// Two rectangles share an edge piece of positive length or overlap.
pub fn rects_adjacent(a: &Rect, b: &Rect) -> bool {
    let ox = a.x1.min(b.x1) - a.x0.max(b.x0);
    let oy = a.y1.min(b.y1) - a.y0.max(b.y0);
    (ox > SNAP && oy > -SNAP) || (oy > SNAP && ox > -SNAP)
}

/// Connected components of rectangles under [`rects_adjacent`], as sorted index lists.
pub fn rect_components(rects: &[Rect]) -> Vec<Vec<usize>> {
    let n = rects.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rects_adjacent(&rects[i], &rects[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    groups.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_square_perimeter_counts_four_sides() {
        let b = union_boundary(&[Rect::new(0.0, 1.0, 1.0, 2.0)]);
        assert_eq!(b.len(), 4);
        assert!((total_length(&b) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn l_shape_perimeter_matches_hand_count() {
        // Outline (0,1/2) (1/2,1/2) (1/2,0) (1,0) (1,1) (0,1): 1/2+1/2+1/2+1+1+1/2 = 4.
        let rects = [Rect::new(0.0, 0.5, 0.5, 1.0), Rect::new(0.5, 1.0, 0.0, 1.0)];
        let b = union_boundary(&rects);
        assert!((total_length(&b) - 4.0).abs() < 1e-15);
        assert_eq!(b.len(), 6);
    }

    #[test]
    fn nested_child_notch() {
        // Region of a unit square with a half-width child square removed on the left:
        // [0,1/2]x[1/2,1] and [1/2,1]x[1/4,1]. Hand count: 1/2 + 1/4 + 1/2 + 3/4 + 1 + 1/2 = 7/2.
        let rects = [Rect::new(0.0, 0.5, 0.5, 1.0), Rect::new(0.5, 1.0, 0.25, 1.0)];
        assert!((total_length(&union_boundary(&rects)) - 3.5).abs() < 1e-15);
    }

    #[test]
    fn mirrored_union_has_same_length() {
        let rects = [Rect::new(0.25, 0.5, 0.5, 1.0), Rect::new(0.5, 1.0, 0.25, 1.0)];
        let m: Vec<Rect> = rects.iter().map(Rect::mirror).collect();
        assert_eq!(total_length(&union_boundary(&rects)), total_length(&union_boundary(&m)));
    }

    #[test]
    fn components_by_shared_edges() {
        let rects = [
            Rect::new(0.0, 1.0, 1.0, 2.0),
            Rect::new(1.0, 2.0, 0.5, 2.0),
            Rect::new(3.0, 4.0, 1.0, 2.0),
            // corner contact only
            Rect::new(4.0, 5.0, 2.0, 3.0),
        ];
        assert_eq!(rect_components(&rects), vec![vec![0, 1], vec![2], vec![3]]);
    }

    #[test]
    fn segment_intersection_and_distance() {
        let s = Segment::new(c(0.0, 0.0), c(0.0, 1.0));
        assert!(s.intersects(&Segment::new(c(-1.0, 0.5), c(1.0, 0.5))));
        assert!(!s.intersects(&Segment::new(c(0.5, 0.0), c(0.5, 1.0))));
        assert!((s.distance_to(&Segment::new(c(0.5, 0.0), c(0.5, 1.0))) - 0.5).abs() < 1e-15);
        assert!(s.intersects(&Segment::new(c(0.0, 1.0), c(1.0, 1.0))));
    }

    #[test]
    fn pseudo_distance_to_rect() {
        let r = Rect::new(0.0, 1.0, 1.0, 2.0);
        assert_eq!(r.pseudo_distance(c(0.5, 1.5)), 0.0);
        // Directly above: nearest point is the top edge midpoint, |3i - 2i| / |3i + 2i| = 1/5.
        assert!((r.pseudo_distance(c(0.5, 3.0)) - 0.2).abs() < 1e-9);
    }
}
