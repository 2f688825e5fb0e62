//! Counts of slit, region and disc neighborhoods containing a point.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::carleson::CarlesonDecomposition;
use crate::slits::{SlitKind, SlitSystem};

/// Neighborhood counts at one point.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    /// Component slits whose Euclidean neighborhood holds the point, by rank.
    pub slits_by_rank: BTreeMap<i32, usize>,
    /// Components within pseudo-hyperbolic distance `delta'/100` of the point.
    pub components: usize,
    /// Discs whose boundary circle is within `delta'/100 * Im a` of the point.
    pub discs: usize,
}

impl Census {
    pub fn max_per_rank(&self) -> usize {
        self.slits_by_rank.values().copied().max().unwrap_or(0)
    }
}

pub fn neighborhood_census(z: Complex64, d: &CarlesonDecomposition, sys: &SlitSystem) -> Census {
    let dp = sys.delta_prime;
    let mut census = Census::default();
    for s in sys.slits.iter().filter(|s| s.kind != SlitKind::AxisConnector) {
        if s.distance(z) < s.radius(dp) {
            *census.slits_by_rank.entry(s.rank).or_default() += 1;
        }
    }
    census.components =
        d.components.iter().filter(|c| c.rects.iter().map(|r| r.pseudo_distance(z)).fold(f64::INFINITY, f64::min) < 0.01 * dp).count();
    for p in &sys.pairings {
        for disc in &p.discs {
            let scale = disc.radius / dp;
            if ((z - disc.center).norm() - disc.radius).abs() < 0.01 * dp * scale {
                census.discs += 1;
            }
        }
    }
    census
}

/// Maxima of the census over a sample grid.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub samples: usize,
    pub max_slits_per_rank: usize,
    pub max_components: usize,
    pub max_discs: usize,
}

/// Census over an `n x n` grid on `[-X, X] x (0, Y]`.
pub fn census_grid(d: &CarlesonDecomposition, sys: &SlitSystem, half_width: f64, height: f64, n: usize) -> CensusSummary {
    let mut out = CensusSummary { samples: n * n, ..Default::default() };
    for k in 0..n {
        for j in 0..n {
            let z = Complex64::new(-half_width + 2.0 * half_width * (j as f64 + 0.5) / n as f64, height * (k as f64 + 0.5) / n as f64);
            let c = neighborhood_census(z, d, sys);
            out.max_slits_per_rank = out.max_slits_per_rank.max(c.max_per_rank());
            out.max_components = out.max_components.max(c.components);
            out.max_discs = out.max_discs.max(c.discs);
        }
    }
    out
}
