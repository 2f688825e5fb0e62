//! Smoothing of `phi` by a compactly supported radial bump near its discontinuities.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::vfield::grid::GridField;
use crate::vfield::summand::Phi;

/// `exp(-1/(1 - r^2))` on the unit disc, 0 outside.
pub fn bump(r: f64) -> f64 {
    if r < 1.0 {
        (-1.0 / (1.0 - r * r)).exp()
    } else {
        0.0
    }
}

/// Nodes whose kernel support of the given radius reaches a jump node.
pub fn mollification_zone(phi: &Phi, radius: f64) -> Vec<bool> {
    let g = phi.field.grid;
    let reach = radius + g.hx.max(g.hy);
    let (rx, ry) = ((reach / g.hx).ceil() as isize, (reach / g.hy).ceil() as isize);
    let mut zone = vec![false; g.len()];
    for (i, _) in phi.jump.iter().enumerate().filter(|(_, b)| **b) {
        let (j, k) = g.coords(i);
        for dk in -ry..=ry {
            for dj in -rx..=rx {
                let (jj, kk) = (j as isize + dj, k as isize + dk);
                if jj < 0 || kk < 0 || jj >= g.nx as isize || kk >= g.ny as isize {
                    continue;
                }
                let (dx, dy) = (dj as f64 * g.hx, dk as f64 * g.hy);
                if dx.hypot(dy) <= reach {
                    zone[g.index(jj as usize, kk as usize)] = true;
                }
            }
        }
    }
    zone
}

/// Normalized bump average of `phi` over a disc of the given radius at every node of the
/// mollification zone; `phi` is kept exactly elsewhere. Below the grid `phi` is continued by
/// `phi(conj z) = -conj phi(z)`, which is exact for logarithms of Blaschke products since their
/// real part vanishes on the real line. Leaving the grid sideways or at the top is an error.
pub fn mollify(phi: &Phi, radius: f64) -> Result<(GridField, usize)> {
    let src = &phi.field;
    let g = src.grid;
    let zone = mollification_zone(phi, radius);
    let (rx, ry) = ((radius / g.hx).ceil() as isize, (radius / g.hy).ceil() as isize);
    let mut stencil = Vec::new();
    for dk in -ry..=ry {
        for dj in -rx..=rx {
            let w = bump((dj as f64 * g.hx).hypot(dk as f64 * g.hy) / radius);
            if w > 0.0 {
                stencil.push((dj, dk, w));
            }
        }
    }
    if stencil.is_empty() {
        return Err(Error::GridTooSmall(format!("mollifier radius {radius} is below the grid spacing")));
    }
    // value on the real line: extrapolated, real part removed
    let on_axis: Vec<Complex64> = (0..g.nx)
        .map(|j| {
            let e = src.get(j, 0) * 3.0 - src.get(j, 1) * 3.0 + src.get(j, 2);
            Complex64::new(0.0, e.im)
        })
        .collect();
    let sample = |j: usize, kk: isize| -> Complex64 {
        match kk {
            k if k >= 0 => src.values[g.index(j, k as usize)],
            -1 => on_axis[j],
            k => -src.values[g.index(j, (-k - 2) as usize)].conj(),
        }
    };
    let mut out = src.clone();
    let jc = g.axis_column();
    let mut changed = 0;
    for k in 0..g.ny {
        for j in jc..g.nx {
            let i = g.index(j, k);
            if !zone[i] {
                continue;
            }
            if j as isize - rx < 0 || j as isize + rx >= g.nx as isize || k as isize + ry >= g.ny as isize {
                return Err(Error::GridTooSmall(format!("mollifier at {} leaves the grid", g.point(j, k))));
            }
            let (mut acc, mut wsum) = (Complex64::new(0.0, 0.0), 0.0);
            for &(dj, dk, w) in &stencil {
                acc += sample((j as isize + dj) as usize, k as isize + dk) * w;
                wsum += w;
            }
            out.values[i] = acc / wsum;
            changed += 1;
        }
    }
    for k in 0..g.ny {
        let a = g.index(jc, k);
        out.values[a].im = 0.0;
        for j in 0..jc {
            out.values[g.index(j, k)] = out.values[g.index(g.mirror_column(j), k)].conj();
        }
    }
    Ok((out, 2 * changed))
}
