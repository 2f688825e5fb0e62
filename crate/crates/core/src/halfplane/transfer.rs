//! Conformal transfer between the unit disc and the upper half-plane.
//!
//! The half-plane point `z` corresponds to the disc point `w = (z - i) / (z + i)`, with inverse
//! `z = i (1 + w) / (1 - w)`. Conjugation `w -> conj w` on the disc becomes `z -> -conj z`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::halfplane::blaschke::BlaschkeProduct;
use crate::halfplane::symmetry::SampledFunction;

/// Direction of a transfer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    DiscToHalfPlane,
    HalfPlaneToDisc,
}

/// Disc point to half-plane point. The pole is `w = 1`.
pub fn disc_to_half_plane(w: Complex64) -> Result<Complex64> {
    let d = Complex64::new(1.0, 0.0) - w;
    if d.norm() == 0.0 {
        return Err(Error::ExcludedPoint(w));
    }
    Ok(Complex64::i() * (Complex64::new(1.0, 0.0) + w) / d)
}

/// Half-plane point to disc point. The pole is `z = -i`.
pub fn half_plane_to_disc(z: Complex64) -> Result<Complex64> {
    let d = z + Complex64::i();
    if d.norm() == 0.0 {
        return Err(Error::ExcludedPoint(z));
    }
    Ok((z - Complex64::i()) / d)
}

pub fn map_point(z: Complex64, direction: Direction) -> Result<Complex64> {
    let out = match direction {
        Direction::DiscToHalfPlane => disc_to_half_plane(z)?,
        Direction::HalfPlaneToDisc => half_plane_to_disc(z)?,
    };
    // Keep the symmetry axes exact: the real diameter maps to the imaginary axis and back.
    Ok(match direction {
        Direction::DiscToHalfPlane if z.im == 0.0 => Complex64::new(0.0, out.im),
        Direction::HalfPlaneToDisc if z.re == 0.0 => Complex64::new(out.re, 0.0),
        _ => out,
    })
}

/// Maps a list of zeros.
pub fn transfer_zeros(zeros: &[Complex64], direction: Direction) -> Result<Vec<Complex64>> {
    zeros.iter().map(|z| map_point(*z, direction)).collect()
}

/// Disc zeros to the half-plane Blaschke product with the corresponding zeros.
pub fn blaschke_from_disc(zeros: &[Complex64]) -> Result<BlaschkeProduct> {
    BlaschkeProduct::general(transfer_zeros(zeros, Direction::DiscToHalfPlane)?)
}

/// Half-plane product to its disc zeros.
pub fn blaschke_to_disc(b: &BlaschkeProduct) -> Result<Vec<Complex64>> {
    transfer_zeros(b.zeros(), Direction::HalfPlaneToDisc)
}

/// Transfers a sampled function by moving its sample points; values are unchanged.
pub fn transfer_samples(f: &SampledFunction, direction: Direction) -> Result<SampledFunction> {
    Ok(SampledFunction::new(transfer_zeros(&f.points, direction)?, f.values.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn disc_origin_lands_on_axis() {
        let z = map_point(c(0.0, 0.0), Direction::DiscToHalfPlane).unwrap();
        assert_eq!(z, c(0.0, 1.0));
    }

    #[test]
    fn round_trip_is_identity() {
        for a in [c(1.0, 1.0), c(-1.0, 1.0), c(0.0, 3.0), c(5.0, 0.01)] {
            let w = map_point(a, Direction::HalfPlaneToDisc).unwrap();
            assert!(w.norm() < 1.0);
            let back = map_point(w, Direction::DiscToHalfPlane).unwrap();
            assert!((back - a).norm() < 1e-12);
        }
    }

    #[test]
    fn conjugate_disc_pair_becomes_mirror_pair() {
        let r = c(0.3, 0.4);
        let z1 = map_point(r, Direction::DiscToHalfPlane).unwrap();
        let z2 = map_point(r.conj(), Direction::DiscToHalfPlane).unwrap();
        // i (1 + r) / (1 - r) by hand: (1.3 + 0.4i) / (0.7 - 0.4i) = (0.75 + 0.8i) / 0.65
        let oracle = c(0.0, 1.0) * c(0.75, 0.8) / 0.65;
        assert!((z1 - oracle).norm() < 1e-14);
        assert!((z2 - c(-z1.re, z1.im)).norm() < 1e-14);
        assert!(z1.im > 0.0);
    }

    #[test]
    fn poles_are_rejected() {
        assert!(matches!(disc_to_half_plane(c(1.0, 0.0)), Err(Error::ExcludedPoint(_))));
        assert!(matches!(half_plane_to_disc(c(0.0, -1.0)), Err(Error::ExcludedPoint(_))));
    }
}
