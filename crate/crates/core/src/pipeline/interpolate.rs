//! Bounded symmetric interpolation at finitely many nodes of the upper half-plane.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfplane::{factor, reflect};

/// Upper end of the norm search.
pub const MAX_NORM: f64 = 1e6;
/// Required agreement `|h(z_i) - w_i|`.
pub const NODE_TOLERANCE: f64 = 1e-8;
/// Safety factor applied to the minimal feasible norm before realization.
pub const NORM_MARGIN: f64 = 1.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpolationProblem {
    pub nodes: Vec<Complex64>,
    pub targets: Vec<Complex64>,
    pub gamma: f64,
}

impl InterpolationProblem {
    /// Checks distinct nodes in the upper half-plane, a reflection-closed node set and
    /// `target(-conj z) = conj target(z)` to the node tolerance.
    pub fn validate(&self) -> Result<()> {
        if self.nodes.len() != self.targets.len() {
            return Err(Error::Inconsistent(format!("{} nodes but {} targets", self.nodes.len(), self.targets.len())));
        }
        for (i, z) in self.nodes.iter().enumerate() {
            if !(z.im > 0.0) {
                return Err(Error::NotUpperHalfPlane(*z));
            }
            if self.nodes[..i].contains(z) {
                return Err(Error::RepeatedZero(*z));
            }
            let m = self.nodes.iter().position(|y| *y == reflect(*z)).ok_or(Error::NotReflectionClosed)?;
            if (self.targets[m] - self.targets[i].conj()).norm() > NODE_TOLERANCE {
                return Err(Error::Inconsistent(format!("targets at {z} and its reflection are not conjugate")));
            }
        }
        Ok(())
    }
}

/// `P_ij = (rho^2 - w_i conj w_j) / (-i (z_i - conj z_j))`.
pub fn pick_matrix(nodes: &[Complex64], targets: &[Complex64], rho: f64) -> DMatrix<Complex64> {
    let n = nodes.len();
    DMatrix::from_fn(n, n, |i, j| {
        let num = Complex64::new(rho * rho, 0.0) - targets[i] * targets[j].conj();
        num / (Complex64::new(0.0, -1.0) * (nodes[i] - nodes[j].conj()))
    })
}

/// Smallest eigenvalue of the Hermitian part, relative to the largest magnitude.
pub fn pick_min_eigenvalue(p: &DMatrix<Complex64>) -> f64 {
    let h = (p + p.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigenvalues();
    let scale = eig.iter().map(|e| e.abs()).fold(0.0, f64::max);
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    if scale > 0.0 {
        min / scale
    } else {
        0.0
    }
}

fn feasible(nodes: &[Complex64], targets: &[Complex64], rho: f64) -> bool {
    pick_min_eigenvalue(&pick_matrix(nodes, targets, rho)) >= -1e-12
}

/// Schur-algorithm realization of a disc-valued interpolant, evaluated by backward recursion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchurInterpolant {
    pub nodes: Vec<Complex64>,
    pub gammas: Vec<Complex64>,
    pub rho: f64,
}

impl SchurInterpolant {
    /// Builds `f` with `f(z_i) = w_i / rho`; every Schur parameter must lie in the open disc.
    pub fn new(nodes: &[Complex64], targets: &[Complex64], rho: f64) -> Result<Self> {
        let n = nodes.len();
        let mut vals: Vec<Complex64> = targets.iter().map(|w| w / rho).collect();
        let mut gammas = Vec::with_capacity(n);
        for k in 0..n {
            let g = vals[k];
            if !(g.norm() < 1.0 - 1e-14) {
                return Err(Error::IllConditioned(format!("Schur parameter {k} has modulus {:.17}", g.norm())));
            }
            gammas.push(g);
            for j in k + 1..n {
                let b = factor(nodes[k], nodes[j]);
                vals[j] = (vals[j] - g) / ((Complex64::new(1.0, 0.0) - g.conj() * vals[j]) * b);
            }
        }
        Ok(SchurInterpolant { nodes: nodes.to_vec(), gammas, rho })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut f = Complex64::new(0.0, 0.0);
        for (a, g) in self.nodes.iter().zip(&self.gammas).rev() {
            let bf = factor(*a, z) * f;
            f = (g + bf) / (Complex64::new(1.0, 0.0) + g.conj() * bf);
        }
        f * self.rho
    }
}

/// `h = (l + l†)/2` for the realized interpolant `l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricInterpolant {
    pub inner: Option<SchurInterpolant>,
    /// Constant value when every target is equal and real.
    pub constant: Option<f64>,
    pub rho_min: f64,
    pub node_error: f64,
}

impl SymmetricInterpolant {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        if let Some(c) = self.constant {
            return Complex64::new(c, 0.0);
        }
        let l = self.inner.as_ref().expect("interpolant without realization");
        (l.eval(z) + l.eval(reflect(z)).conj()) * 0.5
    }

    pub fn rho(&self) -> f64 {
        self.inner.as_ref().map(|l| l.rho).unwrap_or(self.rho_min)
    }
}

/// Smallest norm at which the Pick matrix is positive semidefinite, by bisection.
pub fn minimal_norm(nodes: &[Complex64], targets: &[Complex64]) -> Result<f64> {
    let mut lo = targets.iter().map(|t| t.norm()).fold(0.0, f64::max);
    let mut hi = MAX_NORM;
    if !feasible(nodes, targets, hi) {
        let p = pick_matrix(nodes, targets, hi);
        return Err(Error::IllConditioned(format!(
            "Pick matrix is not positive semidefinite at norm {MAX_NORM:e} (relative min eigenvalue {:.3e})",
            pick_min_eigenvalue(&p)
        )));
    }
    if feasible(nodes, targets, lo) {
        return Ok(lo);
    }
    while hi - lo > 1e-9 * hi {
        let mid = 0.5 * (lo + hi);
        if feasible(nodes, targets, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Mirror pairs searched exhaustively by [`choose_branches`]; more pairs use coordinate descent.
pub const BRANCH_SEARCH_PAIRS: usize = 5;

/// Adds `2 pi i k` with `k` in `{-1, 0, 1}` to the target at each right-half node and the
/// conjugate shift at its mirror, keeping the choice with the least [`minimal_norm`]. Every
/// choice is a logarithm of the same values; axis targets stay real. Ties keep `k = 0`.
pub fn choose_branches(problem: &InterpolationProblem) -> Result<InterpolationProblem> {
    problem.validate()?;
    let pairs: Vec<(usize, usize)> = problem
        .nodes
        .iter()
        .enumerate()
        .filter(|(_, z)| z.re > 0.0)
        .filter_map(|(i, z)| problem.nodes.iter().position(|y| *y == reflect(*z)).map(|m| (i, m)))
        .collect();
    if pairs.is_empty() {
        return Ok(problem.clone());
    }
    let shifted = |ks: &[i32]| {
        let mut t = problem.targets.clone();
        for (&(i, m), &k) in pairs.iter().zip(ks) {
            let d = Complex64::new(0.0, 2.0 * std::f64::consts::PI * k as f64);
            t[i] += d;
            t[m] -= d;
        }
        t
    };
    let norm_of = |ks: &[i32]| minimal_norm(&problem.nodes, &shifted(ks));
    let mut best = vec![0i32; pairs.len()];
    let mut best_norm = norm_of(&best)?;
    let better = |n: f64, b: f64| n < b * (1.0 - 1e-9);
    if pairs.len() <= BRANCH_SEARCH_PAIRS {
        let count = 3usize.pow(pairs.len() as u32);
        for code in 0..count {
            let ks: Vec<i32> = (0..pairs.len()).map(|p| (code / 3usize.pow(p as u32) % 3) as i32 - 1).collect();
            if let Ok(n) = norm_of(&ks) {
                if better(n, best_norm) {
                    best_norm = n;
                    best = ks;
                }
            }
        }
    } else {
        let mut improved = true;
        while improved {
            improved = false;
            for p in 0..pairs.len() {
                for k in [-1, 1] {
                    let mut ks = best.clone();
                    ks[p] += k;
                    if ks[p].abs() > 1 {
                        continue;
                    }
                    if let Ok(n) = norm_of(&ks) {
                        if better(n, best_norm) {
                            best_norm = n;
                            best = ks;
                            improved = true;
                        }
                    }
                }
            }
        }
    }
    Ok(InterpolationProblem { nodes: problem.nodes.clone(), targets: shifted(&best), gamma: problem.gamma })
}

/// Minimal-norm search by bisection on the Pick matrix, realization at `1.01 rho`, then
/// symmetrization. Fails if no norm below [`MAX_NORM`] is feasible.
pub fn interpolate_symmetric(problem: &InterpolationProblem) -> Result<SymmetricInterpolant> {
    problem.validate()?;
    let (z, w) = (&problem.nodes, &problem.targets);
    if let Some(first) = w.first() {
        if w.iter().all(|t| *t == *first) && first.im == 0.0 {
            return Ok(SymmetricInterpolant { inner: None, constant: Some(first.re), rho_min: first.re.abs(), node_error: 0.0 });
        }
    } else {
        return Ok(SymmetricInterpolant { inner: None, constant: Some(0.0), rho_min: 0.0, node_error: 0.0 });
    }
    let rho_min = minimal_norm(z, w)?;
    let l = SchurInterpolant::new(z, w, NORM_MARGIN * rho_min)?;
    let mut h = SymmetricInterpolant { inner: Some(l), constant: None, rho_min, node_error: 0.0 };
    h.node_error = z.iter().zip(w).map(|(a, t)| (h.eval(*a) - t).norm()).fold(0.0, f64::max);
    if !(h.node_error < NODE_TOLERANCE) {
        return Err(Error::Tolerance {
            stage: "interpolation",
            detail: format!("node mismatch {:.3e} exceeds {:.0e}", h.node_error, NODE_TOLERANCE),
        });
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_axis_node_gives_the_constant() {
        let p = InterpolationProblem { nodes: vec![c(0.0, 2.0)], targets: vec![c(-0.7, 0.0)], gamma: 0.1 };
        let h = interpolate_symmetric(&p).unwrap();
        assert_eq!(h.eval(c(3.0, 0.1)), c(-0.7, 0.0));
    }

    #[test]
    fn axis_only_targets_keep_their_branch() {
        let p = InterpolationProblem { nodes: vec![c(0.0, 1.0), c(0.0, 3.0)], targets: vec![c(2.0, 0.0), c(-1.0, 0.0)], gamma: 0.1 };
        assert_eq!(choose_branches(&p).unwrap().targets, p.targets);
    }

    #[test]
    fn branch_shift_lowers_the_norm() {
        let a = c(0.5, 1.0);
        let p = InterpolationProblem {
            nodes: vec![c(0.0, 1.0), a, reflect(a)],
            targets: vec![c(0.0, 0.0), c(0.1, 5.0), c(0.1, -5.0)],
            gamma: 0.1,
        };
        let q = choose_branches(&p).unwrap();
        let shift = q.targets[1] - p.targets[1];
        assert!((shift - c(0.0, -2.0 * std::f64::consts::PI)).norm() < 1e-12, "{shift}");
        assert_eq!(q.targets[2], q.targets[1].conj());
        assert_eq!(q.targets[0], p.targets[0]);
        assert!(minimal_norm(&q.nodes, &q.targets).unwrap() < minimal_norm(&p.nodes, &p.targets).unwrap());
    }

    #[test]
    fn mirror_pair_matches_both_nodes() {
        let a = c(1.0, 1.0);
        let p = InterpolationProblem { nodes: vec![a, reflect(a)], targets: vec![c(0.3, 0.4), c(0.3, -0.4)], gamma: 0.1 };
        let h = interpolate_symmetric(&p).unwrap();
        assert!((h.eval(a) - c(0.3, 0.4)).norm() < 1e-12);
        assert!((h.eval(reflect(a)) - c(0.3, -0.4)).norm() < 1e-12);
        let z = c(0.7, 2.3);
        assert!((h.eval(reflect(z)) - h.eval(z).conj()).norm() < 1e-15);
    }

    #[test]
    fn unsymmetric_targets_are_rejected() {
        let a = c(1.0, 1.0);
        let p = InterpolationProblem { nodes: vec![a, reflect(a)], targets: vec![c(0.3, 0.4), c(0.3, 0.4)], gamma: 0.1 };
        assert!(matches!(interpolate_symmetric(&p), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn pick_bound_for_two_axis_nodes() {
        // for two nodes the Pick determinant vanishes at the exact minimal norm
        let nodes = vec![c(0.0, 1.0), c(0.0, 3.0)];
        let targets = vec![c(1.0, 0.0), c(-1.0, 0.0)];
        let p = InterpolationProblem { nodes: nodes.clone(), targets: targets.clone(), gamma: 0.1 };
        let h = interpolate_symmetric(&p).unwrap();
        let det = pick_matrix(&nodes, &targets, h.rho_min).determinant().norm();
        let scale = pick_matrix(&nodes, &targets, h.rho_min).norm().powi(2);
        assert!(det < 1e-7 * scale);
        assert!(h.rho_min > 1.0);
    }
}
