//! Instance builders shared by the benchmarks.

use num_complex::Complex64;
use stabrank_core::carleson::{build_generations, CarlesonDecomposition, DecompositionOptions};
use stabrank_core::slits::{build_slit_system, SlitSystem};
use stabrank_core::BlaschkeProduct;

/// Zeros on the imaginary axis at the given heights.
pub fn axis(heights: &[f64]) -> BlaschkeProduct {
    BlaschkeProduct::new(heights.iter().map(|y| Complex64::new(0.0, *y)).collect()).expect("valid zeros")
}

/// The reference pair `f1 = {i, 3i}`, `f2 = {2i}`.
pub fn reference_pair() -> (BlaschkeProduct, BlaschkeProduct) {
    (axis(&[1.0, 3.0]), axis(&[2.0]))
}

/// Decomposition and slits of the reference pair at `delta_prime`.
pub fn reference_geometry(delta_prime: f64) -> (CarlesonDecomposition, SlitSystem) {
    let (f1, f2) = reference_pair();
    let d = build_generations(&f1, &f2, delta_prime, DecompositionOptions::default()).expect("decomposition");
    let sys = build_slit_system(&d, &f2, delta_prime).expect("slits");
    (d, sys)
}

/// `n` distinct axis nodes with real targets that force a nontrivial interpolant.
pub fn pick_problem(n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let nodes = (0..n).map(|k| Complex64::new(0.0, 1.0 + k as f64 * 0.5)).collect();
    let targets = (0..n).map(|k| Complex64::new(if k % 2 == 0 { 0.5 } else { -0.5 }, 0.0)).collect();
    (nodes, targets)
}
