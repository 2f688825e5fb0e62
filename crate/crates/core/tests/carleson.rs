use proptest::prelude::*;
use stabrank_core::carleson::decomposition::reflection_defect;
use stabrank_core::carleson::{
    build_generations, carleson_intensity, stopping_intervals, triple_square_mass, DecompositionOptions, PointMassMeasure,
};
use stabrank_core::geometry::Interval;
use stabrank_core::{BlaschkeProduct, Complex64, Error};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Naive intensity: every square whose base starts or ends at an atom abscissa, with side equal
/// to an atom height or to a gap between abscissas.
fn naive_intensity(atoms: &[(Complex64, f64)]) -> f64 {
    let mut sides: Vec<f64> = atoms.iter().map(|a| a.0.im).collect();
    for a in atoms {
        for b in atoms {
            let d = (a.0.re - b.0.re).abs();
            if d > 0.0 {
                sides.push(d);
            }
        }
    }
    let mut best: f64 = 0.0;
    for &l in &sides {
        for a in atoms {
            // closed squares: rounding in lo + l must not drop the anchoring atom
            let slack = 1e-13 * (l + a.0.re.abs());
            for lo in [a.0.re, a.0.re - l] {
                let mass: f64 = atoms.iter().filter(|b| b.0.re >= lo - slack && b.0.re <= lo + l + slack && b.0.im <= l).map(|b| b.1).sum();
                best = best.max(mass / l);
            }
        }
    }
    best
}

fn intensity_of_zeros(zeros: &[Complex64]) -> f64 {
    carleson_intensity(&PointMassMeasure::from_zeros(zeros)).value
}

/// 20 mirror pairs just off the axis at height about 1: total mass about 40.
fn stacked() -> BlaschkeProduct {
    let mut z = Vec::new();
    for k in 0..20 {
        let a = c(0.01 * (k + 1) as f64, 1.0 + 0.001 * k as f64);
        z.push(a);
        z.push(c(-a.re, a.im));
    }
    BlaschkeProduct::new(z).unwrap()
}

fn dyadic(base: Interval, depth: usize) -> Vec<Interval> {
    let mut out = vec![base];
    let mut level = vec![base];
    for _ in 0..depth {
        level = level
            .iter()
            .flat_map(|j| {
                let (a, b) = j.halves();
                [a, b]
            })
            .collect();
        out.extend(&level);
    }
    out
}

/// Brute-force check of (i), (ii), (iv) and maximality for one selection.
fn brute_force_selection(b: &BlaschkeProduct, base: Interval, m: f64, eta: f64, selected: &[Interval]) {
    let total: f64 = selected.iter().map(|j| j.len()).sum();
    assert!(total <= 20.0 * (1.0 / eta).ln() * base.len() / m * (1.0 + 1e-12), "(i) {total}");
    for j in selected {
        let t = j.triple();
        let mass: f64 = b.zeros().iter().filter(|a| a.re >= t.lo && a.re <= t.hi && a.im <= t.len()).map(|a| a.im).sum();
        assert!(mass >= m * j.len(), "(ii) {j:?}: {mass}");
    }
    let residual: Vec<(Complex64, f64)> = b
        .zeros()
        .iter()
        .filter(|a| base.square_contains(**a) && !selected.iter().any(|j| j.square_contains(**a)))
        .map(|a| (*a, a.im))
        .collect();
    assert!(naive_intensity(&residual) <= 5.0 * m * (1.0 + 1e-12), "(iv)");
    for j in dyadic(base, 10) {
        let heavy = triple_square_mass(b, j) >= m * j.len();
        let above = selected.iter().any(|s| j.lo <= s.lo && s.hi <= j.hi && j.len() > s.len());
        assert!(!(heavy && above), "selection not maximal under {j:?}");
    }
}

#[test]
fn intensity_examples() {
    assert_eq!(intensity_of_zeros(&[c(0.3, 0.7)]), 1.0);
    assert_eq!(intensity_of_zeros(&[c(0.0, 1.0), c(0.0, 2.0)]), 1.5);
    assert_eq!(intensity_of_zeros(&[]), 0.0);
}

#[test]
fn single_zero_selects_nothing() {
    let b = BlaschkeProduct::new(vec![c(0.0, 1.0)]).unwrap();
    let base = Interval::new(-8.0, 8.0);
    let r = stopping_intervals(&b, base, 100.0, 0.5).unwrap();
    assert!(r.intervals.is_empty());
    for j in dyadic(base, 12) {
        assert!(triple_square_mass(&b, j) < 100.0 * j.len());
    }
}

#[test]
fn heavy_stack_is_selected_and_verified() {
    let b = stacked();
    let base = Interval::new(-8.0, 8.0);
    let r = stopping_intervals(&b, base, 10.0, 0.01).unwrap();
    assert!(!r.intervals.is_empty());
    brute_force_selection(&b, base, 10.0, 0.01, &r.intervals);
}

#[test]
fn axis_zero_goes_to_sigma1() {
    let p = BlaschkeProduct::new(vec![c(0.0, 1.0)]).unwrap();
    let q = BlaschkeProduct::new(vec![c(0.0, 5.0)]).unwrap();
    let d = build_generations(&p, &q, 0.01, DecompositionOptions::default()).unwrap();
    assert!(d.components.is_empty());
    assert_eq!(d.sigma1, vec![c(0.0, 1.0)]);
    for s in &d.stopping {
        brute_force_selection(&p, s.base, s.mass_threshold, s.eta, &s.intervals);
    }
}

#[test]
fn empty_product_gives_empty_decomposition() {
    let q = BlaschkeProduct::new(vec![c(0.0, 1.0)]).unwrap();
    let d = build_generations(&BlaschkeProduct::one(), &q, 0.01, DecompositionOptions::default()).unwrap();
    assert!(d.generations.is_empty() && d.components.is_empty() && d.sigma1.is_empty());
}

#[test]
fn clustered_zeros_give_mirror_closed_components() {
    let mut zeros = Vec::new();
    for k in 0..6 {
        let a = c(0.6 + 0.02 * k as f64, 0.05 + 0.01 * k as f64);
        zeros.push(a);
        zeros.push(c(-a.re, a.im));
    }
    let p = BlaschkeProduct::new(zeros).unwrap();
    let q = BlaschkeProduct::new(vec![c(0.0, 3.0)]).unwrap();
    let d = build_generations(&p, &q, 0.05, DecompositionOptions { mass_threshold: Some(0.3) }).unwrap();
    assert!(!d.components.is_empty());
    assert_eq!(reflection_defect(&d), None);
    for s in &d.stopping {
        brute_force_selection(&p, s.base, s.mass_threshold, s.eta, &s.intervals);
    }
    for comp in &d.components {
        let m = &d.components[comp.mirror];
        assert!((m.perimeter - comp.perimeter).abs() <= 1e-12 * comp.perimeter);
    }
    let placed: usize = d.components.iter().map(|k| k.zeros.len()).sum::<usize>() + d.sigma1.len();
    assert_eq!(placed, p.degree());
}

fn atoms() -> impl Strategy<Value = Vec<(Complex64, f64)>> {
    prop::collection::vec((-4.0f64..4.0, 0.01f64..3.0, 0.1f64..2.0), 1..9)
        .prop_map(|v| v.into_iter().map(|(x, y, w)| (c(x, y), w)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intensity_matches_naive_search(a in atoms()) {
        let m = PointMassMeasure { atoms: a.iter().map(|(p, w)| stabrank_core::carleson::Atom { point: *p, weight: *w }).collect() };
        let fast = carleson_intensity(&m).value;
        let slow = naive_intensity(&a);
        prop_assert!((fast - slow).abs() <= 1e-12 * slow.max(1.0), "{fast} vs {slow}");
    }

    #[test]
    fn stopping_selection_survives_brute_force(
        pairs in prop::collection::vec((0.01f64..2.0, 0.02f64..1.0), 1..12),
        m in 0.5f64..20.0,
        eta in 0.001f64..0.5,
    ) {
        let mut z = Vec::new();
        for (x, y) in pairs {
            z.push(c(x, y));
            z.push(c(-x, y));
        }
        prop_assume!(z.iter().enumerate().all(|(i, a)| z[..i].iter().all(|b| (a - b).norm() > 1e-6)));
        let b = BlaschkeProduct::new(z).unwrap();
        let base = Interval::new(-8.0, 8.0);
        match stopping_intervals(&b, base, m, eta) {
            Ok(r) => brute_force_selection(&b, base, m, eta, &r.intervals),
            Err(Error::NoTopHalfWitness { .. }) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn decompositions_are_mirror_closed(
        pairs in prop::collection::vec((0.05f64..1.5, 0.02f64..0.3), 1..6),
        ys in prop::collection::vec(0.02f64..0.3, 0..3),
    ) {
        let mut z = Vec::new();
        for (x, y) in pairs {
            z.push(c(x, y));
            z.push(c(-x, y));
        }
        z.extend(ys.iter().map(|y| c(0.0, *y)));
        prop_assume!(z.iter().enumerate().all(|(i, a)| z[..i].iter().all(|b| (a - b).norm() > 1e-3)));
        let p = BlaschkeProduct::new(z).unwrap();
        let q = BlaschkeProduct::new(vec![c(0.0, 5.0)]).unwrap();
        if let Ok(d) = build_generations(&p, &q, 0.05, DecompositionOptions { mass_threshold: Some(0.3) }) {
            prop_assert_eq!(reflection_defect(&d), None);
            for s in &d.stopping {
                brute_force_selection(&p, s.base, s.mass_threshold, s.eta, &s.intervals);
            }
        }
    }
}
