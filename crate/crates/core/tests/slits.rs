use proptest::prelude::*;
use stabrank_core::carleson::{build_generations, CarlesonDecomposition, DecompositionOptions};
use stabrank_core::slits::{build_slit_system, census_grid, gamma_rule, rank_of, verify_slits, PairingKind, SlitKind, SlitSystem};
use stabrank_core::suite::admissible_suite;
use stabrank_core::{BlaschkeProduct, Complex64, Error};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn axis(ys: &[f64]) -> BlaschkeProduct {
    BlaschkeProduct::new(ys.iter().map(|y| c(0.0, *y)).collect()).unwrap()
}

fn clustered(shift: f64) -> (BlaschkeProduct, BlaschkeProduct, CarlesonDecomposition) {
    let mut zeros = Vec::new();
    for k in 0..6 {
        let a = c(0.6 + shift + 0.02 * k as f64, 0.05 + 0.01 * k as f64);
        zeros.push(a);
        zeros.push(c(-a.re, a.im));
    }
    let p = BlaschkeProduct::new(zeros).unwrap();
    let q = axis(&[3.0]);
    let d = build_generations(&p, &q, 0.05, DecompositionOptions { mass_threshold: Some(0.3) }).unwrap();
    (p, q, d)
}

fn assert_mirror_closed(sys: &SlitSystem) {
    for s in &sys.slits {
        let m = s.mirror();
        assert!(sys.slits.iter().any(|t| t.kind == s.kind && t.polyline == m.polyline), "no mirror for the slit at {}", s.origin);
    }
}

/// `#{k >= 1 : c / 2^(k+2) > b}` by halving `c` directly.
fn gamma_count(b: f64, c: f64) -> usize {
    let mut n = 0;
    let mut t = c / 8.0;
    while t > b && n < 63 {
        n += 1;
        t /= 2.0;
    }
    n
}

#[test]
fn gamma_rule_worked_example() {
    let g = gamma_rule(1.0 / 64.0, 1.0);
    let lengths: Vec<f64> = g.iter().map(|s| s.length).collect();
    assert_eq!(lengths, vec![0.5, 0.25, 0.125]);
    assert_eq!(g.iter().map(|s| s.k).collect::<Vec<_>>(), vec![1, 2, 3]);
    assert!(gamma_rule(1.0, 1.0).is_empty());
}

#[test]
fn ranks_bracket_altitudes() {
    for d in [1e-6, 0.1, 0.5, 1.0, 3.0, 4096.0] {
        let k = rank_of(d);
        assert!(2f64.powi(k) <= d && d < 2f64.powi(k + 1));
    }
}

#[test]
fn clustered_slits_pass_the_geometric_checks() {
    let (_, q, d) = clustered(0.0);
    let sys = build_slit_system(&d, &q, 0.05).unwrap();
    assert!(sys.count(SlitKind::Vertical) > 0);
    let component_slits: Vec<_> = sys.slits.iter().filter(|s| s.kind != SlitKind::AxisConnector).cloned().collect();
    verify_slits(&component_slits, &d, 0.05).unwrap();
    assert!(sys.slits.iter().all(|s| s.rank_ok()));
    assert_mirror_closed(&sys);
    let census = census_grid(&d, &sys, 2.0, 1.0, 64);
    assert!(census.max_slits_per_rank <= 4, "{census:?}");
}

#[test]
fn axis_zeros_around_an_interval_pair_up() {
    let p = axis(&[1.0, 4.0]);
    let q = axis(&[2.0]);
    let d = build_generations(&p, &q, 0.01, DecompositionOptions::default()).unwrap();
    let sys = build_slit_system(&d, &q, 0.01).unwrap();
    assert_eq!(sys.pairings.len(), 1);
    assert_eq!(sys.pairings[0].kind, PairingKind::ZeroZero);
    assert_eq!(sys.count(SlitKind::AxisConnector), 1);
}

#[test]
fn odd_gap_is_a_sign_violation() {
    let p = axis(&[2.0]);
    let q = axis(&[1.0, 4.0]);
    let d = build_generations(&p, &q, 0.01, DecompositionOptions::default()).unwrap();
    assert!(matches!(build_slit_system(&d, &q, 0.01), Err(Error::SignCondition { .. })));
}

#[test]
fn suite_slit_systems_verify() {
    for pair in admissible_suite(6, 1000) {
        let dp = pair.epsilon / 10.0;
        let d = build_generations(&pair.f1, &pair.f2, dp, DecompositionOptions::default()).unwrap();
        let sys = build_slit_system(&d, &pair.f2, dp).unwrap();
        assert_mirror_closed(&sys);
    }
}

proptest! {
    #[test]
    fn gamma_rule_matches_direct_count(b in 1e-6f64..1.0, c in 1e-3f64..10.0) {
        let g = gamma_rule(b, c);
        prop_assert_eq!(g.len(), gamma_count(b, c));
        for s in &g {
            let h = c / 2f64.powi(s.k as i32);
            prop_assert_eq!(s.height, h);
            prop_assert_eq!(s.length, h);
            prop_assert!(h / 4.0 > b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shifted_clusters_give_mirror_closed_systems(shift in 0.0f64..1.0) {
        let (_, q, d) = clustered(shift);
        let sys = build_slit_system(&d, &q, 0.05).unwrap();
        assert_mirror_closed(&sys);
    }
}
