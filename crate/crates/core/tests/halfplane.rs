use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use stabrank_core::halfplane::transfer::{blaschke_from_disc, blaschke_to_disc, half_plane_to_disc};
use stabrank_core::halfplane::zerofile::format_zeros;
use stabrank_core::halfplane::{
    axis_sign_condition, corona_delta, log_modulus_sum, parse_zeros, pseudo_distance, reflect, SampledFunction, SignOutcome,
};
use stabrank_core::{BlaschkeProduct, Complex64, Error};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn axis(ys: &[f64]) -> BlaschkeProduct {
    BlaschkeProduct::new(ys.iter().map(|y| c(0.0, *y)).collect()).unwrap()
}

/// Reflection-closed zero sets: up to three mirror pairs and up to three axis zeros.
fn symmetric_zeros() -> impl Strategy<Value = Vec<Complex64>> {
    (prop::collection::vec((0.05f64..4.0, 0.05f64..4.0), 0..4), prop::collection::vec(0.05f64..4.0, 0..4))
        .prop_map(|(pairs, ys)| {
            let mut z = Vec::new();
            for (x, y) in pairs {
                z.push(c(x, y));
                z.push(c(-x, y));
            }
            z.extend(ys.iter().map(|y| c(0.0, *y)));
            z
        })
        .prop_filter("distinct zeros", |z| z.iter().enumerate().all(|(i, a)| z[..i].iter().all(|b| (a - b).norm() > 1e-3)))
}

fn upper_point() -> impl Strategy<Value = Complex64> {
    (-6.0f64..6.0, 0.01f64..6.0).prop_map(|(x, y)| c(x, y))
}

#[test]
fn evaluation_examples() {
    let b = axis(&[1.0]);
    assert_eq!(b.eval(c(0.0, 1.0)), c(0.0, 0.0));
    let z = b.eval(c(3.0, 0.0));
    assert_abs_diff_eq!(z.norm(), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!((z - c(3.0, -1.0) / c(3.0, 1.0)).norm(), 0.0, epsilon = 1e-15);

    // direct arithmetic: (2i - a)/(2i - conj a) for a = 1+i and -1+i
    let b = BlaschkeProduct::new(vec![c(1.0, 1.0), c(-1.0, 1.0)]).unwrap();
    let w = c(0.0, 2.0);
    let direct = (w - c(1.0, 1.0)) / (w - c(1.0, -1.0)) * ((w - c(-1.0, 1.0)) / (w - c(-1.0, -1.0)));
    let v = b.eval(w);
    assert_abs_diff_eq!((v - direct).norm(), 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(v.re, 0.2, epsilon = 1e-15);
}

#[test]
fn constructor_rejects_bad_zero_sets() {
    assert!(matches!(BlaschkeProduct::new(vec![c(1.0, 1.0)]), Err(Error::NotSymmetric(_))));
    assert!(matches!(BlaschkeProduct::new(vec![c(0.0, -1.0)]), Err(Error::NotUpperHalfPlane(_))));
    assert!(matches!(BlaschkeProduct::new(vec![c(0.0, 1.0), c(0.0, 1.0)]), Err(Error::RepeatedZero(_))));
}

#[test]
fn zero_file_completes_reflections_and_round_trips() {
    let f = parse_zeros("# two zeros\n1.0 1.0\n0 2\n").unwrap();
    assert_eq!(f.completed, vec![c(-1.0, 1.0)]);
    assert_eq!(f.product.degree(), 3);
    let again = parse_zeros(&format_zeros(&f.product)).unwrap();
    assert_eq!(again.product, f.product);
    assert!(again.completed.is_empty());
    assert!(matches!(parse_zeros("1.0\n"), Err(Error::Parse { line: 1, .. })));
}

#[test]
fn symmetrization_examples() {
    let pts: Vec<Complex64> = (0..5).flat_map(|k| [c(0.3 * k as f64, 1.0), c(-0.3 * k as f64, 1.0)]).collect();
    let iz = SampledFunction::from_fn(pts.clone(), |z| c(0.0, 1.0) * z);
    let s = iz.symmetrize().unwrap();
    for (a, b) in s.values.iter().zip(&iz.values) {
        assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-15);
    }
    let id = SampledFunction::from_fn(pts, |z| z);
    assert!(id.symmetrize().unwrap().values.iter().all(|v| v.norm() < 1e-15));
}

#[test]
fn corona_delta_examples() {
    let d = corona_delta(&axis(&[1.0]), &axis(&[2.0]), 256);
    assert!(d.unimodular);
    // |y-1|/(y+1) + |y-2|/(y+2) on the axis is 1/3 at both endpoints of [1, 2]
    assert!(d.delta <= 1.0 / 3.0 + 1e-9 && d.delta > 0.3, "{}", d.delta);
    assert!(!corona_delta(&axis(&[1.0]), &axis(&[1.0]), 256).unimodular);
    let one = corona_delta(&BlaschkeProduct::one(), &axis(&[1.0]), 256);
    assert_abs_diff_eq!(one.delta, 1.0, epsilon = 1e-12);
}

#[test]
fn corona_delta_matches_refined_axis_minimum() {
    let (f1, f2) = (axis(&[1.0]), axis(&[2.0]));
    let d = corona_delta(&f1, &f2, 256).delta;
    let fine = (0..=200_000)
        .map(|k| c(0.0, 0.5 + 3.0 * k as f64 / 200_000.0))
        .map(|z| f1.eval(z).norm() + f2.eval(z).norm())
        .fold(f64::INFINITY, f64::min);
    assert!((d - fine).abs() < 1e-6, "{d} vs {fine}");
}

#[test]
fn sign_condition_examples() {
    match axis_sign_condition(&axis(&[1.0, 3.0]), &axis(&[2.0]), 0.1).unwrap() {
        SignOutcome::Holds { sign, intervals, .. } => {
            assert_eq!(sign, -1);
            assert_eq!(intervals.len(), 1);
            assert!(intervals.contains(2.0));
        }
        other => panic!("{other:?}"),
    }
    match axis_sign_condition(&axis(&[2.0]), &axis(&[1.0, 4.0]), 0.05).unwrap() {
        SignOutcome::Violated { violation, .. } => {
            assert!(violation.value_low * violation.value_high < 0.0);
            assert!((violation.y_low - 1.0).abs() < 0.2 && (violation.y_high - 4.0).abs() < 0.5, "{violation:?}");
        }
        other => panic!("{other:?}"),
    }
    let f2 = BlaschkeProduct::new(vec![c(3.0, 0.5), c(-3.0, 0.5)]).unwrap();
    match axis_sign_condition(&axis(&[1.0]), &f2, 0.01).unwrap() {
        SignOutcome::Holds { sign, intervals, .. } => assert!(sign == 1 && intervals.is_empty()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn transfer_examples() {
    let b = blaschke_from_disc(&[c(0.0, 0.0)]).unwrap();
    assert_eq!(b.zeros()[0].re, 0.0);
    let pair = blaschke_from_disc(&[c(0.3, 0.4), c(0.3, -0.4)]).unwrap();
    assert!(pair.is_symmetric());
    let back = blaschke_from_disc(&blaschke_to_disc(&pair).unwrap()).unwrap();
    for (a, b) in back.zeros().iter().zip(pair.zeros()) {
        assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-12);
    }
    assert!(half_plane_to_disc(c(0.0, -1.0)).is_err());
}

#[test]
fn log_modulus_example() {
    let r = log_modulus_sum(&axis(&[1.0]), c(0.0, 10.0), 0.5).unwrap();
    assert_abs_diff_eq!(r.lower, 20.0 / 121.0, epsilon = 1e-15);
    assert_abs_diff_eq!(r.actual, (11.0f64 / 9.0).ln(), epsilon = 1e-15);
    assert_abs_diff_eq!(r.upper, 40.0 / 121.0, epsilon = 1e-15);
    assert!(r.holds());
    let e = log_modulus_sum(&BlaschkeProduct::one(), c(0.0, 1.0), 0.5).unwrap();
    assert_eq!((e.lower, e.actual, e.upper), (0.0, 0.0, 0.0));
    assert!(matches!(log_modulus_sum(&axis(&[1.0]), c(0.0, 1.1), 0.5), Err(Error::BlasEstHypothesis { .. })));
}

proptest! {
    #[test]
    fn symmetric_products_are_real_on_the_axis(z in symmetric_zeros(), w in upper_point()) {
        let b = BlaschkeProduct::new(z).unwrap();
        let v = b.eval(w);
        let m = b.eval(reflect(w));
        prop_assert!((m - v.conj()).norm() <= 1e-12 * (1.0 + v.norm()));
        prop_assert!(b.eval(c(0.0, w.im)).im.abs() <= 1e-12);
    }

    #[test]
    fn modulus_is_below_one_inside(z in symmetric_zeros(), w in upper_point()) {
        let b = BlaschkeProduct::new(z).unwrap();
        prop_assert!(b.eval(w).norm() <= 1.0 + 1e-12);
        prop_assert!((b.eval(c(w.re, 0.0)).norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn log_modulus_bounds_hold(z in symmetric_zeros(), w in upper_point(), gamma in 0.01f64..0.99) {
        let b = BlaschkeProduct::new(z).unwrap();
        let min_rho = b.zeros().iter().map(|a| pseudo_distance(*a, w)).fold(1.0, f64::min);
        prop_assume!(min_rho >= gamma);
        let r = log_modulus_sum(&b, w, gamma).unwrap();
        prop_assert!(r.holds(), "{r:?}");
        prop_assert!((r.actual + b.log_abs(w)).abs() <= 1e-9 * (1.0 + r.actual.abs()));
    }

    #[test]
    fn symmetrize_is_an_idempotent_projection(z in symmetric_zeros(), xs in prop::collection::vec((0.0f64..3.0, 0.1f64..3.0), 1..8)) {
        let mut pts = Vec::new();
        for (x, y) in xs {
            pts.push(c(x, y));
            if x != 0.0 {
                pts.push(c(-x, y));
            }
        }
        let b = BlaschkeProduct::new(z).unwrap();
        let f = SampledFunction::from_fn(pts, |w| b.eval(w) * c(1.0, 0.7) + w);
        let once = f.symmetrize().unwrap();
        prop_assert_eq!(&once.symmetrize().unwrap().values, &once.values);
        prop_assert_eq!(once.symmetry_defect().unwrap(), 0.0);
    }

    #[test]
    fn transfer_round_trip(w in (-0.9f64..0.9, -0.9f64..0.9)) {
        let w = c(w.0, w.1);
        prop_assume!(w.norm() < 0.95);
        let b = blaschke_from_disc(&[w, w.conj()]).unwrap_or_else(|_| blaschke_from_disc(&[w]).unwrap());
        let back = blaschke_to_disc(&b).unwrap();
        prop_assert!(back.iter().any(|v| (v - w).norm() < 1e-12));
    }
}
