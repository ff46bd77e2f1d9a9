use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

use smoothcvx::bounds::{
    alpha_weights, analytical_region, cocoercivity_gap, descent_gap, global_bound_interval, local_condition, make_chain,
    min_chain_length, sum_identity, ChainConfig, HalfPlaneDistance,
};
use smoothcvx::counterexample::{sample_data, spline};
use smoothcvx::{Error, PointData};

type Q = BigRational;

/// `sum_i (alpha_i - xi + i + 1)^2 / (2 alpha_i + 1)` in exact arithmetic.
fn exact_direct_sum(n: usize, xi: &Q) -> Q {
    let one = Q::from_integer(1.into());
    (0..n)
        .map(|i| {
            let i = Q::from_integer(BigInt::from(i));
            let alpha = [Q::zero(), xi - &i - &one, &i - xi].into_iter().max().unwrap();
            let num = &alpha - xi + &i + &one;
            &num * &num / (Q::from_integer(2.into()) * &alpha + &one)
        })
        .sum()
}

fn pd(x: &[f64], f: f64, g: &[f64]) -> PointData {
    PointData::new(x.to_vec(), f, g.to_vec()).unwrap()
}

fn quad(z: &[f64]) -> PointData {
    PointData::half_norm_sq(z)
}

#[test]
fn hand_derived_sums() {
    assert_eq!(exact_direct_sum(4, &Q::new(3.into(), 2.into())), Q::new(25.into(), 4.into()));
    let (d, c) = sum_identity(4, 1.5).unwrap();
    assert!((d - 6.25).abs() <= 1e-12 && (c - 6.25).abs() <= 1e-12);
    for n in 1..=20 {
        let (d, c) = sum_identity(n, n as f64).unwrap();
        assert!(d.abs() <= 1e-12 && c.abs() <= 1e-12);
        let (d, c) = sum_identity(n, 0.0).unwrap();
        let n2 = (n * n) as f64;
        assert!((d - n2).abs() <= 1e-12 && (c - n2).abs() <= 1e-12);
    }
}

#[test]
fn alpha_examples() {
    let w = alpha_weights(4, 1.5).unwrap();
    assert_eq!((w.alpha, w.n1), (vec![0.5, 0.0, 0.5, 1.5], 1));
    let w = alpha_weights(3, 3.0).unwrap();
    assert_eq!((w.alpha, w.n1), (vec![2.0, 1.0, 0.0], 2));
    let w = alpha_weights(3, 0.0).unwrap();
    assert_eq!((w.alpha, w.n1), (vec![0.0, 1.0, 2.0], 0));
    assert!(matches!(alpha_weights(3, 3.5), Err(Error::Range(_))));
}

#[test]
fn gap_examples() {
    let px = pd(&[0.0, 0.0], 0.0, &[0.0, 0.0]);
    let py = pd(&[2.0, 0.0], 16991.0 / 23040.0, &[253.0 / 240.0, 77.0 / 120.0]);
    let (lo, up) = descent_gap(1.0, &px, &py).unwrap();
    assert!((lo - 16991.0 / 23040.0).abs() < 1e-15 && (up - (2.0 - 16991.0 / 23040.0)).abs() < 1e-15);
    assert!((cocoercivity_gap(1.0, &px, &py).unwrap() + 554.0 / 23040.0).abs() < 1e-15);
    let iv = global_bound_interval(1.0, &px, &py).unwrap();
    assert!((iv.lo - 64009.0 / 115200.0).abs() < 1e-15);
    assert!(iv.contains(py.f));
    assert!(matches!(global_bound_interval(1.0, &px, &px), Err(Error::Degenerate(_))));
    assert!(matches!(descent_gap(1.0, &px, &pd(&[1.0], 0.0, &[0.0])), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn chain_length_examples() {
    let d = 23.0 / 240.0;
    assert_eq!(min_chain_length(&[0.0, 0.0], &[2.0, 0.0], d, d).unwrap(), 21);
    assert_eq!(min_chain_length(&[0.0], &[1.0], 1.0, 1.0).unwrap(), 2);
    assert_eq!(min_chain_length(&[0.0], &[0.5], 1.0, 1.0).unwrap(), 1);
    assert!(local_condition(&[0.0, 0.0], &[0.05, 0.0], d));
    assert!(!local_condition(&[0.0, 0.0], &[2.0, 0.0], d));
}

#[test]
fn region_on_fine_grid() {
    for i in 0..=1000 {
        let t = i as f64 / 1000.0;
        let (inner, outer) = analytical_region(t).unwrap();
        assert_eq!((inner.lo, inner.hi), (t * t / 2.0, t - t * t / 2.0));
        assert!(outer.lo <= inner.lo && inner.hi <= outer.hi, "t = {t}");
        if i > 0 && i < 1000 {
            assert!(inner.lo > outer.lo || inner.hi < outer.hi, "t = {t}");
        }
    }
    let (inner, outer) = analytical_region(0.5).unwrap();
    assert_eq!((inner.lo, inner.hi, outer.lo, outer.hi), (0.125, 0.375, 0.0, 0.5));
}

/// Data of `F` at a random domain point, drawn on the rectangle `[-2, 3] x (-23/240, 2]`.
fn spline_point() -> impl Strategy<Value = PointData> {
    (-2.0f64..3.0, 0.0f64..1.0).prop_filter_map("inside the domain", |(a, u)| {
        sample_data(&spline(), [a, -23.0 / 240.0 + (2.0 + 23.0 / 240.0) * (1.0 - u)])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn sum_identity_holds(n in 1usize..=50, p in 0u32..=1000) {
        let xi = n as f64 * p as f64 / 1000.0;
        let (direct, closed) = sum_identity(n, xi).unwrap();
        let xi_q = Q::new(BigInt::from(n as u64 * p as u64), BigInt::from(1000));
        let exact = exact_direct_sum(n, &xi_q);
        let gap = &xi_q - Q::from_integer(BigInt::from(n));
        prop_assert_eq!(&exact, &(&gap * &gap));
        let exact = exact.to_f64().unwrap();
        let tol = 1e-9 * (n * n) as f64;
        prop_assert!((direct - exact).abs() <= tol && (closed - exact).abs() <= tol);
    }

    #[test]
    fn chain_is_evenly_spaced(x in prop::collection::vec(-5.0f64..5.0, 3), y in prop::collection::vec(-5.0f64..5.0, 3), n in 1usize..40) {
        prop_assume!(x != y);
        let pts = make_chain(&ChainConfig::new(x.clone(), y.clone(), n).unwrap());
        prop_assert_eq!(pts.len(), n + 1);
        prop_assert_eq!(&pts[0], &x);
        prop_assert_eq!(&pts[n], &y);
        let len = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum::<f64>().sqrt();
        let want = len(&x, &y) / n as f64;
        for w in pts.windows(2) {
            prop_assert!((len(&w[0], &w[1]) - want).abs() <= 1e-14 * len(&x, &y).max(1.0) * 4.0);
        }
    }

    #[test]
    fn quadratic_attains_equalities(x in prop::collection::vec(-3.0f64..3.0, 2), y in prop::collection::vec(-3.0f64..3.0, 2)) {
        let (px, py) = (quad(&x), quad(&y));
        prop_assert!(cocoercivity_gap(1.0, &px, &py).unwrap().abs() < 1e-12);
        let (lo, up) = descent_gap(1.0, &px, &py).unwrap();
        prop_assert!(lo >= -1e-12 && up.abs() < 1e-12);
    }

    #[test]
    fn global_bound_on_spline(px in spline_point(), py in spline_point()) {
        prop_assume!(px.x != py.x);
        let iv = global_bound_interval(1.0, &px, &py).unwrap();
        let d: Vec<f64> = py.x.iter().zip(&px.x).map(|(a, b)| a - b).collect();
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>();
        let dg: Vec<f64> = py.g.iter().zip(&px.g).map(|(a, b)| a - b).collect();
        let curv = dot(&dg, &d).powi(2) / (2.0 * dot(&d, &d));
        prop_assert!((iv.lo - (px.f + dot(&px.g, &d) + curv)).abs() < 1e-12);
        prop_assert!((iv.hi - (px.f + dot(&py.g, &d) - curv)).abs() < 1e-12);
        prop_assert!(iv.contains_within(py.f, 1e-12), "{iv:?} {}", py.f);
    }

    #[test]
    fn local_cocoercivity_on_spline(py in spline_point(), angle in 0.0f64..std::f64::consts::TAU, r in 0.0f64..1.0) {
        let dist = HalfPlaneDistance::counterexample_domain().distance(&py.x);
        let z = [py.x[0] + r * dist * angle.cos(), py.x[1] + r * dist * angle.sin()];
        prop_assume!(local_condition(&z, &py.x, dist));
        let px = sample_data(&spline(), z).unwrap();
        prop_assert!(cocoercivity_gap(1.0, &px, &py).unwrap() >= -1e-12);
        prop_assert!(cocoercivity_gap(1.0, &py, &px).unwrap() >= -1e-12);
    }
}
