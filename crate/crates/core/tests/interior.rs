use std::collections::BTreeMap;

use magnitude_core::boundary::multi_indices;
use magnitude_core::expr::{Rat, Scalar};
use magnitude_core::geometry::{builtin_spec, Chart, DistanceJetChart, Shape};
use magnitude_core::interior::{interior_densities, scalar_like, ConstantSigns};
use proptest::prelude::*;

/// `d(x, x − v)² = H(v) + Q(v)` with constant coefficients.
fn translation_invariant(n: usize, h: &[i64], quartic: &[i64]) -> Chart {
    let mut dsq = BTreeMap::new();
    let zero = vec![0u32; n];
    for (i, beta) in multi_indices(n, 2).into_iter().enumerate() {
        let diag = beta.contains(&2);
        // Diagonally dominant, so positive definite.
        let v = if diag { Rat::int(4 + h[i].abs()) } else { Rat::new(h[i], 2) };
        dsq.insert((zero.clone(), beta), v);
    }
    for (i, beta) in multi_indices(n, 4).into_iter().enumerate() {
        let v = Rat::new(quartic[i % quartic.len()], 3);
        if !v.is_zero() {
            dsq.insert((zero.clone(), beta), v);
        }
    }
    Chart::DistanceJets(DistanceJetChart { id: "flat-ti".into(), weight: Scalar::one(), dsq, max_order: 6 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn curvature_polynomial_matches_density_route(
        n in prop_oneof![Just(2usize), Just(4usize)],
        h in proptest::collection::vec(-1i64..=1, 10),
        q in proptest::collection::vec(-3i64..=3, 1..6),
    ) {
        let chart = translation_invariant(n, &h, &q);
        let a = interior_densities(&chart, n, 2, ConstantSigns::default()).unwrap();
        let s = scalar_like(&chart, n, ConstantSigns::default()).unwrap();
        prop_assert_eq!(&a[2], &(&Rat::new(n as i64 + 1, 6) * &s));
        prop_assert!(a[1].is_zero());
    }
}

#[test]
fn flat_chart_has_zero_curvature_polynomial() {
    let chart = translation_invariant(2, &[0, 0, 0], &[0]);
    assert!(scalar_like(&chart, 2, ConstantSigns::default()).unwrap().is_zero());
}

#[test]
fn one_dimensional_charts_are_rejected() {
    let spec = builtin_spec(&Shape::CircleSubmanifold { r: Rat::ONE }, 4).unwrap();
    assert!(scalar_like(&spec.charts[0], 1, ConstantSigns::default()).is_err());
}

#[test]
fn leading_density_is_one() {
    for shape in [Shape::SphereGeodesic { r: Rat::new(1, 3) }, Shape::SphereSubmanifold { r: Rat::int(2) }] {
        let spec = builtin_spec(&shape, 4).unwrap();
        let a = interior_densities(&spec.charts[0], 2, 2, ConstantSigns::default()).unwrap();
        assert_eq!(a[0], Rat::ONE);
    }
}

#[test]
fn sphere_curvature_density_is_scalar_curvature() {
    // c_2 interior density (n+1)/6·s with s = 2/r² on the round sphere.
    for r in [Rat::ONE, Rat::int(2), Rat::new(1, 2)] {
        let spec = builtin_spec(&Shape::SphereGeodesic { r: r.clone() }, 4).unwrap();
        let a = interior_densities(&spec.charts[0], 2, 2, ConstantSigns::default()).unwrap();
        assert_eq!(a[2], &Rat::new(1, 2) * &(&Rat::int(2) / &(&r * &r)));
    }
}

#[test]
fn quartic_forms_produce_curvature() {
    // H = 4|v|², Q = v₁⁴: with g = I/4, E[Q(Z)] = 3/16 and â_2 = (3/6)·3·(3/16).
    let chart = translation_invariant(2, &[0, 0, 0], &[3, 0, 0, 0, 0]);
    let a = interior_densities(&chart, 2, 2, ConstantSigns::default()).unwrap();
    assert_eq!(a[2], Rat::new(9, 32));
    assert_eq!(scalar_like(&chart, 2, ConstantSigns::default()).unwrap(), Rat::new(9, 16));
}

#[test]
fn printed_three_dimensional_polynomial_is_ten_times_the_quartic_route() {
    let chart = translation_invariant(3, &[0, 1, 0, -1, 0, 1], &[1, 2, 0, -1]);
    let a = interior_densities(&chart, 3, 2, ConstantSigns::default()).unwrap();
    let s = scalar_like(&chart, 3, ConstantSigns::default()).unwrap();
    assert!(!a[2].is_zero());
    assert_eq!(&Rat::new(4, 6) * &s, &Rat::int(10) * &a[2]);
}
