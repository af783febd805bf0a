use magnitude_core::assembly::{cmc_polynomial, coefficients, evaluate_expansion, isoperimetric_ratio, scaling_check, CoefficientTable};
use magnitude_core::boundary::BoundaryConventions;
use magnitude_core::expr::{Cq, Rat, Scalar};
use magnitude_core::geometry::{builtin_spec, jets_required_order, GeometrySpec, Kind, Shape};
use magnitude_core::interior::ConstantSigns;

fn spec(shape: &Shape, k: u32) -> GeometrySpec {
    builtin_spec(shape, jets_required_order(k, Kind::EuclideanDomain).max(3)).unwrap()
}

fn table(shape: &Shape, k: u32) -> CoefficientTable {
    coefficients(&spec(shape, k), k, BoundaryConventions::default()).unwrap()
}

fn m_rats(t: &CoefficientTable) -> Vec<Rat> {
    t.rows.iter().map(|r| r.m.as_rat().unwrap_or_else(|| panic!("m_{} = {} is not rational", r.k, r.m))).collect()
}

fn r(a: i64, b: i64) -> Rat {
    Rat::new(a, b)
}

#[test]
fn ball3_is_a_polynomial() {
    let t = table(&Shape::Ball3 { r: Rat::ONE }, 5);
    assert_eq!(m_rats(&t), vec![r(1, 6), r(1, 1), r(2, 1), r(1, 1), Rat::ZERO, Rat::ZERO]);
    assert_eq!(evaluate_expansion(&t, 6.0).total, 85.0);
}

#[test]
fn shell3_inner_boundary_flips_mean_curvature() {
    let t = table(&Shape::Shell3 { r_in: r(1, 2), r_out: r(3, 2) }, 3);
    assert_eq!(m_rats(&t), vec![r(13, 24), r(5, 2), r(2, 1), r(2, 1)]);
}

#[test]
fn radius_two_ball_matches_unit_shell() {
    // The shell with ε = 1 is the ball of radius 2: 8/3!·R³ + 4R² + 4R + 1.
    let t = table(&Shape::Ball3 { r: r(2, 1) }, 3);
    assert_eq!(m_rats(&t), vec![r(8, 6), r(4, 1), r(4, 1), r(1, 1)]);
}

#[test]
fn sphere_geodesic_constant_term_is_euler_characteristic() {
    let t = table(&Shape::SphereGeodesic { r: Rat::ONE }, 2);
    assert_eq!(m_rats(&t), vec![r(2, 1), Rat::ZERO, r(2, 1)]);
    assert!(t.rows.iter().all(|row| row.boundary.is_zero()));
}

#[test]
fn interior_parts_vanish_in_odd_degree() {
    let shapes = [
        Shape::SphereGeodesic { r: Rat::ONE },
        Shape::SphereSubmanifold { r: r(3, 2) },
        Shape::CircleSubmanifold { r: r(1, 2) },
    ];
    for s in &shapes {
        let t = table(s, 3);
        for row in t.rows.iter().filter(|row| row.k % 2 == 1) {
            assert!(row.interior.is_zero(), "{}: interior part of c_{} = {}", t.label, row.k, row.interior);
        }
    }
}

#[test]
fn domain_interior_parts_vanish_above_degree_zero() {
    let t = table(&Shape::Disk { r: r(2, 1) }, 3);
    assert!(t.rows[1..].iter().all(|row| row.interior.is_zero()));
    assert!(t.rows[0].boundary.is_zero());
}

#[test]
fn disk_higher_coefficients_scale_like_curvature_integrals() {
    let tables: Vec<CoefficientTable> = (1..=3).map(|k| table(&Shape::Disk { r: Rat::int(k) }, 4)).collect();
    let c3: Vec<Scalar> = tables.iter().zip(1..).map(|(t, k)| t.rows[3].c.scale(&Cq::real(Rat::int(k)))).collect();
    let c4: Vec<Scalar> = tables.iter().zip(1..).map(|(t, k)| t.rows[4].c.scale(&Cq::real(Rat::int(k * k)))).collect();
    assert!(c3.windows(2).all(|w| w[0] == w[1]));
    assert!(c4.windows(2).all(|w| w[0] == w[1]));
    assert!(!c3[0].is_zero());
}

#[test]
fn scaling_law_is_exact() {
    let conv = BoundaryConventions::default();
    let cases = [
        (Shape::Disk { r: Rat::ONE }, 4, r(2, 1)),
        (Shape::Interval { length: Rat::ONE }, 2, r(5, 1)),
        (Shape::Ball3 { r: Rat::ONE }, 4, r(3, 1)),
        (Shape::SphereGeodesic { r: Rat::ONE }, 2, r(2, 3)),
    ];
    for (shape, k, factor) in cases {
        let report = scaling_check(&spec(&shape, k), k, &factor, conv).unwrap();
        assert!(report.passed(), "{}: mismatches at {:?}", report.label, report.mismatches());
    }
}

#[test]
fn h0_placement_does_not_change_coefficients() {
    let s = spec(&Shape::Ball3 { r: r(2, 3) }, 3);
    let a = coefficients(&s, 3, BoundaryConventions::default()).unwrap();
    let b = coefficients(&s, 3, BoundaryConventions { h0_on_plus: true, ..Default::default() }).unwrap();
    assert_eq!(a.c(), b.c());
}

#[test]
fn printed_even_dimension_sign_misses_the_disk_value() {
    let s = spec(&Shape::Disk { r: Rat::ONE }, 2);
    let flipped = BoundaryConventions { signs: ConstantSigns { flip_even_tail: true, ..Default::default() }, h0_on_plus: false };
    let t = coefficients(&s, 2, flipped).unwrap();
    assert_ne!(t.rows[2].m.as_rat(), Some(r(9, 8)));
}

#[test]
fn boundary_components_add() {
    let s = spec(&Shape::Shell3 { r_in: r(1, 3), r_out: r(5, 4) }, 3);
    let conv = BoundaryConventions::default();
    let whole = coefficients(&s, 3, conv).unwrap();
    let outer = coefficients(&s.with_charts(&[0]), 3, conv).unwrap();
    let inner = coefficients(&s.with_charts(&[1]), 3, conv).unwrap();
    for k in 0..=3 {
        let (w, o, i) = (&whole.rows[k], &outer.rows[k], &inner.rows[k]);
        assert_eq!(w.interior, o.interior);
        assert_eq!(w.boundary, &o.boundary + &i.boundary, "k = {k}");
    }
}

#[test]
fn isoperimetric_ratio_is_one_only_for_balls() {
    let disk = table(&Shape::Disk { r: r(7, 3) }, 1);
    assert!((isoperimetric_ratio(&disk) - 1.0).abs() < 1e-9);
    let ellipse = table(&Shape::Ellipse { a: r(2, 1), b: Rat::ONE }, 1);
    assert!(isoperimetric_ratio(&ellipse) < 1.0 - 1e-3);
    let shell = table(&Shape::Shell3 { r_in: r(1, 2), r_out: r(3, 2) }, 1);
    assert!(isoperimetric_ratio(&shell) < 1.0 - 1e-3);
}

fn poly(coeffs: &[Scalar; 3]) -> Vec<f64> {
    coeffs.iter().map(|s| s.re_f64()).collect()
}

#[test]
fn cmc_polynomial_has_double_root_at_mean_curvature() {
    let unit_disk = table(&Shape::Disk { r: Rat::ONE }, 3);
    let unit_ball = table(&Shape::Ball3 { r: Rat::ONE }, 3);
    for (t, ball, h) in [
        (unit_disk.clone(), &unit_disk, Rat::ONE),
        (table(&Shape::Disk { r: r(1, 2) }, 3), &unit_disk, r(2, 1)),
        (table(&Shape::Ball3 { r: r(4, 1) }, 3), &unit_ball, r(1, 4)),
    ] {
        let p = cmc_polynomial(&t, ball).unwrap();
        // a z² + b z + c = a (z − H)²  ⇔  b = −2aH, c = aH²
        assert_eq!(p[1], p[0].scale(&Cq::real(&Rat::int(-2) * &h)), "{}", t.label);
        assert_eq!(p[2], p[0].scale(&Cq::real(&h * &h)), "{}", t.label);
    }
    // Two spheres with different H: p = Σ area_i (z − H_i)² has no real root.
    let shell = table(&Shape::Shell3 { r_in: r(1, 2), r_out: r(3, 2) }, 3);
    let p = poly(&cmc_polynomial(&shell, &unit_ball).unwrap());
    assert!(p[1] * p[1] - 4.0 * p[0] * p[2] < -1e-9);
}
