use proptest::prelude::*;

use renewt_core::characterize::{reconstruct_general, reconstruction_error};
use renewt_core::mobius::MobiusMap;
use renewt_core::roots::{all_roots, factor_roots, multiset_distance, DEFAULT_TOL};
use renewt_core::{c64, AffineMap, Complex64, FactoredPolynomial, Point, RelaxedNewtonMap};

fn complex_in(r: f64) -> impl Strategy<Value = Complex64> {
    (0.0..r, 0.0..std::f64::consts::TAU).prop_map(|(m, t)| Complex64::from_polar(m, t))
}

/// Two to four roots, pairwise at least 0.4 apart, multiplicities up to 3.
fn factored() -> impl Strategy<Value = FactoredPolynomial> {
    (prop::collection::vec((complex_in(2.0), 1..=3u32), 2..=4), complex_in(2.0))
        .prop_filter_map("roots too close", |(roots, lead)| {
            for (i, a) in roots.iter().enumerate() {
                if roots[..i].iter().any(|b| (a.0 - b.0).norm() < 0.4) {
                    return None;
                }
            }
            if lead.norm() < 0.3 {
                return None;
            }
            FactoredPolynomial::new(lead, roots).ok()
        })
}

fn with_h() -> impl Strategy<Value = (FactoredPolynomial, Complex64)> {
    (factored(), complex_in(0.9)).prop_filter_map("h at the degree", |(p, u)| {
        let m = p.min_multiplicity() as f64;
        let h = c64(m, 0.0) + u * m;
        ((h - p.degree() as f64).norm() > 0.1).then_some((p, h))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_are_fixed_with_predicted_multiplier((p, h) in with_h()) {
        let map = RelaxedNewtonMap::new(p.clone(), h).unwrap();
        for &(r, m) in p.roots() {
            let w = map.step(r).unwrap();
            prop_assert!((w - r).norm() < 1e-9 * r.norm().max(1.0));
            let lambda = map.derivative(r).unwrap();
            prop_assert!((lambda - (1.0 - h / m as f64)).norm() < 1e-9);
            prop_assert!(lambda.norm() < 1.0);
        }
        prop_assert!(map.h_in_attracting_domain());
    }

    #[test]
    fn indices_sum_to_one((p, h) in with_h()) {
        let map = RelaxedNewtonMap::new(p, h).unwrap();
        prop_assert!((map.residue_index_sum().unwrap() - 1.0).norm() < 1e-9);
    }

    #[test]
    fn dense_construction_recovers_multiplicities((p, h) in with_h()) {
        let dense = RelaxedNewtonMap::from_dense(&p.expand(), h).unwrap();
        let mut want: Vec<u32> = p.roots().iter().map(|r| r.1).collect();
        let mut got: Vec<u32> = dense.polynomial().roots().iter().map(|r| r.1).collect();
        want.sort_unstable();
        got.sort_unstable();
        prop_assert_eq!(want, got);
    }

    #[test]
    fn factoring_recovers_roots(p in factored()) {
        let clusters = factor_roots(&p.expand(), DEFAULT_TOL).unwrap();
        prop_assert_eq!(clusters.len(), p.distinct_roots());
        for &(r, m) in p.roots() {
            let c = clusters.iter().min_by(|a, b| (a.center - r).norm().total_cmp(&(b.center - r).norm())).unwrap();
            prop_assert_eq!(c.multiplicity, m);
            prop_assert!((c.center - r).norm() < 1e-6);
        }
    }

    #[test]
    fn simple_roots_are_found(roots in prop::collection::vec(complex_in(3.0), 1..8)) {
        let p = FactoredPolynomial::monic(roots.iter().map(|&r| (r, 1)).collect());
        prop_assume!(p.is_ok());
        let p = p.unwrap().expand();
        let found = all_roots(&p, DEFAULT_TOL).unwrap();
        for z in &found {
            let (v, d) = p.eval_with_derivative(*z);
            prop_assert!(v.norm() <= 1e-8 * d.norm().max(1.0) * p.magnitude_bound(z.norm()).max(1.0));
        }
        prop_assert_eq!(found.len(), roots.len());
    }

    #[test]
    fn scaling_property((p, h) in with_h(), a in complex_in(2.0), b in complex_in(2.0), z in complex_in(3.0)) {
        prop_assume!(a.norm() > 0.3);
        let t = AffineMap::new(a, b).unwrap();
        let base = RelaxedNewtonMap::new(p.clone(), h).unwrap();
        let conj = RelaxedNewtonMap::new(p.affine_conjugate(t, c64(0.7, 0.2)).unwrap(), h).unwrap();
        if let (Some(lhs), Some(inner)) = (conj.step(z), base.step(t.apply(z))) {
            let rhs = t.inverse().apply(inner);
            prop_assert!((lhs - rhs).norm() < 1e-8 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn mobius_inverse_round_trips(a in complex_in(2.0), b in complex_in(2.0), c in complex_in(2.0), z in complex_in(3.0)) {
        let d = c64(1.0, 0.5);
        prop_assume!((a * d - b * c).norm() > 0.1);
        let m = MobiusMap::new(a, b, c, d).unwrap();
        let back = m.inverse().apply(m.apply(Point::Finite(z)));
        match back {
            Point::Finite(w) => prop_assert!((w - z).norm() < 1e-8 * z.norm().max(1.0)),
            Point::Infinity => prop_assert!(false, "finite point mapped to infinity"),
        }
    }

    #[test]
    fn reconstruction_from_fixed_points((p, h) in with_h()) {
        let map = RelaxedNewtonMap::new(p.clone(), h).unwrap();
        let fps: Vec<(Point, Complex64)> = map
            .fixed_points()
            .iter()
            .filter(|r| !r.location.is_infinity())
            .map(|r| (r.location, r.multiplier))
            .collect();
        let (phi, q) = reconstruct_general(&fps, Point::Infinity, h).unwrap();
        prop_assert!(reconstruction_error(&fps, &phi, &q, h).unwrap() < 1e-8);
        let mut want: Vec<u32> = p.roots().iter().map(|r| r.1).collect();
        let mut got: Vec<u32> = q.roots().iter().map(|r| r.1).collect();
        want.sort_unstable();
        got.sort_unstable();
        prop_assert_eq!(want, got);
    }
}

#[test]
fn critical_points_agree_across_methods() {
    let h = c64(0.5, std::f64::consts::FRAC_PI_4);
    for p in [
        FactoredPolynomial::monic(vec![(c64(1.0, 0.0), 2), (c64(-1.0, 0.0), 3)]).unwrap(),
        renewt_core::constructions::unicritical_rep(5).unwrap(),
        renewt_core::constructions::composite_rep(2, 3).unwrap(),
    ] {
        let map = RelaxedNewtonMap::new(p, h).unwrap();
        let closed = map.critical_points().unwrap();
        let general = map.critical_points_general().unwrap();
        assert!(multiset_distance(&closed, &general) < 1e-8);
    }
}

#[test]
fn equal_multiplicity_pair_has_bisector_julia_line() {
    let (r1, r2) = (c64(2.0, 1.0), c64(-1.0, -0.5));
    let p = FactoredPolynomial::new(c64(0.0, 1.5), vec![(r1, 2), (r2, 2)]).unwrap();
    let h = c64(1.3, 0.0);
    let line = renewt_core::geometry::line_predicate(&p, h).unwrap();
    let map = RelaxedNewtonMap::new(p, h).unwrap();
    let s = renewt_core::geometry::sample_julia(&map, 2000, 200, 3).unwrap();
    let worst = s.points.iter().map(|&z| line.distance(z)).fold(0.0, f64::max);
    assert!(worst < 1e-9, "{worst}");
    assert!((line.distance(r1) - line.distance(r2)).abs() < 1e-12);
}
