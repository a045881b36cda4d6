mod common;

use cinfring::cmodule::{cotangent, cotangent_morphism, fiber_at_point, sequence_check};
use cinfring::cring::{
    admit, localize, sample_points, RingElement, RingMorphism, RingPresentation, SearchParams,
};
use cinfring::expr::parse;
use cinfring::geom::{fibre_product, regular_value_check, ManifoldPresentation, SmoothMap};
use common::strategies::{point, poly_expr};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn cotangent_is_functorial(
        phi_images in prop::collection::vec(poly_expr(3, 2), 2),
        psi_images in prop::collection::vec(poly_expr(2, 2), 3),
        p in point(2),
    ) {
        let c = RingPresentation::free(2);
        let d = RingPresentation::free(3);
        let e = RingPresentation::free(2);
        let phi = RingMorphism::new(&c, &d, phi_images).unwrap();
        let psi = RingMorphism::new(&d, &e, psi_images).unwrap();
        let whole = cotangent_morphism(&psi.after(&phi).unwrap()).unwrap().evaluate(&p).unwrap();
        let outer = cotangent_morphism(&psi).unwrap().evaluate(&p).unwrap();
        let inner = cotangent_morphism(&phi).unwrap().pushforward(&psi).unwrap().evaluate(&p).unwrap();
        let diff = (whole - outer * inner).abs().max();
        prop_assert!(diff <= 1e-10, "{}", diff);
    }
}

#[test]
fn localization_keeps_rank_one() {
    let line = RingPresentation::free(1);
    let (local, _) = localize(
        &line,
        &RingElement::new(&line, parse("x0").unwrap()).unwrap(),
    )
    .unwrap();
    let pts = sample_points(&local, &SearchParams::cube(2, -3.0, 3.0, 0.25), 20).unwrap();
    assert!(pts.len() >= 10);
    let om = cotangent(&local);
    for p in &pts {
        assert_eq!(fiber_at_point(&om, p).unwrap().rank, 1);
    }
}

#[test]
fn sphere_cotangent_ranks() {
    for n in 1..=3 {
        let s = ManifoldPresentation::sphere(n);
        let pts = sample_points(&s.ring, &SearchParams::cube(n + 1, -1.5, 1.5, 0.5), 20).unwrap();
        assert_eq!(pts.len(), 20);
        let om = cotangent(&s.ring);
        for p in &pts {
            assert_eq!(fiber_at_point(&om, p).unwrap().rank, n);
        }
    }
}

/// Pairs of maps into the line or plane, some transverse and some not.
fn fibre_examples() -> Vec<(SmoothMap, SmoothMap, bool)> {
    let c = ManifoldPresentation::circle();
    let r = ManifoldPresentation::euclidean(1);
    let r2 = ManifoldPresentation::euclidean(2);
    let axis = ManifoldPresentation::new(
        "axis",
        RingPresentation::new(2, vec![parse("x1").unwrap()]).unwrap(),
        1,
    );
    let map = |m: &ManifoldPresentation, n: &ManifoldPresentation, cs: &[&str]| {
        SmoothMap::new(m, n, cs.iter().map(|s| parse(s).unwrap()).collect()).unwrap()
    };
    vec![
        (map(&c, &r, &["x1"]), map(&c, &r, &["2*x1"]), true),
        (
            map(&c, &r2, &["x0", "x1"]),
            map(&axis, &r2, &["x0", "x1"]),
            true,
        ),
        (map(&c, &r, &["x1"]), map(&c, &r, &["2*x1 - 1"]), false),
        (map(&r, &r, &["x0^2"]), map(&r, &r, &["x0"]), false),
    ]
}

#[test]
fn pushout_sequences_are_complexes() {
    for (g, h, _) in fibre_examples() {
        let fp = fibre_product(&g, &h).unwrap();
        let pts = sample_points(
            &fp.manifold.ring,
            &SearchParams::cube(fp.manifold.arity(), -2.0, 2.0, 0.5),
            20,
        )
        .unwrap();
        assert!(!pts.is_empty());
        let report = sequence_check(&fp.cotangent_sequence().unwrap(), &pts, 1e-8).unwrap();
        assert!(report.all_complex(), "{}", fp.manifold.name);
    }
}

#[test]
fn transverse_examples_are_exact_and_tangency_is_not() {
    for (g, h, transverse) in fibre_examples() {
        let fp = fibre_product(&g, &h).unwrap();
        let pts = sample_points(
            &fp.manifold.ring,
            &SearchParams::cube(fp.manifold.arity(), -2.0, 2.0, 0.5),
            20,
        )
        .unwrap();
        let report = sequence_check(&fp.cotangent_sequence().unwrap(), &pts, 1e-8).unwrap();
        if transverse {
            assert!(report.all_exact(), "{}", fp.manifold.name);
        }
    }
    let (g, h, _) = fibre_examples().swap_remove(2);
    let fp = fibre_product(&g, &h).unwrap();
    let tangency = admit(&fp.manifold.ring, &[0.0, 1.0, 0.0, 1.0])
        .unwrap()
        .unwrap();
    let report = sequence_check(&fp.cotangent_sequence().unwrap(), &[tangency], 1e-8).unwrap();
    assert!(report.all_complex() && !report.all_exact());
}

#[test]
fn stdlib_manifolds_are_regular() {
    let open = ManifoldPresentation::open_subset(2, &parse("x0^2 + x1^2 - 1/4").unwrap()).unwrap();
    for m in [
        ManifoldPresentation::euclidean(2),
        ManifoldPresentation::circle(),
        ManifoldPresentation::sphere(2),
        ManifoldPresentation::sphere(3),
        ManifoldPresentation::torus2(),
        open,
    ] {
        let pts =
            sample_points(&m.ring, &SearchParams::cube(m.arity(), -2.0, 2.0, 0.5), 20).unwrap();
        assert_eq!(pts.len(), 20, "{}", m.name);
        assert!(
            regular_value_check(&m, &pts).unwrap().passed(),
            "{}",
            m.name
        );
    }
}

#[test]
fn fibre_product_points_round_trip() {
    for (g, h, _) in fibre_examples() {
        let fp = fibre_product(&g, &h).unwrap();
        let params = SearchParams::cube(fp.manifold.arity(), -2.0, 2.0, 0.5);
        let pts = cinfring::cring::find_r_points(&fp.manifold.ring, &params).unwrap();
        let m = g.source.arity();
        for p in &pts {
            let (x, y) = p.coords().split_at(m);
            let gx = g.apply(x).unwrap();
            let hy = h.apply(y).unwrap();
            assert!(gx.iter().zip(&hy).all(|(a, b)| (a - b).abs() <= 1e-6));
            assert!(admit(&g.source.ring, x).unwrap().is_some());
            assert!(admit(&h.source.ring, y).unwrap().is_some());
        }
    }
}
