mod common;

use cinfring::cring::{is_r_point, sample_points, RPoint, RingPresentation, SearchParams};
use cinfring::expr::rational;
use cinfring::geom::{ManifoldPresentation, SmoothMap};
use cinfring::quotient::{
    equivariant_cotangent, equivariant_module_check, orbit_space, reynolds, stabilizer,
    stack_fibre_product, FiniteGroup, LinearAction, QuotientStackDesc, StackMap,
};
use common::strategies::poly_expr;
use proptest::prelude::*;

fn plane_actions() -> Vec<LinearAction> {
    let q = |v| rational(v, 1);
    let id = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
    let swap = vec![vec![q(0), q(1)], vec![q(1), q(0)]];
    let refl = vec![vec![q(1), q(0)], vec![q(0), q(-1)]];
    let neg_x = vec![vec![q(-1), q(0)], vec![q(0), q(1)]];
    let klein = FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
    let minus = vec![vec![q(-1), q(0)], vec![q(0), q(-1)]];
    vec![
        LinearAction::trivial(FiniteGroup::cyclic(3), 2),
        LinearAction::negation(2),
        LinearAction::new(FiniteGroup::cyclic(2), 2, vec![id.clone(), swap]).unwrap(),
        LinearAction::new(FiniteGroup::cyclic(2), 2, vec![id.clone(), refl.clone()]).unwrap(),
        LinearAction::rotation(4).unwrap(),
        LinearAction::new(klein, 2, vec![id, refl, neg_x, minus]).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn reynolds_images_are_invariant(f in poly_expr(2, 4)) {
        for action in plane_actions() {
            let r = reynolds(&f, &action).unwrap();
            for g in 0..action.group().order() {
                prop_assert_eq!(action.act(g, &r).unwrap(), r.clone());
            }
        }
    }

    #[test]
    fn stabilizers_are_subgroups(x in -2.0f64..2.0, y in -2.0f64..2.0, snap in 0usize..4) {
        // Snap some samples onto fixed loci of the actions.
        let p = match snap {
            0 => [0.0, 0.0],
            1 => [x, 0.0],
            2 => [x, x],
            _ => [x, y],
        };
        let plane = RingPresentation::free(2);
        for action in plane_actions() {
            let d = QuotientStackDesc::new(&plane, action, &SearchParams::cube(2, -1.0, 1.0, 1.0), 1e-9).unwrap();
            let pt = is_r_point(&plane, &p, 1e-9).unwrap().point().unwrap();
            let s = stabilizer(&d, &pt).unwrap();
            prop_assert!(d.group().is_subgroup(&s));
        }
    }

    #[test]
    fn free_orbits_have_full_size(seeds in prop::collection::vec((0.1f64..2.0, 0.1f64..2.0), 1..5)) {
        let plane = RingPresentation::free(2);
        let action = LinearAction::rotation(4).unwrap();
        let d = QuotientStackDesc::new(&plane, action.clone(), &SearchParams::cube(2, -1.0, 1.0, 1.0), 1e-9).unwrap();
        let mut pts: Vec<RPoint> = Vec::new();
        for (x, y) in &seeds {
            for g in 0..4 {
                let q = action.apply_point(g, &[*x, *y]);
                if !pts.iter().any(|p| (p.coords()[0] - q[0]).abs() + (p.coords()[1] - q[1]).abs() < 1e-3) {
                    pts.push(is_r_point(&plane, &q, 1e-9).unwrap().point().unwrap());
                }
            }
        }
        let orbits = orbit_space(&d, &pts).unwrap();
        prop_assert_eq!(orbits.iter().map(|o| o.members.len()).sum::<usize>(), pts.len());
        prop_assert!(orbits.iter().all(|o| o.members.len() == 4));
    }
}

#[test]
fn point_stack_fibre_products_have_h_points() {
    let point = ManifoldPresentation::euclidean(0);
    let params = SearchParams::cube(0, 0.0, 0.0, 1.0);
    let free = QuotientStackDesc::new(
        &point.ring,
        LinearAction::trivial(FiniteGroup::trivial(), 0),
        &params,
        1e-9,
    )
    .unwrap();
    for h in 1..=6 {
        let bh = QuotientStackDesc::new(
            &point.ring,
            LinearAction::trivial(FiniteGroup::cyclic(h), 0),
            &params,
            1e-9,
        )
        .unwrap();
        let m = StackMap::new(
            &free,
            &bh,
            SmoothMap::identity(&point),
            vec![0],
            &params,
            1e-9,
        )
        .unwrap();
        let w = stack_fibre_product(&m, &m).unwrap();
        assert_eq!(w.points(&params).unwrap().len(), h);
    }
}

#[test]
fn equivariant_cotangent_satisfies_the_cocycle_condition() {
    let circle = ManifoldPresentation::circle().ring;
    let params = SearchParams::cube(2, -2.0, 2.0, 0.25);
    for action in plane_actions() {
        for ring in [RingPresentation::free(2), circle.clone()] {
            let d = QuotientStackDesc::new(&ring, action.clone(), &params, 1e-9).unwrap();
            let e = equivariant_cotangent(&d).unwrap();
            let pts = sample_points(&ring, &params, 10).unwrap();
            assert_eq!(pts.len(), 10);
            assert!(equivariant_module_check(&e, &pts, 1e-10).unwrap().passed());
        }
    }
}
