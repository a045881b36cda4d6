mod common;

use cinfring::expr::{Primitive, SmoothExpr};
use cinfring::weil::{weil_phi, WeilAlgebra, WeilElement};
use common::strategies::smooth_expr;
use common::truncated::{instance, oracle, Trunc};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn polynomials_match_truncated_arithmetic((k, order, _m, coeffs, f) in instance()) {
        let w = WeilAlgebra::new(k, order, &[]).unwrap();
        let args: Vec<WeilElement> = coeffs
            .iter()
            .map(|c| WeilElement::from_terms(&w, &w.basis().iter().cloned().zip(c.iter().copied()).collect::<Vec<_>>()).unwrap())
            .collect();
        let truncs: Vec<Trunc> = coeffs
            .iter()
            .map(|c| Trunc { order, terms: w.basis().iter().cloned().zip(c.iter().copied()).collect() })
            .collect();
        let got = weil_phi(&f.to_expr(), &args).unwrap();
        let want = oracle(&f, &truncs, k, order);
        for m in w.basis() {
            prop_assert_eq!(got.coefficient(m), want.get(m), "monomial {:?}", m);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn composition_law(
        g in smooth_expr(2),
        fs in prop::collection::vec(smooth_expr(2), 2),
        coeffs in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 6), 2),
    ) {
        let w = WeilAlgebra::new(2, 3, &[]).unwrap();
        let args: Vec<WeilElement> = coeffs
            .iter()
            .map(|c| WeilElement::from_terms(&w, &w.basis().iter().cloned().zip(c.iter().copied()).collect::<Vec<_>>()).unwrap())
            .collect();
        let inner: Vec<WeilElement> = fs.iter().map(|f| weil_phi(f, &args).unwrap()).collect();
        let lhs = weil_phi(&g.substitute(&fs).unwrap(), &args).unwrap();
        let rhs = weil_phi(&g, &inner).unwrap();
        for (a, b) in lhs.coefficients().iter().zip(rhs.coefficients()) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs())), "{} vs {}", a, b);
        }
    }

    #[test]
    fn augmentation_is_evaluation(
        f in smooth_expr(2),
        coeffs in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 3), 2),
    ) {
        let w = WeilAlgebra::new(2, 2, &[]).unwrap();
        let args: Vec<WeilElement> = coeffs
            .iter()
            .map(|c| WeilElement::from_terms(&w, &w.basis().iter().cloned().zip(c.iter().copied()).collect::<Vec<_>>()).unwrap())
            .collect();
        let augs: Vec<f64> = args.iter().map(WeilElement::augmentation).collect();
        prop_assert_eq!(weil_phi(&f, &args).unwrap().augmentation(), f.evaluate(&augs).unwrap());
    }
}

#[test]
fn exp_has_factorial_coefficients() {
    for order in 1..=8u32 {
        let w = WeilAlgebra::new(1, order, &[]).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let arg = WeilElement::from_terms(&w, &[(vec![1], t)]).unwrap();
            let e = weil_phi(
                &SmoothExpr::apply(Primitive::Exp, SmoothExpr::Var(0)),
                &[arg],
            )
            .unwrap();
            let mut want = 1.0f64;
            for k in 0..order {
                if k > 0 {
                    want *= t / f64::from(k);
                }
                let got = e.coefficient(&[k]);
                assert!(
                    (got - want).abs() <= 1e-12 * want.abs(),
                    "order {order} t {t} k {k}: {got} vs {want}"
                );
            }
        }
    }
}
