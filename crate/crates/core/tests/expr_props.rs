mod common;

use cinfring::expr::{expand, fd_gradient_check, hadamard_split, parse, SmoothExpr};
use common::strategies::{point, poly_expr, smooth_expr};
use proptest::prelude::*;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn composition_law(
        (g, fs) in (1usize..=3).prop_flat_map(|m| (poly_expr(m, 3), prop::collection::vec(poly_expr(3, 2), m))),
        points in prop::collection::vec(point(3), 10),
    ) {
        let composed = g.substitute(&fs).unwrap();
        for p in &points {
            let inner: Vec<f64> = fs.iter().map(|f| f.evaluate(p).unwrap()).collect();
            let direct = g.evaluate(&inner).unwrap();
            prop_assert!(close(composed.evaluate(p).unwrap(), direct, 1e-12));
        }
    }

    #[test]
    fn projection_law(args in prop::collection::vec(smooth_expr(2), 1..=4), j in 0usize..4) {
        let j = j % args.len();
        prop_assert_eq!(SmoothExpr::Var(j).substitute(&args).unwrap(), args[j].clone());
    }

    #[test]
    fn product_rule(e1 in smooth_expr(2), e2 in smooth_expr(2), points in prop::collection::vec(point(2), 10)) {
        for v in 0..2 {
            let lhs = (e1.clone() * e2.clone()).differentiate(v);
            let rhs = e1.differentiate(v) * e2.clone() + e1.clone() * e2.differentiate(v);
            for p in &points {
                prop_assert!(close(lhs.evaluate(p).unwrap(), rhs.evaluate(p).unwrap(), 1e-12));
            }
        }
    }

    #[test]
    fn differentiation_is_linear(e1 in smooth_expr(2), e2 in smooth_expr(2), p in point(2)) {
        let lhs = (e1.clone() * SmoothExpr::int(3) + e2.clone()).differentiate(0);
        let rhs = e1.differentiate(0) * SmoothExpr::int(3) + e2.differentiate(0);
        prop_assert!(close(lhs.evaluate(&p).unwrap(), rhs.evaluate(&p).unwrap(), 1e-12));
    }

    #[test]
    fn gradient_matches_central_differences(e in smooth_expr(3), p in point(3)) {
        prop_assert!(fd_gradient_check(&e, &p, 1e-5).unwrap() <= 1e-6);
    }

    #[test]
    fn print_parse_round_trip(e in smooth_expr(3)) {
        let printed = e.to_string();
        let reparsed = parse(&printed).unwrap();
        prop_assert_eq!(&reparsed, &e);
        prop_assert_eq!(reparsed.to_string(), printed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hadamard_identity((n, f) in (1usize..=3).prop_flat_map(|n| (Just(n), poly_expr(n, 4)))) {
        let gs = hadamard_split(&f, n).unwrap();
        let mut terms: Vec<SmoothExpr> = gs
            .iter()
            .enumerate()
            .map(|(i, g)| (SmoothExpr::Var(n + i) - SmoothExpr::Var(i)) * g.clone())
            .collect();
        terms.push(-(f.shift_vars(n) - f.clone()));
        prop_assert!(expand(&SmoothExpr::Sum(terms)).is_zero());
    }
}

#[test]
fn parse_print_parse_on_corpus() {
    let corpus = [
        "x0^2 + x1^2 - 1",
        "exp(x0)*sin(x1)",
        "x0 + (x0 + x0)",
        "1/2 + 0.25*x0",
        "-x0^-2 + 3/x1",
        "invexp(x0)*invexp(1 - x0)",
        "atan(x0) - cos(x1)^2 + sqrt(1 + x2^2)",
        "log(2 + sin(x0)) * (x1 - x2)^3",
        "2^3 * x0 ^ 2 ^ 1",
        "((((x0))))",
    ];
    for text in corpus {
        let once = parse(text).unwrap();
        let twice = parse(&once.to_string()).unwrap();
        assert_eq!(once, twice, "{text}");
        assert_eq!(once.to_string(), twice.to_string(), "{text}");
    }
}
