use cinfring::expr::{rational, Primitive, SmoothExpr};
use cinfring::poly::Polynomial;
use proptest::prelude::*;

/// A polynomial in `nvars` variables of total degree ≤ `max_deg` with
/// integer coefficients in `-2..=2`.
pub fn poly(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        (-2i64..=2, prop::collection::vec(0u32..=max_deg, nvars)),
        1..=max_terms,
    )
    .prop_map(move |terms| {
        let mut p = Polynomial::zero(nvars);
        for (c, mut m) in terms {
            while m.iter().sum::<u32>() > max_deg {
                let i = m.iter().position(|&e| e > 0).unwrap();
                m[i] -= 1;
            }
            p = p.add(&Polynomial::monomial(m, rational(c, 1)));
        }
        p
    })
}

pub fn poly_expr(nvars: usize, max_deg: u32) -> impl Strategy<Value = SmoothExpr> {
    poly(nvars, max_deg, 4).prop_map(|p| p.to_expr())
}

/// Smooth expressions defined everywhere: sums, products and bounded
/// primitives of variables and small constants.
pub fn smooth_expr(nvars: usize) -> impl Strategy<Value = SmoothExpr> {
    let leaf = prop_oneof![
        (0..nvars).prop_map(SmoothExpr::Var),
        (-3i64..=3, 1i64..=2).prop_map(|(p, q)| SmoothExpr::Const(rational(p, q))),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(SmoothExpr::Sum),
            prop::collection::vec(inner.clone(), 2..=2).prop_map(SmoothExpr::Product),
            (inner.clone(), 1i64..=3).prop_map(|(e, k)| e.powi(k)),
            (
                prop::sample::select(vec![
                    Primitive::Sin,
                    Primitive::Cos,
                    Primitive::Atan,
                    Primitive::Exp
                ]),
                inner.clone()
            )
                .prop_map(|(p, e)| {
                    // Keep exp arguments bounded so values stay moderate.
                    let arg = if p == Primitive::Exp {
                        SmoothExpr::apply(Primitive::Sin, e)
                    } else {
                        e
                    };
                    SmoothExpr::apply(p, arg)
                }),
            inner.prop_map(|e| {
                let one_plus_square = SmoothExpr::Sum(vec![SmoothExpr::one(), e.powi(2)]);
                SmoothExpr::apply(Primitive::Log, one_plus_square)
            }),
        ]
    })
    .prop_map(|e| cinfring::expr::simplify(&e))
}

pub fn point(nvars: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, nvars)
}

/// Dyadic rationals `k/4` with `|k| ≤ 8`.
pub fn dyadic() -> impl Strategy<Value = f64> {
    (-8i32..=8).prop_map(|k| f64::from(k) / 4.0)
}
