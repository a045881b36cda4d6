use num_traits::{One, Pow, Zero};

use super::{Rational, SmoothExpr};

/// Bring an expression to canonical form.
///
/// Only these rewrites are applied: folding of constant sums, products and
/// powers; flattening of nested sums and products; collection of like terms
/// (rational coefficients) and like factors (integer exponents); removal of
/// zero summands and unit factors; `x^0 → 1`, `x^1 → x`. No identities
/// between primitives are used and applications of primitives to constants
/// are left unevaluated.
pub fn simplify(e: &SmoothExpr) -> SmoothExpr {
    match e {
        SmoothExpr::Const(_) | SmoothExpr::Var(_) => e.clone(),
        SmoothExpr::Sum(ts) => make_sum(ts.iter().map(simplify).collect()),
        SmoothExpr::Product(fs) => make_product(fs.iter().map(simplify).collect()),
        SmoothExpr::Pow(b, k) => make_pow(simplify(b), *k),
        SmoothExpr::Apply(p, a) => SmoothExpr::Apply(*p, Box::new(simplify(a))),
    }
}

/// Canonical form after distributing products over sums and expanding
/// integer powers of sums and products. Arguments of primitives are
/// expanded as well. For polynomials this yields the monomial normal form,
/// so two polynomial expressions are equal iff their expansions are
/// structurally equal.
pub fn expand(e: &SmoothExpr) -> SmoothExpr {
    match e {
        SmoothExpr::Const(_) | SmoothExpr::Var(_) => e.clone(),
        SmoothExpr::Sum(ts) => make_sum(ts.iter().map(expand).collect()),
        SmoothExpr::Product(fs) => {
            let factors: Vec<SmoothExpr> = fs.iter().map(expand).collect();
            distribute(&factors)
        }
        SmoothExpr::Pow(b, k) => {
            let base = expand(b);
            match base {
                SmoothExpr::Sum(_) if *k > 0 => {
                    let factors = vec![base; *k as usize];
                    distribute(&factors)
                }
                SmoothExpr::Product(fs) => make_product(
                    fs.iter()
                        .map(|f| expand(&make_pow(f.clone(), *k)))
                        .collect(),
                ),
                other => make_pow(other, *k),
            }
        }
        SmoothExpr::Apply(p, a) => SmoothExpr::Apply(*p, Box::new(expand(a))),
    }
}

fn distribute(factors: &[SmoothExpr]) -> SmoothExpr {
    let mut terms = vec![SmoothExpr::one()];
    for f in factors {
        let summands: Vec<SmoothExpr> = match f {
            SmoothExpr::Sum(ts) => ts.clone(),
            other => vec![other.clone()],
        };
        let mut next = Vec::with_capacity(terms.len() * summands.len());
        for t in &terms {
            for s in &summands {
                next.push(make_product(vec![t.clone(), s.clone()]));
            }
        }
        terms = make_sum_terms(next);
    }
    make_sum(terms)
}

fn make_sum_terms(terms: Vec<SmoothExpr>) -> Vec<SmoothExpr> {
    match make_sum(terms) {
        SmoothExpr::Sum(ts) => ts,
        other => vec![other],
    }
}

pub(crate) fn make_pow(base: SmoothExpr, k: i64) -> SmoothExpr {
    if k == 0 {
        return SmoothExpr::one();
    }
    if k == 1 {
        return base;
    }
    match base {
        SmoothExpr::Const(c) => {
            if c.is_zero() && k < 0 {
                SmoothExpr::Pow(Box::new(SmoothExpr::Const(c)), k)
            } else {
                SmoothExpr::Const(Pow::pow(&c, k as i32))
            }
        }
        SmoothExpr::Pow(inner, j) => match j.checked_mul(k) {
            Some(jk) => make_pow(*inner, jk),
            None => SmoothExpr::Pow(Box::new(SmoothExpr::Pow(inner, j)), k),
        },
        other => SmoothExpr::Pow(Box::new(other), k),
    }
}

/// Factors must already be canonical.
pub(crate) fn make_product(factors: Vec<SmoothExpr>) -> SmoothExpr {
    let mut coef = Rational::one();
    let mut groups: Vec<(SmoothExpr, i64)> = Vec::new();
    let mut stack = factors;
    stack.reverse();
    while let Some(f) = stack.pop() {
        match f {
            SmoothExpr::Const(c) => coef *= c,
            SmoothExpr::Product(inner) => {
                for g in inner.into_iter().rev() {
                    stack.push(g);
                }
            }
            SmoothExpr::Pow(b, k) => add_group(&mut groups, *b, k),
            other => add_group(&mut groups, other, 1),
        }
    }
    if coef.is_zero() {
        return SmoothExpr::zero();
    }
    let mut rest = Vec::new();
    let mut reflatten = false;
    for (base, k) in groups {
        match make_pow(base, k) {
            SmoothExpr::Const(c) => coef *= c,
            p @ SmoothExpr::Product(_) => {
                reflatten = true;
                rest.push(p);
            }
            other => rest.push(other),
        }
    }
    if reflatten {
        rest.push(SmoothExpr::Const(coef));
        return make_product(rest);
    }
    if coef.is_zero() {
        return SmoothExpr::zero();
    }
    rest.sort();
    if !coef.is_one() {
        rest.insert(0, SmoothExpr::Const(coef));
    }
    match rest.len() {
        0 => SmoothExpr::one(),
        1 => rest.pop().unwrap(),
        _ => SmoothExpr::Product(rest),
    }
}

fn add_group(groups: &mut Vec<(SmoothExpr, i64)>, base: SmoothExpr, k: i64) {
    if let Some(slot) = groups.iter_mut().find(|(b, _)| *b == base) {
        slot.1 += k;
    } else {
        groups.push((base, k));
    }
}

fn split_coefficient(term: SmoothExpr) -> (Rational, SmoothExpr) {
    match term {
        SmoothExpr::Product(mut fs) if matches!(fs.first(), Some(SmoothExpr::Const(_))) => {
            let c = match fs.remove(0) {
                SmoothExpr::Const(c) => c,
                _ => unreachable!(),
            };
            let rest = if fs.len() == 1 {
                fs.pop().unwrap()
            } else {
                SmoothExpr::Product(fs)
            };
            (c, rest)
        }
        other => (Rational::one(), other),
    }
}

/// Terms must already be canonical.
pub(crate) fn make_sum(terms: Vec<SmoothExpr>) -> SmoothExpr {
    let mut constant = Rational::zero();
    let mut groups: Vec<(SmoothExpr, Rational)> = Vec::new();
    let mut stack = terms;
    stack.reverse();
    while let Some(t) = stack.pop() {
        match t {
            SmoothExpr::Const(c) => constant += c,
            SmoothExpr::Sum(inner) => {
                for u in inner.into_iter().rev() {
                    stack.push(u);
                }
            }
            other => {
                let (c, rest) = split_coefficient(other);
                if let Some(slot) = groups.iter_mut().find(|(r, _)| *r == rest) {
                    slot.1 += c;
                } else {
                    groups.push((rest, c));
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut reflatten = false;
    for (rest, c) in groups {
        if c.is_zero() {
            continue;
        }
        let term = if c.is_one() {
            rest
        } else {
            make_product(vec![SmoothExpr::Const(c), rest])
        };
        if matches!(term, SmoothExpr::Sum(_)) {
            reflatten = true;
        }
        out.push(term);
    }
    if reflatten {
        out.push(SmoothExpr::Const(constant));
        return make_sum(out);
    }
    out.sort();
    if !constant.is_zero() {
        out.insert(0, SmoothExpr::Const(constant));
    }
    match out.len() {
        0 => SmoothExpr::zero(),
        1 => out.pop().unwrap(),
        _ => SmoothExpr::Sum(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn p(s: &str) -> SmoothExpr {
        parse(s).unwrap()
    }

    #[test]
    fn zero_times_exp_is_dropped() {
        assert_eq!(p("0*exp(x0) + x1"), SmoothExpr::Var(1));
    }

    #[test]
    fn unit_factor_and_collection() {
        assert_eq!(
            p("(x0 + x0)*(1)"),
            SmoothExpr::Product(vec![SmoothExpr::int(2), SmoothExpr::Var(0)])
        );
    }

    #[test]
    fn no_trig_identities() {
        let e = p("sin(x0)^2 + cos(x0)^2");
        assert_eq!(e.to_string(), "(cos(x0)^2 + sin(x0)^2)");
        assert_eq!(simplify(&e), e);
    }

    #[test]
    fn power_rules() {
        assert_eq!(p("x0^0"), SmoothExpr::one());
        assert_eq!(p("x0^1"), SmoothExpr::Var(0));
        assert_eq!(p("(x0^2)^3"), p("x0^6"));
        assert_eq!(p("x0*x0^-1"), SmoothExpr::one());
        assert_eq!(p("2^-2"), SmoothExpr::Const(crate::expr::rational(1, 4)));
    }

    #[test]
    fn zero_to_negative_power_is_kept() {
        let e = p("0^-1");
        assert_eq!(e, SmoothExpr::Pow(Box::new(SmoothExpr::zero()), -1));
        assert!(e.evaluate(&[]).is_err());
    }

    #[test]
    fn nested_sum_collapses_after_collection() {
        // 2(a+b) - (a+b) leaves a bare sum that must merge with the rest.
        let e = p("2*(x0 + x1) - (x0 + x1) + x0");
        assert_eq!(e, p("(x0 + x1) + x0"));
        assert_eq!(simplify(&e), e);
    }

    #[test]
    fn expand_gives_monomial_form() {
        assert_eq!(expand(&p("(x0 + x1)^2 - x0^2 - x1^2")), p("2*x0*x1"));
        assert_eq!(expand(&p("(x0*x1)^2")), p("x0^2*x1^2"));
        assert_eq!(expand(&p("(x0 - 1)*(x0 + 1)")), p("x0^2 - 1"));
    }
}
