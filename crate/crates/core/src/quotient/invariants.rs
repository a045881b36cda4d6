//! Reynolds averaging, polynomial invariants and coarse moduli rings.

use num_traits::{One, Zero};

use super::{LinearAction, QuotientStackDesc};
use crate::cring::{Provenance, Ring, RingPresentation};
use crate::expr::{rational, simplify, Rational, SmoothExpr};
use crate::linalg::{left_kernel, solve_combination};
use crate::poly::{monomials_of_degree, Monomial, Polynomial};
use crate::{Error, Result};

/// `f^G = (1/|G|) Σ_γ f∘γ`. Polynomials come back expanded, so invariance
/// is structural.
pub fn reynolds(f: &SmoothExpr, action: &LinearAction) -> Result<SmoothExpr> {
    f.check_arity(action.arity())?;
    let order = action.group().order();
    let weight = rational(1, order as i64);
    if let Ok(p) = Polynomial::from_expr(f, action.arity()) {
        return Ok(reynolds_poly(&p, action)?.to_expr());
    }
    let terms = (0..order)
        .map(|g| {
            Ok(SmoothExpr::Product(vec![
                SmoothExpr::Const(weight.clone()),
                action.act(g, f)?,
            ]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(simplify(&SmoothExpr::Sum(terms)))
}

fn reynolds_poly(p: &Polynomial, action: &LinearAction) -> Result<Polynomial> {
    let n = action.arity();
    let order = action.group().order();
    let mut sum = Polynomial::zero(n);
    for g in 0..order {
        let images: Vec<Polynomial> = action
            .images(g)
            .iter()
            .map(|e| Polynomial::from_expr(e, n))
            .collect::<Result<_>>()?;
        sum = if n == 0 {
            sum.add(p)
        } else {
            sum.add(&p.compose(&images))
        };
    }
    Ok(sum.scale(&rational(1, order as i64)))
}

fn vector(p: &Polynomial, monos: &[Monomial]) -> Vec<Rational> {
    monos.iter().map(|m| p.coefficient(m)).collect()
}

/// Exponent vectors `e` over generators of the given degrees with
/// `Σ e_i·deg_i = d`.
fn weighted_monomials(degrees: &[u32], d: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, degrees: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == degrees.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut e = left / degrees[i];
        loop {
            cur[i] = e;
            rec(i + 1, left - e * degrees[i], degrees, cur, out);
            if e == 0 {
                break;
            }
            e -= 1;
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; degrees.len()];
    rec(0, d, degrees, &mut cur, &mut out);
    out
}

fn product_of(gens: &[Polynomial], e: &[u32], nvars: usize) -> Polynomial {
    e.iter().zip(gens).fold(
        Polynomial::constant(nvars, Rational::one()),
        |acc, (&k, g)| if k == 0 { acc } else { acc.mul(&g.pow(k)) },
    )
}

/// Homogeneous algebra generators of the invariant ring up to degree
/// `degree_bound`.
///
/// In each degree `d` the Reynolds images of the degree-`d` monomials are
/// made monic, sorted by printed form, and kept only when they are not in
/// the span of the kept ones together with all products of lower-degree
/// generators. The output is sorted by (degree, printed form).
pub fn invariant_generators(action: &LinearAction, degree_bound: u32) -> Result<Vec<SmoothExpr>> {
    Ok(generator_polys(action, degree_bound)?
        .into_iter()
        .map(|(_, p)| p.to_expr())
        .collect())
}

fn generator_polys(action: &LinearAction, degree_bound: u32) -> Result<Vec<(u32, Polynomial)>> {
    if degree_bound == 0 {
        return Err(Error::Mismatch("degree bound must be at least 1".into()));
    }
    let n = action.arity();
    let mut gens: Vec<(u32, Polynomial)> = Vec::new();
    for d in 1..=degree_bound {
        let monos = monomials_of_degree(n, d);
        let mut candidates: Vec<(String, Polynomial)> = Vec::new();
        for m in &monos {
            let r = reynolds_poly(&Polynomial::monomial(m.clone(), Rational::one()), action)?;
            if r.is_zero() {
                continue;
            }
            let r = r.monic();
            if !candidates.iter().any(|(_, c)| *c == r) {
                candidates.push((r.to_expr().to_string(), r));
            }
        }
        candidates.sort_by(|a, b| a.0.cmp(&b.0));
        let degrees: Vec<u32> = gens.iter().map(|(k, _)| *k).collect();
        let polys: Vec<Polynomial> = gens.iter().map(|(_, p)| p.clone()).collect();
        let mut rows: Vec<Vec<Rational>> = weighted_monomials(&degrees, d)
            .iter()
            .map(|e| vector(&product_of(&polys, e, n), &monos))
            .collect();
        for (_, c) in candidates {
            let v = vector(&c, &monos);
            if solve_combination(&rows, &v).is_none() {
                rows.push(v);
                gens.push((d, c));
            }
        }
    }
    Ok(gens)
}

/// The ring of invariants presented on generators `y_i ↦ p_i`.
#[derive(Clone, Debug)]
pub struct CoarseModuli {
    pub ring: Ring,
    /// The invariant polynomials `p_i` over the generators of `U`.
    pub generators: Vec<SmoothExpr>,
    /// Invariant parts of relations of `U` that could not be written as
    /// polynomials in the `p_i`, with the reason.
    pub annotations: Vec<(SmoothExpr, String)>,
}

impl CoarseModuli {
    /// Image of a point of `U`.
    pub fn map_point(&self, coords: &[f64]) -> Result<Vec<f64>> {
        Ok(self
            .generators
            .iter()
            .map(|p| p.evaluate(coords))
            .collect::<std::result::Result<_, _>>()?)
    }
}

fn in_generators(c: &[Rational], exps: &[Monomial]) -> SmoothExpr {
    let l = exps.first().map_or(0, Vec::len);
    let mut p = Polynomial::zero(l);
    for (k, e) in c.iter().zip(exps) {
        p.add_term(e.clone(), k.clone());
    }
    p.monic().to_expr()
}

/// Coarse moduli `C^G` of `[U/G]`: polynomial syzygies among the invariant
/// generators up to degree `2·degree_bound`, plus the Reynolds images of
/// the relations of `U` rewritten in the generators where possible.
pub fn coarse_moduli(desc: &QuotientStackDesc, degree_bound: u32) -> Result<CoarseModuli> {
    desc.require_stable()?;
    let action = desc.action();
    let n = action.arity();
    let gens = generator_polys(action, degree_bound)?;
    let degrees: Vec<u32> = gens.iter().map(|(d, _)| *d).collect();
    let polys: Vec<Polynomial> = gens.iter().map(|(_, p)| p.clone()).collect();
    let l = gens.len();
    let mut relations: Vec<SmoothExpr> = Vec::new();

    // Syzygies, degree by degree, skipping multiples of earlier ones.
    let mut found: Vec<(u32, Polynomial)> = Vec::new();
    for d in 1..=2 * degree_bound {
        let exps = weighted_monomials(&degrees, d);
        if exps.is_empty() {
            continue;
        }
        let monos = monomials_of_degree(n, d);
        let rows: Vec<Vec<Rational>> = exps
            .iter()
            .map(|e| vector(&product_of(&polys, e, n), &monos))
            .collect();
        let mut span: Vec<Vec<Rational>> = Vec::new();
        for (k, s) in &found {
            for u in weighted_monomials(&degrees, d - k) {
                let shifted = s.mul(&Polynomial::monomial(u, Rational::one()));
                span.push(exps.iter().map(|e| shifted.coefficient(e)).collect());
            }
        }
        for k in left_kernel(&rows) {
            if solve_combination(&span, &k).is_some() {
                continue;
            }
            span.push(k.clone());
            let mut s = Polynomial::zero(l);
            for (c, e) in k.iter().zip(&exps) {
                s.add_term(e.clone(), c.clone());
            }
            relations.push(s.monic().to_expr());
            found.push((d, s));
        }
    }

    let mut annotations = Vec::new();
    for f in desc.ring().relations() {
        let Ok(p) = Polynomial::from_expr(f, n) else {
            annotations.push((f.clone(), "not polynomial".to_string()));
            continue;
        };
        let r = reynolds_poly(&p, action)?;
        if r.is_zero() {
            annotations.push((f.clone(), "invariant part is zero".to_string()));
            continue;
        }
        let top = r.total_degree().unwrap_or(0);
        let exps: Vec<Monomial> = (0..=top)
            .flat_map(|d| weighted_monomials(&degrees, d))
            .collect();
        let monos: Vec<Monomial> = (0..=top).flat_map(|d| monomials_of_degree(n, d)).collect();
        let rows: Vec<Vec<Rational>> = exps
            .iter()
            .map(|e| vector(&product_of(&polys, e, n), &monos))
            .collect();
        match solve_combination(&rows, &vector(&r, &monos)) {
            Some(c) if c.iter().any(|x| !x.is_zero()) => {
                let rel = in_generators(&c, &exps);
                if !relations.contains(&rel) {
                    relations.push(rel);
                }
            }
            _ => annotations.push((
                r.to_expr(),
                "not a polynomial in the invariant generators".to_string(),
            )),
        }
    }
    let ring = RingPresentation::build(l, relations, Provenance::Invariants)?;
    Ok(CoarseModuli {
        ring,
        generators: polys.iter().map(Polynomial::to_expr).collect(),
        annotations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cring::SearchParams;
    use crate::parse;
    use crate::quotient::FiniteGroup;

    fn swap() -> LinearAction {
        let q = |v| rational(v, 1);
        let id = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
        let sw = vec![vec![q(0), q(1)], vec![q(1), q(0)]];
        LinearAction::new(FiniteGroup::cyclic(2), 2, vec![id, sw]).unwrap()
    }

    fn reflection() -> LinearAction {
        let q = |v| rational(v, 1);
        let id = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
        let r = vec![vec![q(1), q(0)], vec![q(0), q(-1)]];
        LinearAction::new(FiniteGroup::cyclic(2), 2, vec![id, r]).unwrap()
    }

    #[test]
    fn reynolds_examples() {
        let neg = LinearAction::negation(1);
        assert_eq!(
            reynolds(&parse("x0").unwrap(), &neg).unwrap(),
            SmoothExpr::zero()
        );
        assert_eq!(
            reynolds(&parse("x0^2").unwrap(), &neg).unwrap(),
            parse("x0^2").unwrap()
        );
        assert_eq!(
            reynolds(&parse("x0").unwrap(), &swap()).unwrap(),
            parse("x0/2 + x1/2").unwrap()
        );
        let r = reynolds(&parse("cos(x0)").unwrap(), &neg).unwrap();
        assert_eq!(r, parse("cos(x0)/2 + cos(-x0)/2").unwrap());
    }

    #[test]
    fn generator_examples() {
        assert_eq!(
            invariant_generators(&LinearAction::negation(1), 2).unwrap(),
            vec![parse("x0^2").unwrap()]
        );
        let trivial = LinearAction::trivial(FiniteGroup::trivial(), 1);
        assert_eq!(
            invariant_generators(&trivial, 1).unwrap(),
            vec![parse("x0").unwrap()]
        );
        assert_eq!(
            invariant_generators(&swap(), 2).unwrap(),
            vec![parse("x0 + x1").unwrap(), parse("x0*x1").unwrap()]
        );
        assert_eq!(
            invariant_generators(&reflection(), 2).unwrap(),
            vec![parse("x0").unwrap(), parse("x1^2").unwrap()]
        );
        assert!(invariant_generators(&swap(), 0).is_err());
    }

    #[test]
    fn weighted_enumeration() {
        assert_eq!(weighted_monomials(&[1, 2], 2), vec![vec![2, 0], vec![0, 1]]);
        assert_eq!(weighted_monomials(&[], 0), vec![Vec::<u32>::new()]);
        assert!(weighted_monomials(&[2], 3).is_empty());
    }

    #[test]
    fn coarse_moduli_examples() {
        let params = SearchParams::cube(1, -2.0, 2.0, 0.5);
        let line = RingPresentation::free(1);
        let d = QuotientStackDesc::new(&line, LinearAction::negation(1), &params, 1e-9).unwrap();
        let cm = coarse_moduli(&d, 2).unwrap();
        assert_eq!(cm.ring.to_string(), "Cinf(R^1)");
        assert_eq!(
            cm.map_point(&[1.5]).unwrap(),
            cm.map_point(&[-1.5]).unwrap()
        );

        let point = RingPresentation::reals();
        let d = QuotientStackDesc::new(
            &point,
            LinearAction::trivial(FiniteGroup::cyclic(3), 0),
            &SearchParams::cube(0, 0.0, 0.0, 1.0),
            1e-9,
        )
        .unwrap();
        assert_eq!(coarse_moduli(&d, 3).unwrap().ring.to_string(), "Cinf(R^0)");

        let circle = RingPresentation::new(2, vec![parse("x0^2 + x1^2 - 1").unwrap()]).unwrap();
        let d = QuotientStackDesc::new(
            &circle,
            reflection(),
            &SearchParams::cube(2, -2.0, 2.0, 0.25),
            1e-9,
        )
        .unwrap();
        let cm = coarse_moduli(&d, 2).unwrap();
        assert_eq!(
            cm.generators,
            vec![parse("x0").unwrap(), parse("x1^2").unwrap()]
        );
        assert_eq!(cm.ring.relations(), &[parse("x0^2 + x1 - 1").unwrap()]);
        assert!(cm.annotations.is_empty());
    }

    #[test]
    fn syzygies_are_found() {
        // ℤ/2 acting by −1 on ℝ²: invariants x0², x0·x1, x1² with one relation.
        let cm = coarse_moduli(
            &QuotientStackDesc::new(
                &RingPresentation::free(2),
                LinearAction::negation(2),
                &SearchParams::cube(2, -1.0, 1.0, 0.5),
                1e-9,
            )
            .unwrap(),
            2,
        )
        .unwrap();
        assert_eq!(cm.generators.len(), 3);
        assert_eq!(cm.ring.relations().len(), 1);
        let rel = &cm.ring.relations()[0];
        let p = cm.map_point(&[0.3, -0.7]).unwrap();
        assert!(rel.evaluate(&p).unwrap().abs() < 1e-12);
    }
}
