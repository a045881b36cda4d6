//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::expr::simplify::{make_pow, make_product, make_sum};
use crate::expr::{Rational, SmoothExpr};
use crate::{Error, Result};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Polynomial::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Polynomial::monomial(m, Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero(m.len());
        p.add_term(m, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::constant(self.nvars, Rational::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Substitute polynomials (all over a common ring) for the variables.
    pub fn compose(&self, args: &[Polynomial]) -> Polynomial {
        assert_eq!(args.len(), self.nvars, "one argument per variable");
        let target = args.first().map_or(0, |a| a.nvars);
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&args[i].pow(e));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Convert a polynomial expression. Fails on primitives, negative powers
    /// of non-constants, and variables `>= nvars`.
    pub fn from_expr(e: &SmoothExpr, nvars: usize) -> Result<Polynomial> {
        e.check_arity(nvars)?;
        Self::convert(e, nvars)
    }

    fn convert(e: &SmoothExpr, nvars: usize) -> Result<Polynomial> {
        match e {
            SmoothExpr::Const(c) => Ok(Polynomial::constant(nvars, c.clone())),
            SmoothExpr::Var(i) => Ok(Polynomial::var(nvars, *i)),
            SmoothExpr::Sum(ts) => ts.iter().try_fold(Polynomial::zero(nvars), |acc, t| {
                Ok(acc.add(&Self::convert(t, nvars)?))
            }),
            SmoothExpr::Product(fs) => fs
                .iter()
                .try_fold(Polynomial::constant(nvars, Rational::one()), |acc, f| {
                    Ok(acc.mul(&Self::convert(f, nvars)?))
                }),
            SmoothExpr::Pow(b, k) => {
                if *k >= 0 {
                    Ok(Self::convert(b, nvars)?.pow(*k as u32))
                } else {
                    match &**b {
                        SmoothExpr::Const(c) if !c.is_zero() => Ok(Polynomial::constant(
                            nvars,
                            num_traits::Pow::pow(c, *k as i32),
                        )),
                        _ => Err(Error::NotPolynomial),
                    }
                }
            }
            SmoothExpr::Apply(..) => Err(Error::NotPolynomial),
        }
    }

    /// Canonical expression (same result as expanding the polynomial).
    pub fn to_expr(&self) -> SmoothExpr {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut factors = vec![SmoothExpr::Const(c.clone())];
                for (i, &e) in m.iter().enumerate() {
                    if e > 0 {
                        factors.push(make_pow(SmoothExpr::Var(i), e as i64));
                    }
                }
                make_product(factors)
            })
            .collect();
        make_sum(terms)
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut v = crate::expr::eval::rational_to_f64(c);
                for (i, &e) in m.iter().enumerate() {
                    v *= x[i].powi(e as i32);
                }
                v
            })
            .sum()
    }

    /// Leading monomial in graded lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|(a, _), (b, _)| grlex(a, b))
    }

    /// Scale so the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }
}

/// Graded lexicographic comparison (`x0 > x1 > …` within a degree).
pub fn grlex(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// All exponent vectors in `nvars` variables of total degree exactly `d`,
/// in decreasing graded-lex order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out
}
