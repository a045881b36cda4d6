//! Weil algebras `ℝ[x_1..x_k]/I` for monomial ideals `I ⊇ mᴺ`, with the
//! C∞-structure given by truncated Taylor expansion.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::cring::{Provenance, Ring, RingPresentation};
use crate::expr::SmoothExpr;
use crate::poly::{grlex, monomials_of_degree, Monomial};
use crate::{Error, Result};

#[derive(Debug, PartialEq)]
pub struct WeilAlgebra {
    k: usize,
    order: u32,
    /// Minimal generators of the extra zero monomials (degree < order).
    extra: Vec<Monomial>,
    /// Surviving monomials in ascending graded-lex order.
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl WeilAlgebra {
    /// `ℝ[x_1..x_k]` modulo all monomials of degree `≥ order` and all
    /// multiples of `extra_zero`.
    pub fn new(k: usize, order: u32, extra_zero: &[Monomial]) -> Result<Arc<WeilAlgebra>> {
        if order == 0 {
            return Err(Error::Mismatch(
                "Weil algebra order must be at least 1".into(),
            ));
        }
        if let Some(m) = extra_zero.iter().find(|m| m.len() != k) {
            return Err(Error::ArityMismatch {
                expected: k,
                found: m.len(),
            });
        }
        let mut sorted: Vec<Monomial> = extra_zero
            .iter()
            .filter(|m| m.iter().sum::<u32>() < order)
            .cloned()
            .collect();
        sorted.sort_by(|a, b| grlex(a, b));
        sorted.dedup();
        let mut extra: Vec<Monomial> = Vec::new();
        for m in sorted {
            if !extra.iter().any(|e| divides(e, &m)) {
                extra.push(m);
            }
        }
        let basis: Vec<Monomial> = (0..order)
            .flat_map(|d| {
                let mut ms = monomials_of_degree(k, d);
                ms.reverse();
                ms
            })
            .filter(|m| !extra.iter().any(|e| divides(e, m)))
            .collect();
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Ok(Arc::new(WeilAlgebra {
            k,
            order,
            extra,
            basis,
            index,
        }))
    }

    /// `ℝ[ε]/(ε²)`.
    pub fn dual_numbers() -> Arc<WeilAlgebra> {
        WeilAlgebra::new(1, 2, &[]).expect("valid")
    }

    pub fn nilpotent_count(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn is_zero_monomial(&self, m: &[u32]) -> bool {
        !self.index.contains_key(m)
    }

    /// Minimal monomial generators of the ideal.
    pub fn ideal_generators(&self) -> Vec<Monomial> {
        let mut gens = self.extra.clone();
        let mut top = monomials_of_degree(self.k, self.order);
        top.reverse();
        gens.extend(
            top.into_iter()
                .filter(|m| !self.extra.iter().any(|e| divides(e, m))),
        );
        gens
    }

    /// The algebra as a presentation `C∞(ℝᵏ)/(x^α : α a minimal zero
    /// monomial)`; its only ℝ-point is the origin.
    pub fn presentation(&self) -> Result<Ring> {
        let relations = self
            .ideal_generators()
            .into_iter()
            .map(|m| crate::poly::Polynomial::monomial(m, num_traits::One::one()).to_expr())
            .collect();
        RingPresentation::build(self.k, relations, Provenance::Quotient)
    }
}

#[derive(Clone, Debug)]
pub struct WeilElement {
    owner: Arc<WeilAlgebra>,
    coeffs: Vec<f64>,
}

impl PartialEq for WeilElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.owner, &other.owner) || self.owner == other.owner)
            && self.coeffs == other.coeffs
    }
}

impl WeilElement {
    pub fn zero(owner: &Arc<WeilAlgebra>) -> Self {
        WeilElement {
            owner: owner.clone(),
            coeffs: vec![0.0; owner.dimension()],
        }
    }

    pub fn constant(owner: &Arc<WeilAlgebra>, c: f64) -> Self {
        let mut e = Self::zero(owner);
        e.coeffs[0] = c;
        e
    }

    /// The nilpotent generator `x_i` (zero if `x_i` itself is killed).
    pub fn generator(owner: &Arc<WeilAlgebra>, i: usize) -> Result<Self> {
        if i >= owner.k {
            return Err(Error::VariableOutOfRange {
                index: i,
                arity: owner.k,
            });
        }
        let mut m = vec![0; owner.k];
        m[i] = 1;
        Self::from_terms(owner, &[(m, 1.0)])
    }

    /// Sum of `c·x^α`; terms on zero monomials are dropped.
    pub fn from_terms(owner: &Arc<WeilAlgebra>, terms: &[(Monomial, f64)]) -> Result<Self> {
        let mut e = Self::zero(owner);
        for (m, c) in terms {
            if m.len() != owner.k {
                return Err(Error::ArityMismatch {
                    expected: owner.k,
                    found: m.len(),
                });
            }
            if let Some(&i) = owner.index.get(m) {
                e.coeffs[i] += c;
            }
        }
        Ok(e)
    }

    pub fn owner(&self) -> &Arc<WeilAlgebra> {
        &self.owner
    }

    /// Coefficients in the order of [`WeilAlgebra::basis`].
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coefficient(&self, m: &[u32]) -> f64 {
        self.owner.index.get(m).map_or(0.0, |&i| self.coeffs[i])
    }

    /// Image under `W → W/m ≅ ℝ`.
    pub fn augmentation(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn nilpotent_part(&self) -> WeilElement {
        let mut e = self.clone();
        e.coeffs[0] = 0.0;
        e
    }

    fn check_owner(&self, other: &WeilElement) -> Result<()> {
        if Arc::ptr_eq(&self.owner, &other.owner) || self.owner == other.owner {
            Ok(())
        } else {
            Err(Error::OwnerMismatch)
        }
    }

    pub fn add(&self, other: &WeilElement) -> Result<WeilElement> {
        self.check_owner(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(WeilElement {
            owner: self.owner.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, c: f64) -> WeilElement {
        WeilElement {
            owner: self.owner.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &WeilElement) -> Result<WeilElement> {
        self.check_owner(other)?;
        let w = &self.owner;
        let mut out = vec![0.0; w.dimension()];
        let mut m = vec![0u32; w.k];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if *b == 0.0 {
                    continue;
                }
                for (t, slot) in m.iter_mut().enumerate() {
                    *slot = w.basis[i][t] + w.basis[j][t];
                }
                if let Some(&idx) = w.index.get(&m) {
                    out[idx] += a * b;
                }
            }
        }
        Ok(WeilElement {
            owner: w.clone(),
            coeffs: out,
        })
    }
}

impl fmt::Display for WeilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.owner.basis.iter().zip(&self.coeffs) {
            if *c == 0.0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{e}")?,
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `Φ_f(args)`: the truncated Taylor series of `f` at the augmentation
/// point, evaluated on the nilpotent parts.
pub fn weil_phi(f: &SmoothExpr, args: &[WeilElement]) -> Result<WeilElement> {
    let m = args.len();
    if f.min_arity() > m {
        return Err(Error::ArityMismatch {
            expected: f.min_arity(),
            found: m,
        });
    }
    let Some(first) = args.first() else {
        // No arguments: f is a constant function and W has no owner to name.
        return Err(Error::ArityMismatch {
            expected: 1,
            found: 0,
        });
    };
    let owner = first.owner.clone();
    for a in args {
        first.check_owner(a)?;
    }
    let point: Vec<f64> = args.iter().map(WeilElement::augmentation).collect();
    let nil: Vec<WeilElement> = args.iter().map(WeilElement::nilpotent_part).collect();
    let order = owner.order;

    // powers[i][e] = nil_i^e
    let mut powers: Vec<Vec<WeilElement>> = Vec::with_capacity(m);
    for n in &nil {
        let mut row = vec![WeilElement::constant(&owner, 1.0)];
        for e in 1..order as usize {
            let next = row[e - 1].mul(n)?;
            row.push(next);
        }
        powers.push(row);
    }

    let mut derivs: HashMap<Monomial, SmoothExpr> = HashMap::new();
    derivs.insert(vec![0; m], f.clone());
    let mut result = WeilElement::zero(&owner);
    for d in 0..order {
        let mut alphas = monomials_of_degree(m, d);
        alphas.reverse();
        for alpha in alphas {
            let mut term = WeilElement::constant(&owner, 1.0);
            let mut vanishes = false;
            for (i, &e) in alpha.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[i][e as usize])?;
                    if term.coeffs.iter().all(|c| *c == 0.0) {
                        vanishes = true;
                        break;
                    }
                }
            }
            if vanishes {
                continue;
            }
            let deriv = derivative(&mut derivs, &alpha);
            let value = deriv.evaluate(&point)?;
            if value == 0.0 {
                continue;
            }
            let factorial: f64 = alpha
                .iter()
                .map(|&e| (1..=e).map(f64::from).product::<f64>())
                .product();
            result = result.add(&term.scale(value / factorial))?;
        }
    }
    Ok(result)
}

/// `∂^α f`, memoized; derived from `α − e_j` with `j` the first non-zero
/// slot.
fn derivative(memo: &mut HashMap<Monomial, SmoothExpr>, alpha: &Monomial) -> SmoothExpr {
    if let Some(d) = memo.get(alpha) {
        return d.clone();
    }
    let j = alpha
        .iter()
        .position(|&e| e > 0)
        .expect("non-zero multi-index");
    let mut lower = alpha.clone();
    lower[j] -= 1;
    let d = derivative(memo, &lower).differentiate(j);
    memo.insert(alpha.clone(), d.clone());
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cring::is_r_point;
    use crate::parse;

    #[test]
    fn dimensions() {
        assert_eq!(WeilAlgebra::new(1, 2, &[]).unwrap().dimension(), 2);
        assert_eq!(WeilAlgebra::new(1, 4, &[]).unwrap().dimension(), 4);
        assert_eq!(WeilAlgebra::new(2, 2, &[]).unwrap().dimension(), 3);
        let w = WeilAlgebra::new(2, 3, &[vec![1, 1]]).unwrap();
        assert_eq!(w.dimension(), 5);
        assert!(w.is_zero_monomial(&[1, 1]));
        assert!(w.is_zero_monomial(&[2, 1]));
        assert!(WeilAlgebra::new(1, 0, &[]).is_err());
    }

    #[test]
    fn ring_operations() {
        let w3 = WeilAlgebra::new(1, 3, &[]).unwrap();
        let x = WeilElement::generator(&w3, 0).unwrap();
        let one_x = WeilElement::constant(&w3, 1.0).add(&x).unwrap();
        assert_eq!(one_x.mul(&one_x).unwrap().coefficients(), &[1.0, 2.0, 1.0]);
        let w2 = WeilAlgebra::dual_numbers();
        let e = WeilElement::constant(&w2, 1.0)
            .add(&WeilElement::generator(&w2, 0).unwrap())
            .unwrap();
        assert_eq!(e.mul(&e).unwrap().coefficients(), &[1.0, 2.0]);
        let m2 = WeilAlgebra::new(2, 2, &[]).unwrap();
        let xy = WeilElement::generator(&m2, 0)
            .unwrap()
            .mul(&WeilElement::generator(&m2, 1).unwrap())
            .unwrap();
        assert!(xy.coefficients().iter().all(|c| *c == 0.0));
        assert_eq!(
            x.add(&WeilElement::generator(&w2, 0).unwrap()),
            Err(Error::OwnerMismatch)
        );
    }

    #[test]
    fn taylor_examples() {
        let w2 = WeilAlgebra::dual_numbers();
        let eps = WeilElement::generator(&w2, 0).unwrap();
        assert_eq!(
            weil_phi(&parse("exp(x0)").unwrap(), &[eps])
                .unwrap()
                .coefficients(),
            &[1.0, 1.0]
        );
        let w3 = WeilAlgebra::new(1, 3, &[]).unwrap();
        let eps = WeilElement::generator(&w3, 0).unwrap();
        assert_eq!(
            weil_phi(&parse("sin(x0)").unwrap(), std::slice::from_ref(&eps))
                .unwrap()
                .coefficients(),
            &[0.0, 1.0, 0.0]
        );
        assert_eq!(
            weil_phi(&parse("1/(1 + x0)").unwrap(), std::slice::from_ref(&eps))
                .unwrap()
                .coefficients(),
            &[1.0, -1.0, 1.0]
        );
        assert!(weil_phi(&parse("log(x0)").unwrap(), &[eps]).is_err());
    }

    #[test]
    fn bump_is_flat_at_zero() {
        let w = WeilAlgebra::new(1, 5, &[]).unwrap();
        let eps = WeilElement::generator(&w, 0).unwrap();
        let v = weil_phi(&parse("invexp(x0)").unwrap(), &[eps]).unwrap();
        assert!(v.coefficients().iter().all(|c| *c == 0.0));
    }

    #[test]
    fn presentation_bridge() {
        let w = WeilAlgebra::new(2, 3, &[vec![1, 1]]).unwrap();
        let r = w.presentation().unwrap();
        assert_eq!(r.to_string(), "Cinf(R^2)/<(x0*x1), x1^3, x0^3>");
        assert!(is_r_point(&r, &[0.0, 0.0], 1e-9).unwrap().is_accepted());
        assert!(!is_r_point(&r, &[0.5, 0.0], 1e-9).unwrap().is_accepted());
    }
}
