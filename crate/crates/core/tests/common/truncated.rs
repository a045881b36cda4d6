use std::collections::BTreeMap;

use cinfring::poly::Polynomial;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use super::strategies::{dyadic, poly};

/// Truncated polynomial arithmetic: monomial → coefficient, dropping
/// monomials of degree ≥ `order`.
#[derive(Clone, Debug)]
pub struct Trunc {
    pub order: u32,
    pub terms: BTreeMap<Vec<u32>, f64>,
}

impl Trunc {
    pub fn constant(k: usize, order: u32, c: f64) -> Self {
        Trunc {
            order,
            terms: BTreeMap::from([(vec![0; k], c)]),
        }
    }

    pub fn add(&self, other: &Trunc) -> Trunc {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(m.clone()).or_insert(0.0) += c;
        }
        Trunc {
            order: self.order,
            terms,
        }
    }

    pub fn mul(&self, other: &Trunc) -> Trunc {
        let mut terms = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let m: Vec<u32> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                if m.iter().sum::<u32>() < self.order {
                    *terms.entry(m).or_insert(0.0) += x * y;
                }
            }
        }
        Trunc {
            order: self.order,
            terms,
        }
    }

    pub fn get(&self, m: &[u32]) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }
}

pub fn oracle(f: &Polynomial, args: &[Trunc], k: usize, order: u32) -> Trunc {
    let mut total = Trunc::constant(k, order, 0.0);
    for (m, c) in f.terms() {
        let mut term = Trunc::constant(k, order, c.to_f64().unwrap());
        for (arg, &e) in args.iter().zip(m) {
            for _ in 0..e {
                term = term.mul(arg);
            }
        }
        total = total.add(&term);
    }
    total
}

pub fn instance() -> impl Strategy<Value = (usize, u32, usize, Vec<Vec<f64>>, Polynomial)> {
    (1usize..=3, 1u32..=5, 1usize..=3).prop_flat_map(|(k, order, m)| {
        let dim = (0..order).map(|d| monomial_count(k, d)).sum::<usize>();
        (
            Just(k),
            Just(order),
            Just(m),
            prop::collection::vec(prop::collection::vec(dyadic(), dim), m),
            poly(m, 3, 4),
        )
    })
}

pub fn monomial_count(k: usize, d: u32) -> usize {
    cinfring::poly::monomials_of_degree(k, d).len()
}
