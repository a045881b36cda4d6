//! Finite groups acting linearly on presentations, and the desk-scale
//! quotient-stack layer built on them.

mod equivariant;
mod invariants;
mod stack;

use std::fmt;

use num_traits::{One, Zero};

use crate::cring::{sample_points, Ring, RingMorphism, SearchParams};
use crate::expr::eval::rational_to_f64;
use crate::expr::{expand, rational, simplify, Rational, SmoothExpr};
use crate::linalg::solve_combination;
use crate::poly::{monomials_of_degree, Polynomial};
use crate::{Error, Result};

pub use equivariant::{
    equivariant_cotangent, equivariant_module_check, CocycleReport, EquivariantModule,
};
pub use invariants::{coarse_moduli, invariant_generators, reynolds, CoarseModuli};
pub use stack::{
    groupoid_check, groupoid_from_action, orbit_space, stabilizer, stack_fibre_product,
    GroupoidDesc, GroupoidReport, Orbit, StackFibreProduct, StackMap, TaggedComponent,
};

/// A finite group given by its multiplication table; `table[a][b] = a·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validate a multiplication table: closure, identity, inverses,
    /// associativity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if table
            .iter()
            .any(|row| row.len() != n || row.iter().any(|&x| x >= n))
        {
            return Err(Error::InvalidGroup(format!(
                "table must be {n} x {n} with entries below {n}"
            )));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {g} has no inverse")))?;
            inverse.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            table,
            identity,
            inverse,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `ℤ/n` with element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        let n = n.max(1);
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        Self::from_table(table).expect("cyclic table is a group")
    }

    /// `F × G`, with `(f, g)` stored at index `f·|G| + g`.
    pub fn product(f: &FiniteGroup, g: &FiniteGroup) -> Self {
        let (nf, ng) = (f.order(), g.order());
        let table = (0..nf * ng)
            .map(|a| {
                (0..nf * ng)
                    .map(|b| f.mul(a / ng, b / ng) * ng + g.mul(a % ng, b % ng))
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("product of groups is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        elems.contains(&self.identity)
            && elems.iter().all(|&a| {
                elems.contains(&self.inv(a))
                    && elems.iter().all(|&b| elems.contains(&self.mul(a, b)))
            })
    }

    /// Is `map` (indexed by elements of `self`) a homomorphism into `target`?
    pub fn is_homomorphism(&self, map: &[usize], target: &FiniteGroup) -> bool {
        map.len() == self.order()
            && map.iter().all(|&x| x < target.order())
            && (0..self.order()).all(|a| {
                (0..self.order()).all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b]))
            })
    }
}

pub type RationalMatrix = Vec<Vec<Rational>>;

fn mat_mul(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn mat_identity(n: usize) -> RationalMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// A representation `γ ↦ M_γ` acting on generators by `x ↦ M_γ·x`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearAction {
    group: FiniteGroup,
    arity: usize,
    matrices: Vec<RationalMatrix>,
}

impl LinearAction {
    /// Checks `M_e = I` and `M_{γδ} = M_γ·M_δ` exactly.
    pub fn new(group: FiniteGroup, arity: usize, matrices: Vec<RationalMatrix>) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::InvalidAction(format!(
                "{} matrices for a group of order {}",
                matrices.len(),
                group.order()
            )));
        }
        if matrices
            .iter()
            .any(|m| m.len() != arity || m.iter().any(|r| r.len() != arity))
        {
            return Err(Error::InvalidAction(format!(
                "matrices must be {arity} x {arity}"
            )));
        }
        if matrices[group.identity()] != mat_identity(arity) {
            return Err(Error::InvalidAction(
                "identity element does not act trivially".into(),
            ));
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                if matrices[group.mul(a, b)] != mat_mul(&matrices[a], &matrices[b]) {
                    return Err(Error::InvalidAction(format!(
                        "M_(g{a}*g{b}) differs from M_g{a} * M_g{b}"
                    )));
                }
            }
        }
        Ok(LinearAction {
            group,
            arity,
            matrices,
        })
    }

    pub fn trivial(group: FiniteGroup, arity: usize) -> Self {
        let matrices = vec![mat_identity(arity); group.order()];
        LinearAction {
            group,
            arity,
            matrices,
        }
    }

    /// `ℤ/2` acting by `x ↦ −x` on every coordinate.
    pub fn negation(arity: usize) -> Self {
        let minus: RationalMatrix = mat_identity(arity)
            .into_iter()
            .map(|r| r.into_iter().map(|q| -q).collect())
            .collect();
        Self::new(
            FiniteGroup::cyclic(2),
            arity,
            vec![mat_identity(arity), minus],
        )
        .expect("valid")
    }

    /// `ℤ/n` acting on `ℝ²` by rotations, for `n ∈ {1, 2, 4}` (the ones
    /// with rational matrices).
    pub fn rotation(n: usize) -> Result<Self> {
        let q = |v: i64| rational(v, 1);
        let r = match n {
            1 => return Ok(Self::trivial(FiniteGroup::trivial(), 2)),
            2 => vec![vec![q(-1), q(0)], vec![q(0), q(-1)]],
            4 => vec![vec![q(0), q(-1)], vec![q(1), q(0)]],
            _ => {
                return Err(Error::InvalidAction(format!(
                    "no rational rotation of order {n}"
                )))
            }
        };
        let mut mats = vec![mat_identity(2)];
        for k in 1..n {
            mats.push(mat_mul(&r, &mats[k - 1]));
        }
        Self::new(FiniteGroup::cyclic(n), 2, mats)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn matrix(&self, g: usize) -> &RationalMatrix {
        &self.matrices[g]
    }

    /// `(M_γ·x)_i` as expressions.
    pub fn images(&self, g: usize) -> Vec<SmoothExpr> {
        self.matrices[g]
            .iter()
            .map(|row| {
                simplify(&SmoothExpr::Sum(
                    row.iter()
                        .enumerate()
                        .map(|(j, c)| {
                            SmoothExpr::Product(vec![
                                SmoothExpr::Const(c.clone()),
                                SmoothExpr::Var(j),
                            ])
                        })
                        .collect(),
                ))
            })
            .collect()
    }

    pub fn apply_point(&self, g: usize, p: &[f64]) -> Vec<f64> {
        self.matrices[g]
            .iter()
            .map(|row| row.iter().zip(p).map(|(c, x)| rational_to_f64(c) * x).sum())
            .collect()
    }

    /// `f∘γ`, i.e. `f(M_γ·x)`; polynomials are returned expanded.
    pub fn act(&self, g: usize, f: &SmoothExpr) -> Result<SmoothExpr> {
        let s = f.substitute(&self.images(g))?;
        Ok(if s.is_polynomial() { expand(&s) } else { s })
    }
}

/// How the G-stability of the relations was established.
#[derive(Clone, Debug, PartialEq)]
pub enum StabilityStatus {
    /// Every `f∘γ` is a rational linear combination of the relations.
    Exact,
    /// Every `f∘γ` vanished at the sampled ℝ-points.
    Sampled { points: usize, max_residual: f64 },
    Failed {
        relation: usize,
        element: usize,
        residual: f64,
    },
    /// Not exact and no ℝ-points to sample.
    Inconclusive,
}

impl StabilityStatus {
    pub fn passed(&self) -> bool {
        matches!(
            self,
            StabilityStatus::Exact | StabilityStatus::Sampled { .. }
        )
    }
}

impl fmt::Display for StabilityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabilityStatus::Exact => f.write_str("stable (exact)"),
            StabilityStatus::Sampled {
                points,
                max_residual,
            } => {
                write!(
                    f,
                    "stable at {points} sampled points (max residual {max_residual:e})"
                )
            }
            StabilityStatus::Failed {
                relation,
                element,
                residual,
            } => {
                write!(f, "relation {relation} not stable under element {element} (residual {residual:e})")
            }
            StabilityStatus::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

/// `[U/G]` for a linear action on the generators of `U`.
#[derive(Clone, Debug)]
pub struct QuotientStackDesc {
    ring: Ring,
    action: LinearAction,
    status: StabilityStatus,
}

impl QuotientStackDesc {
    /// Checks that the relations are G-stable, exactly when possible and
    /// otherwise at points found with `params`.
    pub fn new(ring: &Ring, action: LinearAction, params: &SearchParams, tol: f64) -> Result<Self> {
        if action.arity() != ring.arity() {
            return Err(Error::ArityMismatch {
                expected: ring.arity(),
                found: action.arity(),
            });
        }
        let status = stability(ring, &action, params, tol)?;
        Ok(QuotientStackDesc {
            ring: ring.clone(),
            action,
            status,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn action(&self) -> &LinearAction {
        &self.action
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.action.group
    }

    pub fn status(&self) -> &StabilityStatus {
        &self.status
    }

    /// The ring map `U → U`, `x ↦ M_γ·x`.
    pub fn action_morphism(&self, g: usize) -> RingMorphism {
        RingMorphism::new(&self.ring, &self.ring, self.action.images(g)).expect("arity matches")
    }

    fn require_stable(&self) -> Result<()> {
        if self.status.passed() {
            Ok(())
        } else {
            Err(Error::CheckFailed(format!(
                "relations are not G-stable: {}",
                self.status
            )))
        }
    }
}

fn exact_stability(ring: &Ring, action: &LinearAction) -> Option<bool> {
    let n = ring.arity();
    let rels: Vec<Polynomial> = ring
        .relations()
        .iter()
        .map(|r| Polynomial::from_expr(r, n))
        .collect::<Result<_>>()
        .ok()?;
    let max_deg = rels
        .iter()
        .filter_map(Polynomial::total_degree)
        .max()
        .unwrap_or(0);
    let monos: Vec<Vec<u32>> = (0..=max_deg)
        .flat_map(|d| monomials_of_degree(n, d))
        .collect();
    let vector = |p: &Polynomial| {
        monos
            .iter()
            .map(|m| p.coefficient(m))
            .collect::<Vec<Rational>>()
    };
    let rows: Vec<Vec<Rational>> = rels.iter().map(vector).collect();
    for g in 0..action.group.order() {
        for r in ring.relations() {
            let moved = Polynomial::from_expr(&action.act(g, r).ok()?, n).ok()?;
            if rows.is_empty() {
                if !moved.is_zero() {
                    return Some(false);
                }
                continue;
            }
            if solve_combination(&rows, &vector(&moved)).is_none() {
                return Some(false);
            }
        }
    }
    Some(true)
}

fn stability(
    ring: &Ring,
    action: &LinearAction,
    params: &SearchParams,
    tol: f64,
) -> Result<StabilityStatus> {
    if exact_stability(ring, action) == Some(true) {
        return Ok(StabilityStatus::Exact);
    }
    let points = sample_points(ring, params, 50)?;
    if points.is_empty() {
        return Ok(StabilityStatus::Inconclusive);
    }
    let mut worst = 0.0f64;
    for (i, r) in ring.relations().iter().enumerate() {
        for g in 0..action.group.order() {
            for p in &points {
                let moved = action.apply_point(g, p.coords());
                let residual = r.evaluate(&moved).map_or(f64::INFINITY, f64::abs);
                if residual > tol {
                    return Ok(StabilityStatus::Failed {
                        relation: i,
                        element: g,
                        residual,
                    });
                }
                worst = worst.max(residual);
            }
        }
    }
    Ok(StabilityStatus::Sampled {
        points: points.len(),
        max_residual: worst,
    })
}
