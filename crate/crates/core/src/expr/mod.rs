//! Symbolic smooth expressions over a fixed library of primitives.
//!
//! A [`SmoothExpr`] denotes a smooth function `ℝⁿ → ℝ` built from exact
//! rational constants, coordinate variables `x0, x1, …`, sums, products,
//! integer powers and the primitives in [`Primitive`]. Every C∞-ring
//! operation in this crate is carried out by substituting expressions into
//! expressions, so this module is the engine underneath everything else.
//!
//! Expressions are kept in a canonical form (see [`simplify`]) so that
//! structural equality and the printed form are deterministic.

mod calculus;
pub(crate) mod eval;
mod parse;
mod print;
pub(crate) mod simplify;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use calculus::{fd_gradient_check, hadamard_split};
pub use eval::CompiledExpr;
pub use parse::{parse, parse_with_arity};
pub use simplify::{expand, simplify};

/// Exact rational numbers used for expression constants.
pub type Rational = num_rational::BigRational;

/// Build a rational from a machine-sized numerator and denominator.
pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// The fixed primitive library. Variant order is alphabetical, which is
/// also the canonical ordering of applications.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Primitive {
    Atan,
    Cos,
    Exp,
    /// `e^(-1/x)` for `x > 0`, `0` otherwise. Smooth but not analytic at 0.
    Invexp,
    Log,
    Sin,
    Sqrt,
}

impl Primitive {
    pub const ALL: [Primitive; 7] = [
        Primitive::Atan,
        Primitive::Cos,
        Primitive::Exp,
        Primitive::Invexp,
        Primitive::Log,
        Primitive::Sin,
        Primitive::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Primitive::Atan => "atan",
            Primitive::Cos => "cos",
            Primitive::Exp => "exp",
            Primitive::Invexp => "invexp",
            Primitive::Log => "log",
            Primitive::Sin => "sin",
            Primitive::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Primitive> {
        Primitive::ALL.iter().copied().find(|p| p.name() == name)
    }

    /// Derivative of the primitive, as an expression in `u`.
    pub fn derivative(self, u: &SmoothExpr) -> SmoothExpr {
        let apply = |p: Primitive| SmoothExpr::Apply(p, Box::new(u.clone()));
        let raw = match self {
            Primitive::Exp => apply(Primitive::Exp),
            Primitive::Log => SmoothExpr::Pow(Box::new(u.clone()), -1),
            Primitive::Sin => apply(Primitive::Cos),
            Primitive::Cos => SmoothExpr::Product(vec![SmoothExpr::int(-1), apply(Primitive::Sin)]),
            Primitive::Atan => SmoothExpr::Pow(
                Box::new(SmoothExpr::Sum(vec![
                    SmoothExpr::int(1),
                    SmoothExpr::Pow(Box::new(u.clone()), 2),
                ])),
                -1,
            ),
            // x^(-1/2) is written as sqrt(x)^(-1) since exponents are integral.
            Primitive::Sqrt => SmoothExpr::Product(vec![
                SmoothExpr::Const(rational(1, 2)),
                SmoothExpr::Pow(Box::new(apply(Primitive::Sqrt)), -1),
            ]),
            Primitive::Invexp => SmoothExpr::Product(vec![
                apply(Primitive::Invexp),
                SmoothExpr::Pow(Box::new(u.clone()), -2),
            ]),
        };
        simplify(&raw)
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A symbolic smooth function of finitely many real variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SmoothExpr {
    Const(Rational),
    Var(usize),
    Sum(Vec<SmoothExpr>),
    Product(Vec<SmoothExpr>),
    Pow(Box<SmoothExpr>, i64),
    Apply(Primitive, Box<SmoothExpr>),
}

impl SmoothExpr {
    pub fn zero() -> Self {
        SmoothExpr::Const(Rational::zero())
    }

    pub fn one() -> Self {
        SmoothExpr::Const(Rational::one())
    }

    pub fn int(n: i64) -> Self {
        SmoothExpr::Const(Rational::from_integer(BigInt::from(n)))
    }

    pub fn constant(q: Rational) -> Self {
        SmoothExpr::Const(q)
    }

    pub fn var(i: usize) -> Self {
        SmoothExpr::Var(i)
    }

    pub fn apply(p: Primitive, arg: SmoothExpr) -> Self {
        simplify(&SmoothExpr::Apply(p, Box::new(arg)))
    }

    pub fn powi(&self, k: i64) -> Self {
        simplify(&SmoothExpr::Pow(Box::new(self.clone()), k))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SmoothExpr::Const(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, SmoothExpr::Const(c) if c.is_one())
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self {
            SmoothExpr::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            SmoothExpr::Const(_) => None,
            SmoothExpr::Var(i) => Some(*i),
            SmoothExpr::Sum(xs) | SmoothExpr::Product(xs) => {
                xs.iter().filter_map(|x| x.max_var()).max()
            }
            SmoothExpr::Pow(b, _) => b.max_var(),
            SmoothExpr::Apply(_, a) => a.max_var(),
        }
    }

    /// Number of variables the expression needs: `1 + max_var`, or 0.
    pub fn min_arity(&self) -> usize {
        self.max_var().map_or(0, |m| m + 1)
    }

    pub fn check_arity(&self, arity: usize) -> crate::Result<()> {
        match self.max_var() {
            Some(index) if index >= arity => Err(crate::Error::VariableOutOfRange { index, arity }),
            _ => Ok(()),
        }
    }

    pub fn contains_primitive(&self) -> bool {
        match self {
            SmoothExpr::Const(_) | SmoothExpr::Var(_) => false,
            SmoothExpr::Sum(xs) | SmoothExpr::Product(xs) => {
                xs.iter().any(|x| x.contains_primitive())
            }
            SmoothExpr::Pow(b, _) => b.contains_primitive(),
            SmoothExpr::Apply(..) => true,
        }
    }

    /// True when the expression is a polynomial: no primitives and no
    /// negative powers of non-constant subexpressions.
    pub fn is_polynomial(&self) -> bool {
        match self {
            SmoothExpr::Const(_) | SmoothExpr::Var(_) => true,
            SmoothExpr::Sum(xs) | SmoothExpr::Product(xs) => xs.iter().all(|x| x.is_polynomial()),
            SmoothExpr::Pow(b, k) => {
                (*k >= 0 || matches!(**b, SmoothExpr::Const(ref c) if !c.is_zero()))
                    && b.is_polynomial()
            }
            SmoothExpr::Apply(..) => false,
        }
    }

    /// Rename every `Var(i)` to `Var(i + offset)`.
    pub fn shift_vars(&self, offset: usize) -> SmoothExpr {
        if offset == 0 {
            return self.clone();
        }
        self.map_vars(&|i| SmoothExpr::Var(i + offset))
    }

    pub(crate) fn map_vars(&self, f: &dyn Fn(usize) -> SmoothExpr) -> SmoothExpr {
        match self {
            SmoothExpr::Const(_) => self.clone(),
            SmoothExpr::Var(i) => f(*i),
            SmoothExpr::Sum(xs) => SmoothExpr::Sum(xs.iter().map(|x| x.map_vars(f)).collect()),
            SmoothExpr::Product(xs) => {
                SmoothExpr::Product(xs.iter().map(|x| x.map_vars(f)).collect())
            }
            SmoothExpr::Pow(b, k) => SmoothExpr::Pow(Box::new(b.map_vars(f)), *k),
            SmoothExpr::Apply(p, a) => SmoothExpr::Apply(*p, Box::new(a.map_vars(f))),
        }
    }

    fn kind_rank(&self) -> u8 {
        match self {
            SmoothExpr::Const(_) => 0,
            SmoothExpr::Var(_) => 1,
            SmoothExpr::Pow(..) => 2,
            SmoothExpr::Apply(..) => 3,
            SmoothExpr::Product(_) => 4,
            SmoothExpr::Sum(_) => 5,
        }
    }
}

/// Canonical order: constants, variables by index, powers, applications by
/// primitive name, products, sums; ties broken by the printed form.
impl Ord for SmoothExpr {
    fn cmp(&self, other: &Self) -> Ordering {
        let by_rank = self.kind_rank().cmp(&other.kind_rank());
        if by_rank != Ordering::Equal {
            return by_rank;
        }
        match (self, other) {
            (SmoothExpr::Const(a), SmoothExpr::Const(b)) => a.cmp(b),
            (SmoothExpr::Var(a), SmoothExpr::Var(b)) => a.cmp(b),
            (SmoothExpr::Apply(p, _), SmoothExpr::Apply(q, _)) if p != q => p.cmp(q),
            _ if self == other => Ordering::Equal,
            _ => self.to_string().cmp(&other.to_string()),
        }
    }
}

impl PartialOrd for SmoothExpr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for SmoothExpr {
    type Output = SmoothExpr;
    fn add(self, rhs: SmoothExpr) -> SmoothExpr {
        simplify(&SmoothExpr::Sum(vec![self, rhs]))
    }
}

impl Sub for SmoothExpr {
    type Output = SmoothExpr;
    fn sub(self, rhs: SmoothExpr) -> SmoothExpr {
        simplify(&SmoothExpr::Sum(vec![
            self,
            SmoothExpr::Product(vec![SmoothExpr::int(-1), rhs]),
        ]))
    }
}

impl Mul for SmoothExpr {
    type Output = SmoothExpr;
    fn mul(self, rhs: SmoothExpr) -> SmoothExpr {
        simplify(&SmoothExpr::Product(vec![self, rhs]))
    }
}

impl Neg for SmoothExpr {
    type Output = SmoothExpr;
    fn neg(self) -> SmoothExpr {
        simplify(&SmoothExpr::Product(vec![SmoothExpr::int(-1), self]))
    }
}

impl std::str::FromStr for SmoothExpr {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        parse(s)
    }
}
