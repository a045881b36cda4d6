use num_traits::ToPrimitive;

use super::{Primitive, Rational, SmoothExpr};
use crate::error::DomainError;

pub(crate) fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Primitive {
    pub fn eval(self, x: f64) -> Result<f64, DomainError> {
        match self {
            Primitive::Exp => Ok(x.exp()),
            Primitive::Log if x > 0.0 => Ok(x.ln()),
            Primitive::Log => Err(DomainError::Log(x)),
            Primitive::Sin => Ok(x.sin()),
            Primitive::Cos => Ok(x.cos()),
            Primitive::Atan => Ok(x.atan()),
            Primitive::Sqrt if x >= 0.0 => Ok(x.sqrt()),
            Primitive::Sqrt => Err(DomainError::Sqrt(x)),
            Primitive::Invexp if x > 0.0 => Ok((-1.0 / x).exp()),
            Primitive::Invexp => Ok(0.0),
        }
    }
}

impl SmoothExpr {
    /// Evaluate in binary64 at `point`, which must cover every variable used.
    pub fn evaluate(&self, point: &[f64]) -> Result<f64, DomainError> {
        let needed = self.min_arity();
        if point.len() < needed {
            return Err(DomainError::PointTooShort {
                needed,
                found: point.len(),
            });
        }
        let v = eval(self, point)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(DomainError::NonFinite)
        }
    }
}

fn eval(e: &SmoothExpr, x: &[f64]) -> Result<f64, DomainError> {
    match e {
        SmoothExpr::Const(c) => Ok(rational_to_f64(c)),
        SmoothExpr::Var(i) => Ok(x[*i]),
        SmoothExpr::Sum(ts) => ts.iter().try_fold(0.0, |acc, t| Ok(acc + eval(t, x)?)),
        SmoothExpr::Product(fs) => eval_product(fs, x),
        SmoothExpr::Pow(b, k) => {
            let base = eval(b, x)?;
            if base == 0.0 && *k < 0 {
                return Err(DomainError::PoleAtZero { exponent: *k });
            }
            Ok(base.powi((*k).clamp(i32::MIN as i64, i32::MAX as i64) as i32))
        }
        SmoothExpr::Apply(p, a) => p.eval(eval(a, x)?),
    }
}

// invexp(u) vanishes to infinite order on u <= 0, so a product containing it
// is zero there even when it also carries a negative power of the same u
// (these are exactly the factors produced by differentiating invexp).
fn eval_product(fs: &[SmoothExpr], x: &[f64]) -> Result<f64, DomainError> {
    let mut acc = 1.0;
    let mut has_zero = false;
    for f in fs {
        match eval(f, x) {
            Ok(v) => {
                if v == 0.0 {
                    has_zero = true;
                }
                acc *= v;
            }
            Err(err) => {
                let absorbed = match f {
                    SmoothExpr::Pow(b, k) if *k < 0 => fs.iter().any(|g| match g {
                        SmoothExpr::Apply(Primitive::Invexp, u) => {
                            **u == **b && matches!(eval(u, x), Ok(v) if v <= 0.0)
                        }
                        _ => false,
                    }),
                    _ => false,
                };
                if absorbed {
                    has_zero = true;
                } else {
                    return Err(err);
                }
            }
        }
    }
    Ok(if has_zero { 0.0 } else { acc })
}

/// An expression lowered to binary64 constants for repeated evaluation.
/// Semantics match [`SmoothExpr::evaluate`].
#[derive(Clone, Debug)]
pub struct CompiledExpr {
    root: Node,
    arity: usize,
}

#[derive(Clone, Debug)]
enum Node {
    Const(f64),
    Var(usize),
    Sum(Vec<Node>),
    /// Factors, and for each factor the index of an `invexp(u)` factor that
    /// absorbs it when it is a negative power of the same `u`.
    Product(Vec<Node>, Vec<Option<usize>>),
    Pow(Box<Node>, i32, i64),
    Apply(Primitive, Box<Node>),
}

impl CompiledExpr {
    pub fn new(e: &SmoothExpr) -> Self {
        CompiledExpr {
            root: lower(e),
            arity: e.min_arity(),
        }
    }

    pub fn evaluate(&self, point: &[f64]) -> Result<f64, DomainError> {
        if point.len() < self.arity {
            return Err(DomainError::PointTooShort {
                needed: self.arity,
                found: point.len(),
            });
        }
        let v = run(&self.root, point)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(DomainError::NonFinite)
        }
    }
}

fn lower(e: &SmoothExpr) -> Node {
    match e {
        SmoothExpr::Const(c) => Node::Const(rational_to_f64(c)),
        SmoothExpr::Var(i) => Node::Var(*i),
        SmoothExpr::Sum(ts) => Node::Sum(ts.iter().map(lower).collect()),
        SmoothExpr::Product(fs) => {
            let absorbers = fs
                .iter()
                .map(|f| match f {
                    SmoothExpr::Pow(b, k) if *k < 0 => fs.iter().position(
                        |g| matches!(g, SmoothExpr::Apply(Primitive::Invexp, u) if **u == **b),
                    ),
                    _ => None,
                })
                .collect();
            Node::Product(fs.iter().map(lower).collect(), absorbers)
        }
        SmoothExpr::Pow(b, k) => Node::Pow(
            Box::new(lower(b)),
            (*k).clamp(i32::MIN as i64, i32::MAX as i64) as i32,
            *k,
        ),
        SmoothExpr::Apply(p, a) => Node::Apply(*p, Box::new(lower(a))),
    }
}

fn run(n: &Node, x: &[f64]) -> Result<f64, DomainError> {
    match n {
        Node::Const(c) => Ok(*c),
        Node::Var(i) => Ok(x[*i]),
        Node::Sum(ts) => ts.iter().try_fold(0.0, |acc, t| Ok(acc + run(t, x)?)),
        Node::Product(fs, absorbers) => {
            let mut acc = 1.0;
            let mut has_zero = false;
            for (f, absorber) in fs.iter().zip(absorbers) {
                match run(f, x) {
                    Ok(v) => {
                        has_zero |= v == 0.0;
                        acc *= v;
                    }
                    Err(err) => {
                        let absorbed = absorber.is_some_and(|j| match &fs[j] {
                            Node::Apply(_, u) => matches!(run(u, x), Ok(v) if v <= 0.0),
                            _ => false,
                        });
                        if !absorbed {
                            return Err(err);
                        }
                        has_zero = true;
                    }
                }
            }
            Ok(if has_zero { 0.0 } else { acc })
        }
        Node::Pow(b, k, exponent) => {
            let base = run(b, x)?;
            if base == 0.0 && *k < 0 {
                return Err(DomainError::PoleAtZero {
                    exponent: *exponent,
                });
            }
            Ok(base.powi(*k))
        }
        Node::Apply(p, a) => p.eval(run(a, x)?),
    }
}
