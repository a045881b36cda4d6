use num_traits::Zero;

use super::simplify::{make_product, make_sum};
use super::{simplify, SmoothExpr};
use crate::poly::Polynomial;
use crate::{Error, Result};

impl SmoothExpr {
    /// Exact partial derivative with respect to `x_var`, in canonical form.
    pub fn differentiate(&self, var: usize) -> SmoothExpr {
        simplify(&diff(self, var))
    }

    /// Replace `x_i` by `args[i]` and canonicalize. This is the operation
    /// `Φ_f(c_1, …, c_k)` on representatives.
    pub fn substitute(&self, args: &[SmoothExpr]) -> Result<SmoothExpr> {
        let needed = self.min_arity();
        if needed > args.len() {
            return Err(Error::ArityMismatch {
                expected: needed,
                found: args.len(),
            });
        }
        Ok(simplify(&self.map_vars(&|i| args[i].clone())))
    }

    /// Gradient as a vector of `arity` partial derivatives.
    pub fn gradient(&self, arity: usize) -> Vec<SmoothExpr> {
        (0..arity).map(|i| self.differentiate(i)).collect()
    }
}

fn diff(e: &SmoothExpr, var: usize) -> SmoothExpr {
    match e {
        SmoothExpr::Const(_) => SmoothExpr::zero(),
        SmoothExpr::Var(i) => {
            if *i == var {
                SmoothExpr::one()
            } else {
                SmoothExpr::zero()
            }
        }
        SmoothExpr::Sum(ts) => make_sum(ts.iter().map(|t| simplify(&diff(t, var))).collect()),
        SmoothExpr::Product(fs) => {
            let mut terms = Vec::with_capacity(fs.len());
            for (i, f) in fs.iter().enumerate() {
                let df = simplify(&diff(f, var));
                if df.is_zero() {
                    continue;
                }
                let mut factors: Vec<SmoothExpr> = Vec::with_capacity(fs.len());
                factors.push(df);
                factors.extend(
                    fs.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, g)| g.clone()),
                );
                terms.push(make_product(factors));
            }
            make_sum(terms)
        }
        SmoothExpr::Pow(b, k) => {
            let db = simplify(&diff(b, var));
            if db.is_zero() {
                return SmoothExpr::zero();
            }
            make_product(vec![
                SmoothExpr::int(*k),
                simplify(&SmoothExpr::Pow(b.clone(), k - 1)),
                db,
            ])
        }
        SmoothExpr::Apply(p, a) => {
            let da = simplify(&diff(a, var));
            if da.is_zero() {
                return SmoothExpr::zero();
            }
            make_product(vec![p.derivative(a), da])
        }
    }
}

/// Hadamard splitting of a polynomial `f` in `n` variables.
///
/// Returns `g_1, …, g_n` over `2n` variables, `x = (x_0..x_{n-1})` and
/// `y = (x_n..x_{2n-1})`, with `f(y) − f(x) = Σ (y_i − x_i)·g_i(x, y)` as
/// an exact polynomial identity. The telescoping replaces coordinates from
/// the front: `g_i` is the quotient of
/// `f(x_1..x_{i-1}, y_i, y_{i+1}..y_n) − f(x_1..x_{i-1}, x_i, y_{i+1}..y_n)`
/// by `y_i − x_i`.
pub fn hadamard_split(f: &SmoothExpr, n: usize) -> Result<Vec<SmoothExpr>> {
    f.check_arity(n)?;
    let poly = Polynomial::from_expr(f, n)?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Coefficients of f as a polynomial in x_i, with the other slots
        // already renamed into the 2n-variable ring.
        let mut g = Polynomial::zero(2 * n);
        for (mono, coef) in poly.terms() {
            let k = mono[i];
            if k == 0 || coef.is_zero() {
                continue;
            }
            let mut rest = vec![0u32; 2 * n];
            for (j, &e) in mono.iter().enumerate() {
                if j < i {
                    rest[j] = e;
                } else if j > i {
                    rest[n + j] = e;
                }
            }
            // (y^k − x^k)/(y − x) = Σ_{a+b=k−1} y^a x^b
            for a in 0..k {
                let mut m = rest.clone();
                m[n + i] += a;
                m[i] += k - 1 - a;
                g.add_term(m, coef.clone());
            }
        }
        out.push(g.to_expr());
    }
    Ok(out)
}

/// Largest relative discrepancy between central differences and the exact
/// symbolic gradient: `max_i |fd_i − ∂_i e| / (1 + |∂_i e|)`.
pub fn fd_gradient_check(e: &SmoothExpr, point: &[f64], h: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    let mut p = point.to_vec();
    for i in 0..point.len() {
        let exact = e.differentiate(i).evaluate(point)?;
        p[i] = point[i] + h;
        let up = e.evaluate(&p)?;
        p[i] = point[i] - h;
        let down = e.evaluate(&p)?;
        p[i] = point[i];
        let fd = (up - down) / (2.0 * h);
        worst = worst.max((fd - exact).abs() / (1.0 + exact.abs()));
    }
    Ok(worst)
}
