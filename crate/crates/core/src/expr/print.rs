use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::SmoothExpr;

// Canonical text form. Sums and products are always parenthesized; powers
// are written `base^k` with a parenthesized base unless the base is atomic;
// primitive arguments drop their own outer parentheses.

impl fmt::Display for SmoothExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, f, true)
    }
}

fn write_expr(e: &SmoothExpr, out: &mut impl Write, parens: bool) -> fmt::Result {
    match e {
        SmoothExpr::Const(c) => {
            if c.denom().is_one() {
                write!(out, "{}", c.numer())
            } else {
                write!(out, "{}/{}", c.numer(), c.denom())
            }
        }
        SmoothExpr::Var(i) => write!(out, "x{i}"),
        SmoothExpr::Sum(ts) => write_joined(ts, " + ", out, parens),
        SmoothExpr::Product(fs) => write_joined(fs, "*", out, parens),
        SmoothExpr::Pow(b, k) => {
            let atomic = match &**b {
                SmoothExpr::Var(_) | SmoothExpr::Apply(..) => true,
                SmoothExpr::Const(c) => c.denom().is_one() && !c.is_negative(),
                SmoothExpr::Sum(_) | SmoothExpr::Product(_) => true,
                SmoothExpr::Pow(..) => false,
            };
            if atomic {
                write_expr(b, out, true)?;
            } else {
                out.write_char('(')?;
                write_expr(b, out, true)?;
                out.write_char(')')?;
            }
            write!(out, "^{k}")
        }
        SmoothExpr::Apply(p, a) => {
            write!(out, "{}(", p.name())?;
            write_expr(a, out, false)?;
            out.write_char(')')
        }
    }
}

fn write_joined(xs: &[SmoothExpr], sep: &str, out: &mut impl Write, parens: bool) -> fmt::Result {
    if parens {
        out.write_char('(')?;
    }
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.write_str(sep)?;
        }
        write_expr(x, out, true)?;
    }
    if parens {
        out.write_char(')')?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use crate::expr::parse;

    #[test]
    fn golden_forms() {
        let cases = [
            ("x0^2 + x1^2 - 1", "(-1 + x0^2 + x1^2)"),
            ("exp(x0)*sin(x1)", "(exp(x0)*sin(x1))"),
            ("x0 + (x0 + x0)", "(3*x0)"),
            ("x0/2 - x1", "((-1*x1) + (1/2*x0))"),
            ("exp(x0 + x1)", "exp(x0 + x1)"),
            ("1/(1 + x0)", "(1 + x0)^-1"),
            ("sqrt(x0)*x0^-3", "(x0^-3*sqrt(x0))"),
            ("-0.25", "-1/4"),
            ("0^-2", "0^-2"),
            ("invexp(1 - x0^2)", "invexp(1 + (-1*x0^2))"),
        ];
        for (input, printed) in cases {
            let e = parse(input).unwrap();
            assert_eq!(e.to_string(), printed, "printing {input}");
            assert_eq!(parse(printed).unwrap(), e, "re-parsing {printed}");
        }
    }
}
