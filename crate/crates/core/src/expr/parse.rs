//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?          -- right associative, integer exponent
//! atom   := number | 'x' digits | prim '(' expr ')' | '(' expr ')'
//! number := digits ('.' digits?)? | '.' digits      -- converted exactly
//! ```

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{simplify, Primitive, Rational, SmoothExpr};
use crate::{Error, Result};

/// Parse and canonicalize an expression.
pub fn parse(text: &str) -> Result<SmoothExpr> {
    parse_with_arity(text, None)
}

/// Parse, rejecting variables `x_i` with `i >= arity` when an arity is given.
pub fn parse_with_arity(text: &str, arity: Option<usize>) -> Result<SmoothExpr> {
    let mut p = Parser {
        src: text,
        pos: 0,
        arity,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(simplify(&e))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    arity: Option<usize>,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SmoothExpr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                let t = self.term()?;
                terms.push(SmoothExpr::Product(vec![SmoothExpr::int(-1), t]));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            SmoothExpr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<SmoothExpr> {
        let mut factors = vec![self.unary()?];
        loop {
            if self.eat('*') {
                factors.push(self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                factors.push(SmoothExpr::Pow(Box::new(d), -1));
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            SmoothExpr::Product(factors)
        })
    }

    fn unary(&mut self) -> Result<SmoothExpr> {
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(SmoothExpr::Product(vec![SmoothExpr::int(-1), inner]));
        }
        self.power()
    }

    fn power(&mut self) -> Result<SmoothExpr> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let at = self.pos;
            let exponent = simplify(&self.unary()?);
            let k = match &exponent {
                SmoothExpr::Const(c) if c.is_integer() => c.numer().to_i64(),
                _ => None,
            };
            return match k {
                Some(k) => Ok(SmoothExpr::Pow(Box::new(base), k)),
                None => Err(Error::Syntax {
                    offset: at,
                    message: "exponent must be an integer".into(),
                }),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<SmoothExpr> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let ident = self.ident();
                if let Some(index) = variable_index(ident) {
                    if let Some(arity) = self.arity {
                        if index >= arity {
                            return Err(Error::VariableOutOfRange { index, arity });
                        }
                    }
                    return Ok(SmoothExpr::Var(index));
                }
                self.skip_ws();
                if self.peek() == Some('(') {
                    let prim =
                        Primitive::from_name(ident).ok_or_else(|| Error::UnknownPrimitive {
                            name: ident.to_string(),
                            offset: start,
                        })?;
                    self.pos += 1;
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return Err(self.error("expected `)` after primitive argument"));
                    }
                    Ok(SmoothExpr::Apply(prim, Box::new(arg)))
                } else {
                    Err(Error::Syntax {
                        offset: start,
                        message: format!("unknown identifier `{ident}`"),
                    })
                }
            }
            Some(c) => Err(self.error(&format!("unexpected character `{c}`"))),
        }
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<SmoothExpr> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        let int_part = &self.src[start..end];
        let mut frac_part = "";
        if end < bytes.len() && bytes[end] == b'.' {
            let frac_start = end + 1;
            end = frac_start;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            frac_part = &self.src[frac_start..end];
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(self.error("malformed number"));
        }
        self.pos = end;
        let digits = format!("{int_part}{frac_part}");
        let numer: BigInt = digits.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: "malformed number".into(),
        })?;
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        debug_assert!(!denom.is_zero());
        Ok(SmoothExpr::Const(Rational::new(numer, denom)))
    }
}

fn variable_index(ident: &str) -> Option<usize> {
    let digits = ident.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}
