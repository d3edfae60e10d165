//! Recursive-descent parser for exponential-sum expressions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' uint)?
//! atom  := number | 'i' | 'pi' | 'z'k | name | 'exp' '(' expr ')'
//!        | 'log' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `exp` takes a polynomial argument, `log` a positive real constant, and
//! division is only by non-zero constants, so every expression denotes an
//! exponential sum.

use std::collections::HashMap;

use super::lexer::{tokenize, Tok, Token};
use crate::algebra::{cplx, ComplexScalar, ExpSum, SparsePoly, I};
use crate::error::{Error, Result};

/// Named constants available to an expression (for example `B1` or `c1`).
pub type Bindings = HashMap<String, ComplexScalar>;

/// Largest integer power accepted by `^`.
const MAX_POWER: u64 = 64;

pub fn parse_expr(text: &str, dim: usize) -> Result<ExpSum> {
    parse_expr_with(text, dim, &Bindings::new())
}

pub fn parse_expr_with(text: &str, dim: usize, bindings: &Bindings) -> Result<ExpSum> {
    parse_expr_at(text, dim, bindings, 1, 1)
}

/// As [`parse_expr_with`], reporting errors relative to `(line, col)`.
pub fn parse_expr_at(
    text: &str,
    dim: usize,
    bindings: &Bindings,
    line: usize,
    col: usize,
) -> Result<ExpSum> {
    if dim == 0 {
        return Err(Error::params("dimension must be positive"));
    }
    let tokens = tokenize(text, line, col)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        dim,
        bindings,
    };
    let value = p.expr()?;
    p.expect_eof()?;
    Ok(value)
}

/// Parses an expression that must reduce to a polynomial.
pub fn parse_poly_with(text: &str, dim: usize, bindings: &Bindings) -> Result<SparsePoly> {
    parse_poly_at(text, dim, bindings, 1, 1)
}

pub fn parse_poly_at(
    text: &str,
    dim: usize,
    bindings: &Bindings,
    line: usize,
    col: usize,
) -> Result<SparsePoly> {
    let v = parse_expr_at(text, dim, bindings, line, col)?;
    as_poly(&v).ok_or_else(|| Error::Parse {
        line,
        col,
        msg: "expected a polynomial (no exp factors)".into(),
    })
}

/// Parses an expression that must reduce to a constant.
pub fn parse_constant_with(text: &str, bindings: &Bindings) -> Result<ComplexScalar> {
    parse_constant_at(text, bindings, 1, 1)
}

pub fn parse_constant_at(
    text: &str,
    bindings: &Bindings,
    line: usize,
    col: usize,
) -> Result<ComplexScalar> {
    // Constants are dimension-free; any variable reference fails with dim 1
    // unless it is z1, which `as_constant` then rejects.
    let v = parse_expr_at(text, 1, bindings, line, col)?;
    as_constant(&v).ok_or_else(|| Error::Parse {
        line,
        col,
        msg: "expected a constant".into(),
    })
}

pub(crate) fn as_poly(v: &ExpSum) -> Option<SparsePoly> {
    match v.terms() {
        [] => Some(SparsePoly::zero(v.dim())),
        [t] if t.exponent.is_zero() => Some(t.coeff.clone()),
        _ => None,
    }
}

pub(crate) fn as_constant(v: &ExpSum) -> Option<ComplexScalar> {
    let p = as_poly(v)?;
    if p.is_constant() {
        Some(p.constant_term())
    } else {
        None
    }
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    dim: usize,
    bindings: &'a Bindings,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.tokens[self.pos];
        (t.line, t.col)
    }

    fn error_at(&self, (line, col): (usize, usize), msg: impl Into<String>) -> Error {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        self.error_at(self.here(), msg)
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {}", describe(self.peek()))))
        }
    }

    fn expect_eof(&self) -> Result<()> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => Err(self.error(format!("unexpected {} after expression", describe(t)))),
        }
    }

    fn expr(&mut self) -> Result<ExpSum> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ExpSum> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.unary()?)?;
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.here();
                    let d = self.unary()?;
                    match as_constant(&d) {
                        Some(c) if c.norm() > 0.0 => acc = acc.scale(c.inv()),
                        Some(_) => return Err(self.error_at(at, "division by zero")),
                        None => {
                            return Err(self.error_at(at, "division is only allowed by a constant"))
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<ExpSum> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<ExpSum> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.here();
        let e = match self.bump() {
            Tok::Num(x) if x >= 0.0 && x.fract() == 0.0 && x <= MAX_POWER as f64 => x as u32,
            _ => {
                return Err(self.error_at(
                    at,
                    format!("exponent must be an integer between 0 and {MAX_POWER}"),
                ))
            }
        };
        let mut acc = ExpSum::constant(self.dim, cplx(1.0, 0.0));
        for _ in 0..e {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<ExpSum> {
        let at = self.here();
        match self.bump() {
            Tok::Num(x) => Ok(ExpSum::constant(self.dim, cplx(x, 0.0))),
            Tok::LParen => {
                let v = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(v)
            }
            Tok::Ident(name) => self.ident(&name, at),
            t => Err(self.error_at(at, format!("unexpected {}", describe(&t)))),
        }
    }

    fn ident(&mut self, name: &str, at: (usize, usize)) -> Result<ExpSum> {
        match name {
            "i" => return Ok(ExpSum::constant(self.dim, I)),
            "pi" => return Ok(ExpSum::constant(self.dim, cplx(std::f64::consts::PI, 0.0))),
            "exp" => {
                self.expect(Tok::LParen, "`(` after exp")?;
                let arg_at = self.here();
                let arg = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                let p = as_poly(&arg).ok_or_else(|| {
                    self.error_at(
                        arg_at,
                        "the argument of exp must be a polynomial; nested exp is outside \
                         the class of exponential sums",
                    )
                })?;
                return Ok(ExpSum::exp(p));
            }
            "log" => {
                self.expect(Tok::LParen, "`(` after log")?;
                let arg_at = self.here();
                let arg = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                return match as_constant(&arg) {
                    Some(c) if c.im == 0.0 && c.re > 0.0 => {
                        Ok(ExpSum::constant(self.dim, cplx(c.re.ln(), 0.0)))
                    }
                    _ => Err(self.error_at(arg_at, "log takes a positive real constant")),
                };
            }
            _ => {}
        }
        if let Some(v) = self.bindings.get(name) {
            return Ok(ExpSum::constant(self.dim, *v));
        }
        if let Some(idx) = name.strip_prefix('z').and_then(|s| s.parse::<usize>().ok()) {
            if idx == 0 || idx > self.dim {
                return Err(self.error_at(
                    at,
                    format!("variable z{idx} out of range for n={}", self.dim),
                ));
            }
            return Ok(ExpSum::from_poly(SparsePoly::var(self.dim, idx - 1)));
        }
        Err(self.error_at(at, format!("unknown name `{name}`")))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(x) => format!("number {x}"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Eof => "end of input".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ONE, ZERO};
    use std::f64::consts::PI;

    #[test]
    fn cancellation() {
        assert!(parse_expr("exp(z1) - exp(z1)", 2).unwrap().is_zero());
    }

    #[test]
    fn bound_constant_folds_into_coefficient() {
        let mut b = Bindings::new();
        b.insert("B".into(), cplx(0.0, 2.0 * PI));
        let v = parse_expr_with("(5/4) * exp((1/2)*(z1 + 2*z2 + B))", 2, &b).unwrap();
        assert_eq!(v.len(), 1);
        let t = &v.terms()[0];
        assert!((t.coeff.constant_term() - cplx(-1.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn precedence() {
        // -z1^2 is -(z1^2); 2*3^2 = 18
        let v = parse_expr("-z1^2 + 2*3^2", 1).unwrap();
        let z = [cplx(3.0, 0.0)];
        assert_eq!(v.evaluate(&z).unwrap(), cplx(9.0, 0.0));
    }

    #[test]
    fn log_and_pi() {
        let v = parse_constant_with("2*log(2) + pi*i/2", &Bindings::new()).unwrap();
        assert!((v - cplx(2.0 * 2f64.ln(), PI / 2.0)).norm() < 1e-15);
        assert!(parse_constant_with("log(-1)", &Bindings::new()).is_err());
        assert!(parse_constant_with("log(z1)", &Bindings::new()).is_err());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_expr("z1 +\n  exp(exp(z1))", 2) {
            Err(Error::Parse { line, col, msg }) => {
                assert_eq!((line, col), (2, 7));
                assert!(msg.contains("nested exp"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_expr("z3", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr("z1/z2", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr("(z1", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr("z1^-1", 2), Err(Error::Parse { .. })));
    }

    #[test]
    fn poly_and_constant_extraction() {
        let p = parse_poly_with("z1*z2 - 1", 2, &Bindings::new()).unwrap();
        assert_eq!(p.len(), 2);
        assert!(parse_poly_with("exp(z1)", 2, &Bindings::new()).is_err());
        assert_eq!(parse_constant_with("0", &Bindings::new()).unwrap(), ZERO);
        assert_eq!(
            parse_constant_with("exp(0)", &Bindings::new()).unwrap(),
            ONE
        );
    }
}
