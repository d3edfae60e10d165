//! Deterministic text form of polynomials and exponential sums. Output
//! reparses to the same value: numbers use the shortest decimal that
//! round-trips the underlying `f64`.

use crate::algebra::{ComplexScalar, ExpSum, MultiIndex, SparsePoly, ONE};

pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Standalone complex constant: `1.5`, `-2*i`, `(1 + 2*i)`.
pub fn format_complex(c: ComplexScalar) -> String {
    let (neg, body) = signed_constant(c);
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Splits a constant into a sign and an unsigned body. General complex
/// values keep their signs inside parentheses.
fn signed_constant(c: ComplexScalar) -> (bool, String) {
    if c.im == 0.0 {
        (c.re < 0.0, format_real(c.re.abs()))
    } else if c.re == 0.0 {
        let b = c.im.abs();
        let body = if b == 1.0 {
            "i".to_string()
        } else {
            format!("{}*i", format_real(b))
        };
        (c.im < 0.0, body)
    } else {
        let op = if c.im < 0.0 { '-' } else { '+' };
        (
            false,
            format!("({} {op} {}*i)", format_real(c.re), format_real(c.im.abs())),
        )
    }
}

fn format_monomial(idx: &MultiIndex) -> String {
    idx.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(j, &e)| {
            if e == 1 {
                format!("z{}", j + 1)
            } else {
                format!("z{}^{e}", j + 1)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// One polynomial term as (negative, unsigned text).
fn signed_term(idx: &MultiIndex, c: ComplexScalar) -> (bool, String) {
    if idx.is_zero() {
        return signed_constant(c);
    }
    let mono = format_monomial(idx);
    let (neg, body) = signed_constant(c);
    if body == "1" {
        (neg, mono)
    } else {
        (neg, format!("{body}*{mono}"))
    }
}

fn join(parts: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (k, (neg, body)) in parts.into_iter().enumerate() {
        match (k, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Terms in descending graded-lex order.
pub fn print_poly(p: &SparsePoly) -> String {
    join(p.terms().rev().map(|(k, &c)| signed_term(k, c)))
}

pub fn print_expr(x: &ExpSum) -> String {
    join(x.terms().iter().flat_map(|t| {
        if t.exponent.is_zero() {
            return t
                .coeff
                .terms()
                .rev()
                .map(|(k, &c)| signed_term(k, c))
                .collect::<Vec<_>>();
        }
        let e = format!("exp({})", print_poly(&t.exponent));
        let part = if t.coeff.len() == 1 {
            let (k, &c) = t.coeff.terms().next().expect("one term");
            if k.is_zero() && c == ONE {
                (false, e)
            } else if k.is_zero() && c == -ONE {
                (true, e)
            } else {
                let (neg, body) = signed_term(k, c);
                (neg, format!("{body}*{e}"))
            }
        } else {
            (false, format!("({})*{e}", print_poly(&t.coeff)))
        };
        vec![part]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::cplx;
    use crate::parser::parse_expr;

    #[test]
    fn literals() {
        assert_eq!(format_complex(cplx(0.0, -1.25)), "-1.25*i");
        assert_eq!(format_complex(cplx(0.0, 1.0)), "i");
        assert_eq!(format_complex(cplx(1.0, -2.0)), "(1 - 2*i)");
        assert_eq!(format_real(1e-7), "1e-7");
        assert_eq!(format_real(2.5e20), "2.5e20");
        assert_eq!(print_expr(&ExpSum::zero(2)), "0");
    }

    #[test]
    fn polynomial_and_sum_layout() {
        let x = parse_expr(
            "2*z1^2*z2 - z2 + 3 + (1+i)*exp(z1) - exp(2*z2) + (z1 - 1)*exp(z1 + z2)",
            2,
        )
        .unwrap();
        let s = print_expr(&x);
        assert_eq!(
            s,
            "(z1 - 1)*exp(z1 + z2) + (1 + 1*i)*exp(z1) - exp(2*z2) + 2*z1^2*z2 - z2 + 3"
        );
        assert_eq!(parse_expr(&s, 2).unwrap(), x);
    }

    #[test]
    fn negative_imaginary_constant_round_trips() {
        let x = ExpSum::constant(1, cplx(0.0, -1.25));
        let s = print_expr(&x);
        assert_eq!(s, "-1.25*i");
        assert_eq!(parse_expr(&s, 1).unwrap(), x);
    }
}
