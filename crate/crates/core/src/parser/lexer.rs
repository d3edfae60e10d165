use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Eof,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Splits `text` into tokens. `line` and `col` give the position of the
/// first character so errors point into the enclosing file.
pub(crate) fn tokenize(text: &str, line: usize, col: usize) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut pos = 0;
    let (mut ln, mut cl) = (line, col);
    let err = |ln, cl, msg: String| Error::Parse {
        line: ln,
        col: cl,
        msg,
    };
    while pos < chars.len() {
        let ch = chars[pos];
        if ch == '\n' {
            pos += 1;
            ln += 1;
            cl = 1;
            continue;
        }
        if ch.is_whitespace() {
            pos += 1;
            cl += 1;
            continue;
        }
        let start_col = cl;
        let simple = match ch {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token {
                tok,
                line: ln,
                col: start_col,
            });
            pos += 1;
            cl += 1;
            continue;
        }
        if ch.is_ascii_digit() || ch == '.' {
            let begin = pos;
            while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '.') {
                pos += 1;
            }
            if pos < chars.len() && (chars[pos] == 'e' || chars[pos] == 'E') {
                let save = pos;
                pos += 1;
                if pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
                    pos += 1;
                }
                if pos < chars.len() && chars[pos].is_ascii_digit() {
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                } else {
                    pos = save;
                }
            }
            let lexeme: String = chars[begin..pos].iter().collect();
            let value: f64 = lexeme
                .parse()
                .map_err(|_| err(ln, start_col, format!("malformed number `{lexeme}`")))?;
            out.push(Token {
                tok: Tok::Num(value),
                line: ln,
                col: start_col,
            });
            cl += pos - begin;
            continue;
        }
        if ch.is_alphabetic() || ch == '_' {
            let begin = pos;
            while pos < chars.len() && (chars[pos].is_alphanumeric() || chars[pos] == '_') {
                pos += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[begin..pos].iter().collect()),
                line: ln,
                col: start_col,
            });
            cl += pos - begin;
            continue;
        }
        return Err(err(ln, start_col, format!("unexpected character `{ch}`")));
    }
    out.push(Token {
        tok: Tok::Eof,
        line: ln,
        col: cl,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_positions() {
        let t = tokenize("1.5e-3*z2\n + x", 4, 3).unwrap();
        assert_eq!(t[0].tok, Tok::Num(1.5e-3));
        assert_eq!(t[2].tok, Tok::Ident("z2".into()));
        assert_eq!((t[3].line, t[3].col), (5, 2));
        assert!(tokenize("2 $ 3", 1, 1).is_err());
    }

    #[test]
    fn exponent_marker_without_digits_is_not_consumed() {
        let t = tokenize("2e", 1, 1).unwrap();
        assert_eq!(t[0].tok, Tok::Num(2.0));
        assert_eq!(t[1].tok, Tok::Ident("e".into()));
    }
}
