//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr     := ['+' | '-'] term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ['^' exponent]
//! atom     := integer ['/' integer] | variable | '(' expr ')'
//! variable := 'x' | 'y' | 't' | 'M'
//! ```
//!
//! Coefficients are exact: decimal literals are rejected, and so is implicit
//! multiplication such as `2x`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{MultiPoly, Rational, Var};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Dot,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().unwrap())));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'.' => Tok::Dot,
            _ => {
                return Err(Error::Syntax {
                    position: i,
                    message: format!("unexpected character {:?}", text[i..].chars().next().unwrap()),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                -self.term()?
            }
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc * self.factor()?;
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    return self.err("implicit multiplication; write '*' between factors");
                }
                Some(Tok::Slash) => {
                    return self.err("division is only allowed inside a fraction literal");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        match self.peek() {
            Some(Tok::Minus) => return self.err("negative exponent"),
            Some(Tok::Int(_)) => {}
            _ => return self.err("expected a non-negative integer exponent"),
        }
        let Some(Tok::Int(n)) = self.bump() else {
            unreachable!()
        };
        if matches!(self.peek(), Some(Tok::Dot) | Some(Tok::Slash)) {
            return self.err("fractional exponent");
        }
        let n: u32 = match u32::try_from(&n) {
            Ok(n) if n <= 10_000 => n,
            _ => return self.err("exponent too large"),
        };
        Ok(base.pow(n))
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek().cloned() {
            Some(Tok::Int(num)) => {
                self.bump();
                if self.peek() == Some(&Tok::Dot) {
                    return self.err("decimal literals are not exact; use a fraction");
                }
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let Some(Tok::Int(den)) = self.peek().cloned() else {
                        return self.err("expected an integer denominator");
                    };
                    if den.is_zero() {
                        return self.err("zero denominator");
                    }
                    self.bump();
                    if self.peek() == Some(&Tok::Dot) {
                        return self.err("decimal literals are not exact; use a fraction");
                    }
                    return Ok(MultiPoly::constant(Rational::new(num, den)));
                }
                Ok(MultiPoly::constant(Rational::from_integer(num)))
            }
            Some(Tok::Ident(name)) => match Var::from_name(&name) {
                Some(v) => {
                    self.bump();
                    Ok(MultiPoly::var(v))
                }
                None => self.err(format!("unknown variable '{name}'")),
            },
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Some(Tok::Dot) => self.err("decimal literals are not exact; use a fraction"),
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a polynomial in `x`, `y`, `t`, `M`.
pub fn parse_poly(text: &str) -> Result<MultiPoly> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syntax_error(text: &str) -> String {
        match parse_poly(text) {
            Err(Error::Syntax { message, .. }) => message,
            other => panic!("expected syntax error for {text:?}, got {other:?}"),
        }
    }

    #[test]
    fn nine_root_first_equation() {
        let p = parse_poly("-2*x^3+y^3+t*x+t*y+y+2").unwrap();
        assert_eq!(p.to_string(), "-2*x^3 + y^3 + t*x + t*y + y + 2");
        assert_eq!(p.num_terms(), 6);
    }

    #[test]
    fn zero_and_fractions() {
        assert!(parse_poly("0").unwrap().is_zero());
        let p = parse_poly("-4/17*x + 1/2").unwrap();
        assert_eq!(p.to_string(), "-4/17*x + 1/2");
    }

    #[test]
    fn grouping() {
        let p = parse_poly("(x+1)*(x-1)").unwrap();
        assert_eq!(p, parse_poly("x^2-1").unwrap());
        assert_eq!(parse_poly("(x+y)^2").unwrap(), parse_poly("x^2+2*x*y+y^2").unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(syntax_error("x^-1").contains("negative exponent"));
        assert!(syntax_error("x^1/2").contains("fractional"));
        assert!(syntax_error("2x").contains("implicit"));
        assert!(syntax_error("1.5*x").contains("decimal"));
        assert!(syntax_error("z + 1").contains("unknown variable"));
        assert!(syntax_error("x/2").contains("division"));
        assert!(syntax_error("(x+1").contains("')'"));
        assert!(syntax_error("x +").contains("end of input"));
    }

    #[test]
    fn error_positions_point_at_offender() {
        match parse_poly("x + 2q") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 5),
            other => panic!("{other:?}"),
        }
    }
}
