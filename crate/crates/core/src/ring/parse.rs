//! Polynomial expression parser.
//!
//! Grammar: sums of products of powers; products may be written with `*` or
//! by juxtaposition (`s^3 t`), rational constants as `3/2`.

use num_bigint::BigInt;

use super::field::Field;
use super::poly::{Poly, PolyRing};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Num(s.parse().expect("digits")), col));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(Error::Parse {
                    line,
                    column: col,
                    message: format!("unexpected character '{c}'"),
                })
            }
        };
        out.push((t, col));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    ring: &'a PolyRing<F>,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<F: Field> Parser<'_, F> {
    fn err(&self, message: impl Into<String>) -> Error {
        let column = self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col);
        Error::Parse {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn expr(&mut self) -> Result<Poly<F>> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.add(&acc, &t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.ring.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly<F>> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.unary()?;
                    acc = self.ring.mul(&acc, &f);
                }
                Some(Tok::Ident(_)) | Some(Tok::Num(_)) | Some(Tok::LParen) => {
                    let f = self.power()?;
                    acc = self.ring.mul(&acc, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly<F>> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                let f = self.unary()?;
                Ok(self.ring.neg(&f))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly<F>> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    let e: u64 = n
                        .try_into()
                        .map_err(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    return Ok(self.ring.pow(&base, e));
                }
                _ => return Err(self.err("expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly<F>> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut den = BigInt::from(1);
                if let (Some(Tok::Slash), Some(Tok::Num(d))) = (
                    self.toks.get(self.pos).map(|t| &t.0),
                    self.toks.get(self.pos + 1).map(|t| &t.0),
                ) {
                    den = d.clone();
                    self.pos += 2;
                }
                let c = self.ring.field().from_ratio(&n, &den).map_err(|e| self.err(e.to_string()))?;
                Ok(self.ring.constant(c))
            }
            Some(Tok::Ident(name)) => {
                let v = self
                    .ring
                    .var_by_name(&name)
                    .map_err(|_| self.err(format!("unknown variable '{name}'")))?;
                self.pos += 1;
                Ok(v)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(self.err("expected ')'")),
                }
            }
            Some(t) => Err(self.err(format!("unexpected token {t:?}"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Parses `src`; `line` and `col0` locate it inside an enclosing file (1-based).
pub fn parse_polynomial_at<F: Field>(
    ring: &PolyRing<F>,
    src: &str,
    line: usize,
    col0: usize,
) -> Result<Poly<F>> {
    let toks = lex(src, line, col0)?;
    let mut p = Parser {
        ring,
        toks,
        pos: 0,
        line,
        end_col: col0 + src.chars().count(),
    };
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(f)
}

pub fn parse_polynomial<F: Field>(ring: &PolyRing<F>, src: &str) -> Result<Poly<F>> {
    parse_polynomial_at(ring, src, 1, 1)
}
