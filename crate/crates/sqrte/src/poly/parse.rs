//! Parser for the polynomial text grammar.
//!
//! Coefficients are integers or rationals (`3/2`), variables are
//! identifiers, operators are `+ - * ^` plus parentheses. Juxtaposition
//! (`2x`, `x y`) is rejected. The grammar round-trips with
//! `MultiPoly::fmt`.

use super::{MultiPoly, PolyError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Tok)>, PolyError> {
        let mut lx = Lexer { src: src.as_bytes(), pos: 0 };
        let mut out = Vec::new();
        loop {
            lx.skip_ws();
            if lx.pos >= lx.src.len() {
                return Ok(out);
            }
            let start = lx.pos;
            let c = lx.src[lx.pos];
            let tok = match c {
                b'+' => {
                    lx.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lx.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    lx.pos += 1;
                    Tok::Star
                }
                b'^' => {
                    lx.pos += 1;
                    Tok::Caret
                }
                b'/' => {
                    lx.pos += 1;
                    Tok::Slash
                }
                b'(' => {
                    lx.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lx.pos += 1;
                    Tok::RParen
                }
                b'0'..=b'9' => {
                    let mut end = lx.pos;
                    while end < lx.src.len() && lx.src[end].is_ascii_digit() {
                        end += 1;
                    }
                    let text = std::str::from_utf8(&lx.src[lx.pos..end]).unwrap();
                    lx.pos = end;
                    Tok::Int(text.parse().unwrap())
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let mut end = lx.pos;
                    while end < lx.src.len()
                        && (lx.src[end].is_ascii_alphanumeric() || lx.src[end] == b'_')
                    {
                        end += 1;
                    }
                    let text = std::str::from_utf8(&lx.src[lx.pos..end]).unwrap();
                    lx.pos = end;
                    Tok::Ident(text.to_string())
                }
                other => {
                    return Err(PolyError::Parse {
                        offset: start,
                        message: format!("unexpected character `{}`", other as char),
                    })
                }
            };
            out.push((start, tok));
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    vars: &'a [String],
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.idx).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(_, t)| t.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse { offset: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, PolyError> {
        let mut acc = self.unary()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly, PolyError> {
        let mut negate = false;
        while matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            negate = !negate;
        }
        let p = self.primary()?;
        Ok(if negate { p.neg() } else { p })
    }

    fn exponent(&mut self) -> Result<u32, PolyError> {
        match self.bump() {
            Some(Tok::Int(n)) => u32::try_from(&n)
                .map_err(|_| PolyError::Parse {
                    offset: self.offset(),
                    message: "exponent too large".into(),
                }),
            _ => self.err("expected integer exponent after `^`"),
        }
    }

    fn primary(&mut self) -> Result<MultiPoly, PolyError> {
        match self.bump() {
            Some(Tok::Int(n)) => {
                // optional `/ denom` forms a rational literal
                let mut value = BigRational::from_integer(n);
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            value /= BigRational::from_integer(d);
                        }
                        Some(Tok::Int(_)) => return self.err("zero denominator"),
                        _ => return self.err("expected integer denominator"),
                    }
                }
                Ok(MultiPoly::constant(self.vars, value))
            }
            Some(Tok::Ident(name)) => {
                let base = MultiPoly::var(self.vars, &name)?;
                if matches!(self.peek(), Some(Tok::Caret)) {
                    self.bump();
                    let e = self.exponent()?;
                    Ok(base.pow(e))
                } else {
                    Ok(base)
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => {}
                    _ => return self.err("expected `)`"),
                }
                if matches!(self.peek(), Some(Tok::Caret)) {
                    self.bump();
                    let e = self.exponent()?;
                    Ok(inner.pow(e))
                } else {
                    Ok(inner)
                }
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_poly(vars: &[String], src: &str) -> Result<MultiPoly, PolyError> {
    let toks = Lexer::tokens(src)?;
    let mut parser = Parser { toks, idx: 0, vars, end: src.len() };
    let p = parser.expr()?;
    if parser.idx != parser.toks.len() {
        return parser.err("trailing input (juxtaposition is not allowed)");
    }
    Ok(p)
}
