//! Text grammar for parameter polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | symbol | '(' expr ')'
//! symbol := [a-z]+
//! ```
//!
//! Whitespace is ignored. Division is only allowed by nonzero constants, so
//! `p/q` literals and `(1/1764)*(...)` both work.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::{ParamPoly, Symbols};
use super::rational::rat_int;
use super::ExactError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("parse error at line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(BigInt),
    Sym(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Sym(s) => {
                out.insert(s.clone());
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_symbols(out),
        }
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        self.collect_symbols(&mut s);
        s
    }

    /// Evaluates the expression as a polynomial over `symbols`.
    pub fn to_poly(&self, symbols: &Symbols) -> Result<ParamPoly, ExactError> {
        Ok(match self {
            Expr::Num(n) => ParamPoly::constant(symbols, rat_int(n.clone())),
            Expr::Sym(s) => ParamPoly::var(symbols, s)?,
            Expr::Add(a, b) => a.to_poly(symbols)? + b.to_poly(symbols)?,
            Expr::Sub(a, b) => a.to_poly(symbols)? - b.to_poly(symbols)?,
            Expr::Mul(a, b) => a.to_poly(symbols)? * b.to_poly(symbols)?,
            Expr::Div(a, b) => {
                let d = b
                    .to_poly(symbols)?
                    .constant_value()
                    .ok_or(ExactError::NonConstantDivisor)?;
                if d.is_zero() {
                    return Err(ExactError::DivisionByZero);
                }
                a.to_poly(symbols)?.scale(&d.recip())
            }
            Expr::Neg(a) => -a.to_poly(symbols)?,
            Expr::Pow(a, e) => a.to_poly(symbols)?.pow(*e),
        })
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col0: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.col0 + self.pos + 1, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == b'+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if c == b'*' {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected integer exponent after `^`"));
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let e: u32 = text.parse().map_err(|_| self.err("exponent too large"))?;
            if e > u16::MAX as u32 {
                return Err(self.err("exponent too large"));
            }
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Expr::Num(text.parse().unwrap()))
            }
            Some(c) if c.is_ascii_lowercase() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_lowercase() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Expr::Sym(text.to_string()))
            }
            Some(c) => Err(self.err(format!("unexpected character `{}`", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses an expression; `line`/`column` locate `src` inside a larger input
/// (1-based line, 0-based column offset) for error messages.
pub fn parse_expr_at(src: &str, line: usize, column: usize) -> Result<Expr, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, line, col0: column };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    parse_expr_at(src, 1, 0)
}

/// Parses a polynomial, using exactly the symbols it mentions.
pub fn parse_poly(src: &str) -> Result<ParamPoly, crate::Error> {
    let e = parse_expr(src)?;
    let syms = Symbols::new(e.symbols());
    Ok(e.to_poly(&syms)?)
}

/// Parses a polynomial over a given symbol list.
pub fn parse_poly_in(src: &str, symbols: &Symbols) -> Result<ParamPoly, crate::Error> {
    Ok(parse_expr(src)?.to_poly(symbols)?)
}
