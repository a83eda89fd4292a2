//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace-insensitive, implicit multiplication rejected):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' INTEGER)?
//! atom   := NUMBER | IDENT | '(' expr ')'
//! NUMBER := digits ('.' digits)?
//! ```
//!
//! Decimals are converted to exact rationals; division is only allowed by a
//! nonzero constant.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::{Polynomial, Rational, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected {0}")]
    UnexpectedToken(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("negative exponent")]
    NegativeExponent,
    #[error("exponent must be a non-negative integer")]
    BadExponent,
    #[error("division by a non-constant or zero expression")]
    BadDivision,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("number `{n}`"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Op(c) => format!("`{c}`"),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|(_, d)| d.is_ascii_digit())) {
            let mut int_part = String::new();
            let mut frac_part = String::new();
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                int_part.push(chars[i].1);
                i += 1;
            }
            if i < chars.len() && chars[i].1 == '.' {
                i += 1;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    frac_part.push(chars[i].1);
                    i += 1;
                }
            }
            let digits = format!("{int_part}{frac_part}");
            let numer: BigInt = digits.parse().unwrap_or_else(|_| BigInt::zero());
            let denom = num_traits::pow(BigInt::from(10), frac_part.len());
            out.push((pos, Tok::Num(Rational::new(numer, denom))));
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                s.push(chars[i].1);
                i += 1;
            }
            out.push((pos, Tok::Ident(s)));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError { position: pos, kind: ParseErrorKind::UnexpectedChar(c) });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    ring: &'a Arc<Ring>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { position: self.pos(), kind }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Some(t) => self.err(ParseErrorKind::UnexpectedToken(describe(t))),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = &acc + &t;
            } else if self.eat('-') {
                let t = self.term()?;
                acc = &acc - &t;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let t = self.unary()?;
                acc = &acc * &t;
            } else if self.peek() == Some(&Tok::Op('/')) {
                let pos = self.pos();
                self.at += 1;
                let t = self.unary()?;
                let c = match t.terms() {
                    [(m, c)] if m.is_one() => c.clone(),
                    _ => return Err(ParseError { position: pos, kind: ParseErrorKind::BadDivision }),
                };
                acc = acc.scale(&c.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if self.eat('-') {
            let p = self.unary()?;
            Ok(-&p)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        if self.peek() == Some(&Tok::Op('-')) {
            return Err(self.err(ParseErrorKind::NegativeExponent));
        }
        let e = match self.peek() {
            Some(Tok::Num(n)) if n.is_integer() => n.to_integer(),
            Some(_) => return Err(self.err(ParseErrorKind::BadExponent)),
            None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
        };
        let e: u32 = u32::try_from(e).map_err(|_| self.err(ParseErrorKind::BadExponent))?;
        self.at += 1;
        if paren && !self.eat(')') {
            return Err(self.unexpected());
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(Polynomial::constant(self.ring, n))
            }
            Some(Tok::Ident(name)) => {
                let p = Polynomial::var(self.ring, &name)
                    .map_err(|_| self.err(ParseErrorKind::UnknownIdentifier(name.clone())))?;
                self.at += 1;
                Ok(p)
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let p = self.expr()?;
                if !self.eat(')') {
                    return Err(self.unexpected());
                }
                Ok(p)
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses `text` into a polynomial over `ring`. Every identifier must be a
/// symbol of the ring.
pub fn parse_polynomial(text: &str, ring: &Arc<Ring>) -> Result<Polynomial, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0, end: text.len(), ring };
    if p.peek().is_none() {
        return Err(p.err(ParseErrorKind::UnexpectedEnd));
    }
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.unexpected());
    }
    Ok(out)
}

/// Parses a rational literal such as `3`, `-1/2` or `0.25`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let ring = Ring::state::<&str>(&[], Default::default()).expect("empty ring");
    let p = parse_polynomial(text, &ring)?;
    Ok(p.leading_coefficient().cloned().unwrap_or_else(Rational::zero))
}
