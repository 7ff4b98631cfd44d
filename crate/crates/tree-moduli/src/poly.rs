//! Sparse multivariate polynomials over a [`Scalar`], with the small
//! expression grammar used by the family JSON format.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors, so iteration
//! order (and hence printing) is deterministic.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

/// Arity mismatch between a polynomial (or family) and a point.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("arity mismatch: expected {expected} variables, got {got}")]
pub struct ArityError {
    pub expected: usize,
    pub got: usize,
}

/// Failure to parse a polynomial expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

/// A polynomial in `variable_count` variables `t0..t{m-1}`.
///
/// Zero coefficients are never stored; every exponent vector has length
/// `variable_count`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly<S> {
    variable_count: usize,
    terms: BTreeMap<Vec<u32>, S>,
}

impl<S: Scalar> MultiPoly<S> {
    pub fn zero(variable_count: usize) -> Self {
        MultiPoly {
            variable_count,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(variable_count: usize, c: S) -> Self {
        let mut p = Self::zero(variable_count);
        if !c.is_zero() {
            p.terms.insert(vec![0; variable_count], c);
        }
        p
    }

    pub fn one(variable_count: usize) -> Self {
        Self::constant(variable_count, S::one())
    }

    /// The variable `t{index}`.
    pub fn var(variable_count: usize, index: usize) -> Self {
        assert!(index < variable_count, "variable index out of range");
        let mut exps = vec![0; variable_count];
        exps[index] = 1;
        let mut p = Self::zero(variable_count);
        p.terms.insert(exps, S::one());
        p
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &S)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, coefficient: S) {
        assert_eq!(exponents.len(), self.variable_count, "exponent arity");
        if coefficient.is_zero() {
            return;
        }
        match self.terms.entry(exponents) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coefficient;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.variable_count, other.variable_count, "variable count");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.variable_count);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.variable_count, other.variable_count, "variable count");
        let mut out = Self::zero(self.variable_count);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(exps, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut out = Self::one(self.variable_count);
        for _ in 0..exponent {
            out = out.mul(self);
        }
        out
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = Self::zero(self.variable_count);
        for (e, c) in &self.terms {
            let v = c.clone() * factor.clone();
            if !v.is_zero() {
                out.terms.insert(e.clone(), v);
            }
        }
        out
    }

    /// Exact evaluation at a point.
    pub fn evaluate(&self, point: &[S]) -> Result<S, ArityError> {
        if point.len() != self.variable_count {
            return Err(ArityError {
                expected: self.variable_count,
                got: point.len(),
            });
        }
        let mut total = S::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (value, &e) in point.iter().zip(exps) {
                for _ in 0..e {
                    term = term * value.clone();
                }
            }
            total = total + term;
        }
        Ok(total)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Parses the expression grammar: integer and `p/q` literals, variables
    /// `t0..t{m-1}`, operators `+ - * ^`, unary minus and parentheses.
    pub fn parse(input: &str, variable_count: usize) -> Result<Self, ParseError> {
        Parser::new(input, variable_count)?.parse_all()
    }
}

impl<S: Scalar> fmt::Display for MultiPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exps, coeff)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let monomial: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        format!("t{v}")
                    } else {
                        format!("t{v}^{e}")
                    }
                })
                .collect();
            if monomial.is_empty() {
                write!(f, "{coeff}")?;
            } else if coeff.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{}*{}", coeff, monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(i64, i64), // numerator, denominator
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

struct Parser<S> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    variable_count: usize,
    len: usize,
    _marker: std::marker::PhantomData<S>,
}

impl<S: Scalar> Parser<S> {
    fn new(input: &str, variable_count: usize) -> Result<Self, ParseError> {
        let tokens = tokenize(input, variable_count)?;
        Ok(Parser {
            tokens,
            pos: 0,
            variable_count,
            len: input.len(),
            _marker: std::marker::PhantomData,
        })
    }

    fn parse_all(mut self) -> Result<MultiPoly<S>, ParseError> {
        let p = self.expression()?;
        if let Some((off, tok)) = self.tokens.get(self.pos) {
            return Err(ParseError {
                offset: *off,
                message: format!("unexpected trailing token {tok:?}"),
            });
        }
        Ok(p)
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn bump(&mut self) -> Option<(usize, Token)> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expression(&mut self) -> Result<MultiPoly<S>, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly<S>, ParseError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly<S>, ParseError> {
        let base = self.primary()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.pos += 1;
            match self.bump() {
                Some((_, Token::Number(n, 1))) if n >= 0 => {
                    let exp = u32::try_from(n).map_err(|_| ParseError {
                        offset: self.len,
                        message: "exponent too large".into(),
                    })?;
                    return Ok(base.pow(exp));
                }
                other => {
                    let offset = other.as_ref().map_or(self.len, |(o, _)| *o);
                    return Err(ParseError {
                        offset,
                        message: "exponent must be a nonnegative integer".into(),
                    });
                }
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<MultiPoly<S>, ParseError> {
        match self.bump() {
            Some((_, Token::Number(n, d))) => Ok(MultiPoly::constant(
                self.variable_count,
                S::from_int(n) / S::from_int(d),
            )),
            Some((_, Token::Var(i))) => Ok(MultiPoly::var(self.variable_count, i)),
            Some((_, Token::Minus)) => Ok(self.factor()?.neg()),
            Some((_, Token::Open)) => {
                let inner = self.expression()?;
                match self.bump() {
                    Some((_, Token::Close)) => Ok(inner),
                    other => Err(ParseError {
                        offset: other.as_ref().map_or(self.len, |(o, _)| *o),
                        message: "expected ')'".into(),
                    }),
                }
            }
            Some((off, tok)) => Err(ParseError {
                offset: off,
                message: format!("unexpected token {tok:?}"),
            }),
            None => Err(ParseError {
                offset: self.len,
                message: "unexpected end of input".into(),
            }),
        }
    }
}

fn tokenize(input: &str, variable_count: usize) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                tokens.push((i, Token::Plus));
                i += 1;
            }
            b'-' => {
                tokens.push((i, Token::Minus));
                i += 1;
            }
            b'*' => {
                tokens.push((i, Token::Star));
                i += 1;
            }
            b'^' => {
                tokens.push((i, Token::Caret));
                i += 1;
            }
            b'(' => {
                tokens.push((i, Token::Open));
                i += 1;
            }
            b')' => {
                tokens.push((i, Token::Close));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let numerator = parse_int(input, start, i)?;
                let mut denominator = 1;
                if i < bytes.len() && bytes[i] == b'/' {
                    let slash = i;
                    i += 1;
                    let dstart = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if dstart == i {
                        return Err(ParseError {
                            offset: slash,
                            message: "expected digits after '/'".into(),
                        });
                    }
                    denominator = parse_int(input, dstart, i)?;
                    if denominator == 0 {
                        return Err(ParseError {
                            offset: dstart,
                            message: "zero denominator".into(),
                        });
                    }
                }
                tokens.push((start, Token::Number(numerator, denominator)));
            }
            b't' => {
                let start = i;
                i += 1;
                let dstart = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if dstart == i {
                    return Err(ParseError {
                        offset: start,
                        message: "expected variable index after 't'".into(),
                    });
                }
                let index = parse_int(input, dstart, i)? as usize;
                if index >= variable_count {
                    return Err(ParseError {
                        offset: start,
                        message: format!(
                            "variable t{index} out of range for {variable_count} parameters"
                        ),
                    });
                }
                tokens.push((start, Token::Var(index)));
            }
            _ => {
                return Err(ParseError {
                    offset: i,
                    message: format!("unexpected character {:?}", input[i..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(tokens)
}

fn parse_int(input: &str, start: usize, end: usize) -> Result<i64, ParseError> {
    input[start..end].parse::<i64>().map_err(|_| ParseError {
        offset: start,
        message: "integer literal out of range".into(),
    })
}
