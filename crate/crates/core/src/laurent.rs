//! Exact integer-coefficient Laurent polynomials in one variable `z`.
//!
//! The representation is canonical: only nonzero coefficients are stored, so
//! two polynomials are equal iff their term maps are equal. Coefficients are
//! arbitrary-precision, which keeps large state sums and Tait sums exact.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{Map as JsonMap, Value};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

/// Error from [`LaurentPoly::from_text`], with the byte offset of the problem.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// The variable `z`.
    pub fn variable() -> Self {
        Self::monomial(1, 1)
    }

    /// `z^-1 + z`, the value of a single vertex-free circle.
    pub fn loop_factor() -> Self {
        &Self::monomial(-1, 1) + &Self::monomial(1, 1)
    }

    pub fn monomial(exponent: i64, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::default();
        p.add_term(exponent, coeff.into());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponent: i64) -> BigInt {
        self.terms.get(&exponent).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    fn add_term(&mut self, exponent: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn negate(&self) -> Self {
        let mut out = Self::default();
        for (e, c) in &self.terms {
            out.terms.insert(*e, -c);
        }
        out
    }

    pub fn scale(&self, factor: impl Into<BigInt>) -> Self {
        let factor = factor.into();
        let mut out = Self::default();
        if factor.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(*e, c * &factor);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Sum of coefficients, i.e. the evaluation homomorphism at `z = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Canonical text form: ascending exponents, `z^k` with explicit sign on
    /// negative `k`, bare coefficient for exponent 0, `z` for exponent 1, and
    /// unit coefficients omitted. The zero polynomial renders as `0`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = c.magnitude();
            match *e {
                0 => out.push_str(&mag.to_string()),
                e => {
                    if !mag.is_one() {
                        out.push_str(&mag.to_string());
                    }
                    out.push('z');
                    if e != 1 {
                        out.push('^');
                        out.push_str(&e.to_string());
                    }
                }
            }
        }
        out
    }

    /// Parses the canonical text grammar emitted by [`to_text`](Self::to_text).
    pub fn from_text(input: &str) -> Result<Self, ParseError> {
        Parser { bytes: input.as_bytes(), pos: 0 }.parse()
    }

    /// JSON object form `{"exponent": coefficient}` with string keys.
    /// Coefficients that fit in an `i64` serialize as numbers, larger ones as
    /// decimal strings.
    pub fn to_json(&self) -> Value {
        let mut map = JsonMap::new();
        for (e, c) in &self.terms {
            let v = match i64::try_from(c) {
                Ok(n) => Value::from(n),
                Err(_) => Value::from(c.to_string()),
            };
            map.insert(e.to_string(), v);
        }
        Value::Object(map)
    }

    pub fn from_json(value: &Value) -> Result<Self, ParseError> {
        let obj = value.as_object().ok_or_else(|| ParseError {
            position: 0,
            message: "expected a JSON object".into(),
        })?;
        let mut p = Self::default();
        for (k, v) in obj {
            let e: i64 = k.parse().map_err(|_| ParseError {
                position: 0,
                message: format!("bad exponent key {k:?}"),
            })?;
            let c: BigInt = match v {
                Value::Number(n) if n.is_i64() => BigInt::from(n.as_i64().unwrap()),
                Value::String(s) => s.parse().map_err(|_| ParseError {
                    position: 0,
                    message: format!("bad coefficient {s:?}"),
                })?,
                other => {
                    return Err(ParseError {
                        position: 0,
                        message: format!("bad coefficient {other}"),
                    })
                }
            };
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self.to_text())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.negate()
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn parse(mut self) -> Result<LaurentPoly, ParseError> {
        self.skip_spaces();
        if self.peek() == Some(b'0') && {
            let mut probe = self.pos + 1;
            while probe < self.bytes.len() && self.bytes[probe] == b' ' {
                probe += 1;
            }
            probe == self.bytes.len()
        } {
            return Ok(LaurentPoly::zero());
        }

        let mut poly = LaurentPoly::default();
        let mut prev_exp: Option<i64> = None;
        let mut negative = false;
        if self.peek() == Some(b'-') {
            negative = true;
            self.pos += 1;
        }
        loop {
            let (exp, coeff) = self.term()?;
            let coeff = if negative { -coeff } else { coeff };
            if let Some(prev) = prev_exp {
                if exp <= prev {
                    return self.fail("exponents must be strictly ascending");
                }
            }
            if poly.terms.contains_key(&exp) {
                return self.fail("duplicate exponent");
            }
            poly.add_term(exp, coeff);
            prev_exp = Some(exp);
            self.skip_spaces();
            match self.peek() {
                None => return Ok(poly),
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(_) => return self.fail("expected '+', '-' or end of input"),
            }
            self.pos += 1;
            self.skip_spaces();
        }
    }

    fn term(&mut self) -> Result<(i64, BigInt), ParseError> {
        self.skip_spaces();
        let coeff = if self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.integer()?
        } else {
            BigInt::one()
        };
        if coeff.is_zero() {
            return self.fail("zero coefficient is not canonical");
        }
        if self.peek() == Some(b'z') {
            self.pos += 1;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                let neg = if self.peek() == Some(b'-') {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                let mag = self.integer()?;
                let exp = i64::try_from(&mag)
                    .map_err(|_| self.error("exponent out of range"))?;
                Ok((if neg { -exp } else { exp }, coeff))
            } else {
                Ok((1, coeff))
            }
        } else if self.bytes.get(self.pos.wrapping_sub(1)).is_some_and(|b| b.is_ascii_digit()) {
            Ok((0, coeff))
        } else {
            self.fail("expected a term")
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.fail("expected digits");
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn skip_spaces(&mut self) {
        while self.peek() == Some(b' ') {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError { position: self.pos, message: message.to_string() }
    }

    fn fail<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(self.error(message))
    }
}
