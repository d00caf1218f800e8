//! Text form of ring elements.
//!
//! ```text
//! expr   := sign? term (('+'|'-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! factor := 'a' digit ('^' int)?
//! coeff  := int | int '/' int        (fractions need a rational ring)
//! ```
//!
//! Terms are printed in descending lexicographic order of exponent vectors,
//! so `parse(format(g)) == g` and formatting is deterministic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{accumulate, Coeff, CoeffDomain, Mode, RingDescriptor, RingElement};
use crate::error::{Error, Result};

impl RingDescriptor {
    /// Parse an element of this ring.
    pub fn parse(&self, text: &str) -> Result<RingElement> {
        Parser { ring: *self, src: text.as_bytes(), pos: 0 }.expr()
    }
}

struct Parser<'a> {
    ring: RingDescriptor,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, message: message.into() })
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(mut self) -> Result<RingElement> {
        let mut terms = BTreeMap::new();
        if self.peek().is_none() {
            return self.err("empty expression");
        }
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        loop {
            let (e, c) = self.term()?;
            accumulate(&mut terms, e, if negate { -c } else { c });
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                Some(other) => return self.err(format!("unexpected '{}'", other as char)),
            }
        }
        Ok(RingElement { ring: self.ring, terms })
    }

    fn term(&mut self) -> Result<(super::Exponent, Coeff)> {
        let mut exponent = self.ring.zero_exponent();
        let mut coeff = Coeff::one();
        // Optional inner sign, e.g. "a1 - -3".
        if self.eat(b'-') {
            coeff = -coeff;
        } else {
            self.eat(b'+');
        }
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                coeff *= self.coefficient()?;
                while self.eat(b'*') {
                    self.factor(&mut exponent)?;
                }
            }
            Some(b'a') => {
                self.factor(&mut exponent)?;
                while self.eat(b'*') {
                    self.factor(&mut exponent)?;
                }
            }
            Some(other) => return self.err(format!("expected a term, found '{}'", other as char)),
            None => return self.err("expected a term, found end of input"),
        }
        Ok((exponent, coeff))
    }

    fn unsigned(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn coefficient(&mut self) -> Result<Coeff> {
        let numer = self.unsigned()?;
        if self.peek() == Some(b'/') {
            let slash = self.pos;
            if self.ring.coeff_domain != CoeffDomain::Rationals {
                return self.err("fractions need rational coefficients");
            }
            self.pos += 1;
            let denom = self.unsigned()?;
            if denom.is_zero() {
                self.pos = slash;
                return self.err("zero denominator");
            }
            return Ok(Coeff::new(numer, denom));
        }
        Ok(Coeff::from_integer(numer))
    }

    fn factor(&mut self, exponent: &mut super::Exponent) -> Result<()> {
        if self.peek() != Some(b'a') {
            return self.err("expected a variable a1, a2, ...");
        }
        self.pos += 1;
        let Some(d) = self.src.get(self.pos).copied().filter(u8::is_ascii_digit) else {
            return self.err("expected a variable index digit");
        };
        let k = (d - b'0') as usize;
        if k == 0 || k > self.ring.nvars {
            return self.err(format!("variable a{k} outside a{}..a{}", 1, self.ring.nvars));
        }
        self.pos += 1;
        let mut power: i64 = 1;
        if self.eat(b'^') {
            let exp_pos = self.pos;
            let neg = if self.eat(b'-') {
                true
            } else {
                self.eat(b'+');
                false
            };
            let v = self.unsigned()?;
            let v: i64 = match i32::try_from(&v) {
                Ok(v) => v as i64,
                Err(_) => return self.err("exponent too large"),
            };
            power = if neg { -v } else { v };
            if power < 0 && self.ring.mode == Mode::Polynomial {
                self.skip_ws();
                return Err(Error::NegativeExponent { pos: exp_pos });
            }
        }
        let total = exponent[k - 1] as i64 + power;
        if i32::try_from(total).is_err() {
            return self.err("exponent too large");
        }
        exponent[k - 1] = total as i32;
        Ok(())
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &Coeff) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            let constant = e.iter().all(|&x| x == 0);
            if constant {
                write_coeff(f, &abs)?;
                continue;
            }
            let mut first = true;
            if !abs.is_one() {
                write_coeff(f, &abs)?;
                first = false;
            }
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if x == 1 {
                    write!(f, "a{}", i + 1)?;
                } else {
                    write!(f, "a{}^{}", i + 1, x)?;
                }
            }
        }
        Ok(())
    }
}
