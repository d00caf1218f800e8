//! Ring elements over a power of `c_n`, the last distinguished element.
//!
//! `Λ₃ + c₃⁻¹Λ₃` is the part with denominator exponent at most one; general
//! exponents are kept so intermediate products stay representable.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{CAdicDecomposition, RingDescriptor, RingElement};

/// `num · c_n^(-denom_exp)`, normalized so that `c_n` does not divide `num`
/// whenever `denom_exp > 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocalizedElement {
    num: RingElement,
    denom_exp: u32,
}

impl LocalizedElement {
    pub fn new(num: RingElement, denom_exp: u32) -> Self {
        let mut out = LocalizedElement { num, denom_exp };
        out.normalize();
        out
    }

    pub fn from_ring(num: RingElement) -> Self {
        LocalizedElement { num, denom_exp: 0 }
    }

    fn var(&self) -> usize {
        self.num.ring().nvars
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.denom_exp = 0;
            return;
        }
        let k = self.var();
        while self.denom_exp > 0 {
            match self.num.try_div_c(k) {
                Some(q) => {
                    self.num = q;
                    self.denom_exp -= 1;
                }
                None => break,
            }
        }
    }

    pub fn numerator(&self) -> &RingElement {
        &self.num
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    pub fn ring(&self) -> &RingDescriptor {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The underlying ring element when the denominator cancels.
    pub fn to_ring(&self) -> Option<RingElement> {
        (self.denom_exp == 0).then(|| self.num.clone())
    }

    fn lifted(&self, denom_exp: u32) -> RingElement {
        let c = self.ring().c(self.var());
        &self.num * &c.pow(denom_exp - self.denom_exp)
    }

    pub fn checked_add(&self, other: &LocalizedElement) -> Result<LocalizedElement> {
        let e = self.denom_exp.max(other.denom_exp);
        let num = self.lifted(e).checked_add(&other.lifted(e))?;
        Ok(LocalizedElement::new(num, e))
    }

    pub fn checked_mul(&self, other: &LocalizedElement) -> Result<LocalizedElement> {
        let num = self.num.checked_mul(&other.num)?;
        Ok(LocalizedElement::new(num, self.denom_exp + other.denom_exp))
    }

    pub fn neg(&self) -> LocalizedElement {
        LocalizedElement { num: -&self.num, denom_exp: self.denom_exp }
    }

    /// `f = sum_{i=-1}^{t-1} g_i c^i + tail · c^t`.
    ///
    /// Fails with `DenomTooDeep` unless the denominator exponent is at most
    /// one.
    pub fn decompose(&self, t: usize) -> Result<LocalizedDecomposition> {
        if self.denom_exp > 1 {
            return Err(Error::DenomTooDeep { exp: self.denom_exp });
        }
        let k = self.var();
        let (residue, polynomial) = if self.denom_exp == 1 {
            let r = self.num.specialize(k)?;
            let rest = (&self.num - &r)
                .try_div_c(k)
                .expect("num - num(c = 0) is divisible by c");
            (r, rest)
        } else {
            (self.ring().zero(), self.num.clone())
        };
        Ok(LocalizedDecomposition { residue, part: polynomial.c_adic_decompose(k, t)? })
    }
}

/// Result of [`LocalizedElement::decompose`]: `residue · c⁻¹ + part`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizedDecomposition {
    /// The coefficient `g₋₁` of `c⁻¹`.
    pub residue: RingElement,
    pub part: CAdicDecomposition,
}

impl LocalizedDecomposition {
    pub fn reconstruct(&self) -> LocalizedElement {
        let poly = LocalizedElement::from_ring(self.part.reconstruct());
        let res = LocalizedElement::new(self.residue.clone(), 1);
        poly.checked_add(&res).expect("same ring")
    }
}

impl fmt::Display for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom_exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / c{}^{}", self.num, self.var(), self.denom_exp)
        }
    }
}

impl fmt::Debug for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Localized({self})")
    }
}
