//! Exact sparse arithmetic in the rings `K[a1..an]` and `K[a1^±1..an^±1]`.
//!
//! Every ring carries a distinguished element `c_i` per variable: `a_i` in
//! polynomial mode and `a_i - 1` in Laurent mode. Both vanish at the base
//! point (all zeros, respectively all ones), which is what specialization,
//! c-adic decomposition and the augmentation ideal are built on.

mod codec;
mod ideal;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use ideal::{delta_split_linear, delta_split_quadratic, in_delta, QuadraticSplit};

/// Exact coefficient. Integer rings only ever hold integral values.
pub type Coeff = BigRational;

/// Exponent vector, one entry per variable.
pub type Exponent = SmallVec<[i32; 4]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Polynomial,
    Laurent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoeffDomain {
    #[serde(rename = "int")]
    Integers,
    #[serde(rename = "rat")]
    Rationals,
}

/// Which ring an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub mode: Mode,
    pub nvars: usize,
    #[serde(rename = "coeff")]
    pub coeff_domain: CoeffDomain,
}

impl RingDescriptor {
    pub fn new(mode: Mode, nvars: usize) -> Self {
        assert!(nvars >= 1, "a ring needs at least one variable");
        RingDescriptor { mode, nvars, coeff_domain: CoeffDomain::Integers }
    }

    pub fn polynomial(nvars: usize) -> Self {
        Self::new(Mode::Polynomial, nvars)
    }

    pub fn laurent(nvars: usize) -> Self {
        Self::new(Mode::Laurent, nvars)
    }

    pub fn with_coeff_domain(self, coeff_domain: CoeffDomain) -> Self {
        RingDescriptor { coeff_domain, ..self }
    }

    /// Same mode and coefficients, different number of variables.
    pub fn with_nvars(self, nvars: usize) -> Self {
        assert!(nvars >= 1, "a ring needs at least one variable");
        RingDescriptor { nvars, ..self }
    }

    pub fn zero(&self) -> RingElement {
        RingElement { ring: *self, terms: BTreeMap::new() }
    }

    pub fn one(&self) -> RingElement {
        self.constant(1)
    }

    pub fn constant(&self, value: i64) -> RingElement {
        self.constant_coeff(Coeff::from_integer(BigInt::from(value)))
    }

    pub fn constant_coeff(&self, value: Coeff) -> RingElement {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(self.zero_exponent(), value);
        }
        RingElement { ring: *self, terms }
    }

    /// The variable `a_k` (1-based).
    pub fn var(&self, k: usize) -> RingElement {
        self.check_var(k).expect("variable index out of range");
        let mut e = self.zero_exponent();
        e[k - 1] = 1;
        self.monomial(1, &e)
    }

    /// The distinguished element `c_k` (1-based).
    pub fn c(&self, k: usize) -> RingElement {
        match self.mode {
            Mode::Polynomial => self.var(k),
            Mode::Laurent => &self.var(k) - &self.one(),
        }
    }

    /// The column `(c_1, ..., c_n)`.
    pub fn c_column(&self) -> Vec<RingElement> {
        (1..=self.nvars).map(|k| self.c(k)).collect()
    }

    pub fn monomial(&self, coeff: i64, exponent: &[i32]) -> RingElement {
        assert_eq!(exponent.len(), self.nvars);
        if self.mode == Mode::Polynomial {
            assert!(exponent.iter().all(|&e| e >= 0), "negative exponent in polynomial mode");
        }
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(Exponent::from_slice(exponent), Coeff::from_integer(BigInt::from(coeff)));
        }
        RingElement { ring: *self, terms }
    }

    pub(crate) fn zero_exponent(&self) -> Exponent {
        SmallVec::from_elem(0, self.nvars)
    }

    pub(crate) fn check_var(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.nvars {
            return Err(Error::VariableOutOfRange { index: k, nvars: self.nvars });
        }
        Ok(())
    }

    pub(crate) fn is_unit_coeff(&self, c: &Coeff) -> bool {
        match self.coeff_domain {
            CoeffDomain::Integers => c.is_integer() && c.numer().abs().is_one(),
            CoeffDomain::Rationals => !c.is_zero(),
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = match self.mode {
            Mode::Polynomial => "polynomial",
            Mode::Laurent => "laurent",
        };
        let k = match self.coeff_domain {
            CoeffDomain::Integers => "Z",
            CoeffDomain::Rationals => "Q",
        };
        write!(f, "{m}/{k}[{} vars]", self.nvars)
    }
}

/// A sparse multivariate (Laurent) polynomial in canonical form: no zero
/// coefficients are stored, so structural equality is ring equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: RingDescriptor,
    terms: BTreeMap<Exponent, Coeff>,
}

impl RingElement {
    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Coeff)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
    }

    /// The constant coefficient if this element is a constant.
    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn same_ring(&self, other: &RingElement) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            accumulate(&mut terms, e.clone(), c.clone());
        }
        Ok(RingElement { ring: self.ring, terms })
    }

    pub fn checked_sub(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            accumulate(&mut terms, e.clone(), -c.clone());
        }
        Ok(RingElement { ring: self.ring, terms })
    }

    pub fn checked_mul(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        if let Some(product) = self.mul_small(other) {
            return Ok(product);
        }
        let integral = |x: &RingElement| x.terms.values().all(|c| c.denom().is_one());
        if integral(self) && integral(other) {
            // Skip the gcd normalization of rational arithmetic.
            let mut acc: BTreeMap<Exponent, BigInt> = BTreeMap::new();
            for (e1, c1) in &self.terms {
                for (e2, c2) in &other.terms {
                    let e: Exponent = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                    *acc.entry(e).or_default() += c1.numer() * c2.numer();
                }
            }
            let terms = acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (e, Coeff::from_integer(c)))
                .collect();
            return Ok(RingElement { ring: self.ring, terms });
        }
        let mut terms = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                accumulate(&mut terms, e, c1 * c2);
            }
        }
        Ok(RingElement { ring: self.ring, terms })
    }

    /// Product over machine integers when every coefficient is an integer
    /// small enough that no partial sum can overflow `i128`.
    fn mul_small(&self, other: &RingElement) -> Option<RingElement> {
        fn small(x: &RingElement) -> Option<(Vec<(&Exponent, i64)>, u128)> {
            let mut max = 0u128;
            let mut out = Vec::with_capacity(x.terms.len());
            for (e, c) in &x.terms {
                if !c.denom().is_one() {
                    return None;
                }
                let v = c.numer().to_i64()?;
                max = max.max(v.unsigned_abs() as u128);
                out.push((e, v));
            }
            Some((out, max))
        }
        let (a, max_a) = small(self)?;
        let (b, max_b) = small(other)?;
        let n = a.len().min(b.len()).max(1) as u128;
        if max_a.checked_mul(max_b)?.checked_mul(n)? >= 1u128 << 126 {
            return None;
        }
        let mut acc: HashMap<Exponent, i128> = HashMap::with_capacity(a.len() * b.len());
        for (e1, c1) in &a {
            for (e2, c2) in &b {
                let e: Exponent = e1.iter().zip(e2.iter()).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert(0) += *c1 as i128 * *c2 as i128;
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(e, c)| (e, Coeff::from_integer(BigInt::from(c))))
            .collect();
        Some(RingElement { ring: self.ring, terms })
    }

    pub fn scale(&self, s: &Coeff) -> RingElement {
        if s.is_zero() {
            return self.ring.zero();
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect();
        RingElement { ring: self.ring, terms }
    }

    pub fn scale_int(&self, s: i64) -> RingElement {
        self.scale(&Coeff::from_integer(BigInt::from(s)))
    }

    pub fn pow(&self, n: u32) -> RingElement {
        let mut acc = self.ring.one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Whether variable `k` (1-based) occurs in any term.
    pub fn involves(&self, k: usize) -> bool {
        self.terms.keys().any(|e| e[k - 1] != 0)
    }

    /// Evaluate variable `k` at the base point, i.e. send `c_k` to zero.
    pub fn specialize(&self, k: usize) -> Result<RingElement> {
        self.ring.check_var(k)?;
        let i = k - 1;
        let mut terms = BTreeMap::new();
        match self.ring.mode {
            Mode::Polynomial => {
                for (e, c) in &self.terms {
                    if e[i] == 0 {
                        terms.insert(e.clone(), c.clone());
                    }
                }
            }
            Mode::Laurent => {
                for (e, c) in &self.terms {
                    let mut e = e.clone();
                    e[i] = 0;
                    accumulate(&mut terms, e, c.clone());
                }
            }
        }
        Ok(RingElement { ring: self.ring, terms })
    }

    /// Evaluate every variable at the base point.
    pub fn value_at_base(&self) -> Coeff {
        match self.ring.mode {
            Mode::Polynomial => self
                .terms
                .get(&self.ring.zero_exponent())
                .cloned()
                .unwrap_or_else(Coeff::zero),
            Mode::Laurent => self.terms.values().fold(Coeff::zero(), |acc, c| acc + c),
        }
    }

    /// Divide by `c_k` once; `None` when the quotient is not exact.
    pub(crate) fn try_div_c(&self, k: usize) -> Option<RingElement> {
        let i = k - 1;
        match self.ring.mode {
            Mode::Polynomial => {
                let mut terms = BTreeMap::new();
                for (e, c) in &self.terms {
                    if e[i] < 1 {
                        return None;
                    }
                    let mut e = e.clone();
                    e[i] -= 1;
                    terms.insert(e, c.clone());
                }
                Some(RingElement { ring: self.ring, terms })
            }
            Mode::Laurent => {
                // Synthetic division by (a_k - 1) of each univariate slice.
                let mut slices: BTreeMap<Exponent, BTreeMap<i32, &Coeff>> = BTreeMap::new();
                for (e, c) in &self.terms {
                    let mut rest = e.clone();
                    rest[i] = 0;
                    slices.entry(rest).or_default().insert(e[i], c);
                }
                let mut terms = BTreeMap::new();
                for (rest, slice) in slices {
                    let lo = *slice.keys().next().unwrap();
                    let hi = *slice.keys().next_back().unwrap();
                    let mut running = Coeff::zero();
                    for d in ((lo + 1)..=hi).rev() {
                        if let Some(p) = slice.get(&d) {
                            running += *p;
                        }
                        if !running.is_zero() {
                            let mut e = rest.clone();
                            e[i] = d - 1;
                            terms.insert(e, running.clone());
                        }
                    }
                    if !(running + slice[&lo]).is_zero() {
                        return None;
                    }
                }
                Some(RingElement { ring: self.ring, terms })
            }
        }
    }

    /// Divide by `c_k^power`, failing with `NotDivisible` if inexact.
    pub fn div_c_pow(&self, k: usize, power: u32) -> Result<RingElement> {
        self.ring.check_var(k)?;
        let mut q = self.clone();
        for _ in 0..power {
            q = q.try_div_c(k).ok_or_else(|| Error::NotDivisible {
                dividend: self.to_string(),
                divisor: format!("{}^{}", self.ring.c(k), power),
            })?;
        }
        Ok(q)
    }

    /// Exact quotient by `d`, where `d` is a unit times a product of
    /// c-powers.
    pub fn divide_exact(&self, d: &RingElement) -> Result<RingElement> {
        self.same_ring(d)?;
        if d.is_zero() {
            return Err(Error::NotCProduct(d.to_string()));
        }
        let mut rest = d.clone();
        let mut powers = vec![0u32; self.ring.nvars];
        for k in 1..=self.ring.nvars {
            while let Some(q) = rest.try_div_c(k) {
                rest = q;
                powers[k - 1] += 1;
            }
        }
        let unit_inv = rest
            .unit_inverse()
            .ok_or_else(|| Error::NotCProduct(d.to_string()))?;
        let mut q = self.clone();
        for (idx, &p) in powers.iter().enumerate() {
            for _ in 0..p {
                q = q.try_div_c(idx + 1).ok_or_else(|| Error::NotDivisible {
                    dividend: self.to_string(),
                    divisor: d.to_string(),
                })?;
            }
        }
        Ok(&q * &unit_inv)
    }

    /// Whether `c_k^power` divides this element exactly.
    pub fn divisible_by_c_pow(&self, k: usize, power: u32) -> bool {
        self.div_c_pow(k, power).is_ok()
    }

    /// Write `g = sum_{i<t} g_i c_k^i + tail * c_k^t` with every head free of
    /// variable `k`.
    pub fn c_adic_decompose(&self, k: usize, t: usize) -> Result<CAdicDecomposition> {
        self.ring.check_var(k)?;
        if t == 0 {
            return Err(Error::IndexConstraint("decomposition depth must be at least 1".into()));
        }
        let mut heads = Vec::with_capacity(t);
        let mut g = self.clone();
        for _ in 0..t {
            let h = g.specialize(k)?;
            g = (&g - &h)
                .try_div_c(k)
                .expect("g - g(c_k = 0) is divisible by c_k");
            heads.push(h);
        }
        Ok(CAdicDecomposition { var: k, heads, tail: g })
    }

    /// Inverse of this element when it is a unit.
    pub fn unit_inverse(&self) -> Option<RingElement> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if !self.ring.is_unit_coeff(c) {
            return None;
        }
        if self.ring.mode == Mode::Polynomial && e.iter().any(|&x| x != 0) {
            return None;
        }
        let inv_e: Exponent = e.iter().map(|x| -x).collect();
        let mut terms = BTreeMap::new();
        terms.insert(inv_e, c.recip());
        Some(RingElement { ring: self.ring, terms })
    }

    pub fn is_unit(&self) -> bool {
        self.unit_inverse().is_some()
    }

    /// Reinterpret in a ring with more (or equally many) variables.
    pub fn embed(&self, target: RingDescriptor) -> Result<RingElement> {
        if target.mode != self.ring.mode
            || target.coeff_domain != self.ring.coeff_domain
            || target.nvars < self.ring.nvars
        {
            return Err(Error::RingMismatch {
                left: self.ring.to_string(),
                right: target.to_string(),
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e.resize(target.nvars, 0);
                (e, c.clone())
            })
            .collect();
        Ok(RingElement { ring: target, terms })
    }

    /// Drop trailing variables; fails if one of them occurs.
    pub fn restrict(&self, nvars: usize) -> Result<RingElement> {
        if nvars == 0 || nvars > self.ring.nvars {
            return Err(Error::VariableOutOfRange { index: nvars, nvars: self.ring.nvars });
        }
        for k in (nvars + 1)..=self.ring.nvars {
            if self.involves(k) {
                return Err(Error::RingMismatch {
                    left: format!("{} (involves a{k})", self),
                    right: self.ring.with_nvars(nvars).to_string(),
                });
            }
        }
        let target = self.ring.with_nvars(nvars);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (Exponent::from_slice(&e[..nvars]), c.clone()))
            .collect();
        Ok(RingElement { ring: target, terms })
    }
}

fn accumulate(terms: &mut BTreeMap<Exponent, Coeff>, e: Exponent, c: Coeff) {
    use std::collections::btree_map::Entry;
    match terms.entry(e) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement({})", self)
    }
}

/// Result of [`RingElement::c_adic_decompose`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CAdicDecomposition {
    pub var: usize,
    pub heads: Vec<RingElement>,
    pub tail: RingElement,
}

impl CAdicDecomposition {
    pub fn depth(&self) -> usize {
        self.heads.len()
    }

    /// `sum_i heads[i] c^i + tail c^t`.
    pub fn reconstruct(&self) -> RingElement {
        let ring = *self.tail.ring();
        let c = ring.c(self.var);
        let mut acc = self.tail.clone();
        for h in self.heads.iter().rev() {
            acc = &(&acc * &c) + h;
        }
        acc
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&RingElement> for &RingElement {
            type Output = RingElement;
            fn $method(self, rhs: &RingElement) -> RingElement {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<RingElement> for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: RingElement) -> RingElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RingElement> for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: &RingElement) -> RingElement {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        RingElement { ring: self.ring, terms }
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}
