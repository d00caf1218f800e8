//! The augmentation ideal `Δ = (c_1, ..., c_n)` and its powers.

use super::RingElement;
use crate::error::{Error, Result};

/// Whether `g` lies in `Δ^p`.
///
/// Expanding in `c_n` to depth `p` gives heads `h_0..h_{p-1}` free of `a_n`,
/// and `g ∈ Δ_n^p` iff `h_i ∈ Δ_{n-1}^{p-i}` for each `i`.
pub fn in_delta(g: &RingElement, p: u32) -> bool {
    in_delta_first(g, p, g.ring().nvars)
}

fn in_delta_first(g: &RingElement, p: u32, nvars: usize) -> bool {
    if p == 0 || g.is_zero() {
        return true;
    }
    if nvars == 0 {
        return false;
    }
    let d = g
        .c_adic_decompose(nvars, p as usize)
        .expect("variable index is in range");
    d.heads
        .iter()
        .enumerate()
        .all(|(i, h)| in_delta_first(h, p - i as u32, nvars - 1))
}

fn require_two_vars(g: &RingElement) -> Result<()> {
    if g.ring().nvars != 2 {
        return Err(Error::ModeMismatch(format!(
            "Δ₂ splits need a ring in 2 variables, got {}",
            g.ring()
        )));
    }
    Ok(())
}

/// Split `β ∈ Δ₂` as `β₁c₁ + β₂c₂` with `β₁` free of `a₂`.
pub fn delta_split_linear(beta: &RingElement) -> Result<(RingElement, RingElement)> {
    require_two_vars(beta)?;
    if !in_delta(beta, 1) {
        return Err(Error::NotInIdeal { element: beta.to_string(), ideal: "Δ₂".into() });
    }
    let ring = *beta.ring();
    let b1 = beta.specialize(2)?.div_c_pow(1, 1)?;
    let b2 = (beta - &(&b1 * &ring.c(1))).div_c_pow(2, 1)?;
    Ok((b1, b2))
}

/// The four coefficients of `δ = δ₁₁c₁² + (δ₁₂ + δ′₁₂)c₁c₂ + δ₂₂c₂²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSplit {
    pub d11: RingElement,
    pub d12: RingElement,
    pub d12_prime: RingElement,
    pub d22: RingElement,
}

impl QuadraticSplit {
    pub fn reconstruct(&self) -> RingElement {
        let ring = *self.d11.ring();
        let (c1, c2) = (ring.c(1), ring.c(2));
        &(&(&self.d11 * &c1.pow(2)) + &(&(&self.d12 + &self.d12_prime) * &(&c1 * &c2)))
            + &(&self.d22 * &c2.pow(2))
    }
}

/// Canonical split of `δ ∈ Δ₂²`; `δ′₁₂` is always zero.
pub fn delta_split_quadratic(delta: &RingElement) -> Result<QuadraticSplit> {
    require_two_vars(delta)?;
    if !in_delta(delta, 2) {
        return Err(Error::NotInIdeal { element: delta.to_string(), ideal: "Δ₂²".into() });
    }
    let ring = *delta.ring();
    let c1 = ring.c(1);
    let d11 = delta.specialize(2)?.div_c_pow(1, 2)?;
    let rem = (delta - &(&d11 * &c1.pow(2))).div_c_pow(2, 1)?;
    let d12 = rem.specialize(2)?.div_c_pow(1, 1)?;
    let d22 = (&rem - &(&d12 * &c1)).div_c_pow(2, 1)?;
    Ok(QuadraticSplit { d11, d12, d12_prime: ring.zero(), d22 })
}
