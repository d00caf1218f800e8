//! Residues `(α, β, γ, δ)` of a stabilizer and the homomorphism `ρ`.

use serde::Serialize;

use super::{r_decompose, reduce, x_matrix, StabMatrix};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::ring::{in_delta, RingDescriptor, RingElement};

/// The residues of `A ∈ G`, all in `Λ₂`. They are the entries of
/// `ρ(A) = [[1 + β, α], [δ, 1 + γ]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueQuadruple {
    pub alpha: RingElement,
    pub beta: RingElement,
    pub gamma: RingElement,
    pub delta: RingElement,
}

#[derive(Serialize)]
struct ResidueDoc {
    alpha: String,
    beta: String,
    gamma: String,
    delta: String,
}

impl ResidueQuadruple {
    pub fn zero(ring2: RingDescriptor) -> Self {
        ResidueQuadruple { alpha: ring2.zero(), beta: ring2.zero(), gamma: ring2.zero(), delta: ring2.zero() }
    }

    pub fn ring(&self) -> &RingDescriptor {
        self.alpha.ring()
    }

    pub fn is_zero(&self) -> bool {
        [&self.alpha, &self.beta, &self.gamma, &self.delta].iter().all(|x| x.is_zero())
    }

    pub fn to_matrix(&self) -> Mat<RingElement> {
        let ring = *self.ring();
        Mat::from_rows(
            ring,
            vec![
                vec![&ring.one() + &self.beta, self.alpha.clone()],
                vec![self.delta.clone(), &ring.one() + &self.gamma],
            ],
        )
        .expect("residues share a ring")
    }

    /// Read the residues off a 2×2 matrix `[[1 + β, α], [δ, 1 + γ]]`.
    pub fn from_matrix(b: &Mat<RingElement>) -> Result<Self> {
        if b.nrows() != 2 || b.ncols() != 2 {
            return Err(Error::DimensionMismatch(format!("expected 2x2, got {}x{}", b.nrows(), b.ncols())));
        }
        let one = b.ring().one();
        Ok(ResidueQuadruple {
            alpha: b.get(0, 1).clone(),
            beta: b.get(0, 0) - &one,
            gamma: b.get(1, 1) - &one,
            delta: b.get(1, 0).clone(),
        })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(ResidueDoc {
            alpha: self.alpha.to_string(),
            beta: self.beta.to_string(),
            gamma: self.gamma.to_string(),
            delta: self.delta.to_string(),
        })
        .expect("plain strings serialize")
    }
}

/// The scalar `s` with `m = s · x`, checked on all four entries.
fn multiple_of(m: &Mat<RingElement>, x: &Mat<RingElement>, what: &str) -> Result<RingElement> {
    let s = m.get(0, 0).divide_exact(x.get(0, 0)).map_err(|e| {
        Error::RelationFailed(format!("{what}: entry (1,1) = {} is not a multiple of X: {e}", m.get(0, 0)))
    })?;
    let sx = x.scale(&s)?;
    if &sx != m {
        return Err(Error::RelationFailed(format!("{what}: {m} is not {s} · X")));
    }
    Ok(s)
}

/// Residues by the defining relations
/// `R₋₁ = αX`, `R₀X = βX`, `XR₀ = γX`, `XR₁X = δX`.
pub fn residues(a: &StabMatrix) -> Result<ResidueQuadruple> {
    let d = r_decompose(&reduce(a))?;
    let x = x_matrix(*d.zero.ring());
    let alpha = multiple_of(&d.minus1, &x, "R₋₁ = αX")?;
    let beta = multiple_of(&d.zero.mul(&x)?, &x, "R₀X = βX")?;
    let gamma = multiple_of(&x.mul(&d.zero)?, &x, "XR₀ = γX")?;
    let delta = multiple_of(&x.mul(&d.one)?.mul(&x)?, &x, "XR₁X = δX")?;
    Ok(ResidueQuadruple { alpha, beta, gamma, delta })
}

/// Residues from the `c3`-adic heads `(·)₀, (·)₁` of the entries of `A - E`:
///
/// ```text
/// α = -(a31)₀ / c2 = (a32)₀ / c1
/// β = -(a31)₁ c1 - (a32)₁ c2
/// γ = (a11)₀ - (a21)₀ c1 / c2
/// δ = ((a11)₁ - (a22)₁) c1 c2 + (a12)₁ c2² - (a21)₁ c1²
/// ```
pub fn residues_closed_form(a: &StabMatrix) -> Result<ResidueQuadruple> {
    let m = a.matrix();
    let ring3 = *m.ring();
    let ring2 = ring3.with_nvars(2);
    let heads = |i: usize, j: usize| -> Result<(RingElement, RingElement)> {
        let mut e = m.get(i - 1, j - 1).clone();
        if i == j {
            e = &e - &ring3.one();
        }
        let d = e.c_adic_decompose(3, 2)?;
        Ok((d.heads[0].restrict(2)?, d.heads[1].restrict(2)?))
    };
    let (c1, c2) = (ring2.c(1), ring2.c(2));
    let (a11_0, a11_1) = heads(1, 1)?;
    let (_, a12_1) = heads(1, 2)?;
    let (a21_0, a21_1) = heads(2, 1)?;
    let (_, a22_1) = heads(2, 2)?;
    let (a31_0, a31_1) = heads(3, 1)?;
    let (a32_0, a32_1) = heads(3, 2)?;

    let fail = |what: &str, e: Error| Error::RelationFailed(format!("{what}: {e}"));
    let alpha = (-&a31_0).divide_exact(&c2).map_err(|e| fail("α = -(a31)₀/c2", e))?;
    let alpha_alt = a32_0.divide_exact(&c1).map_err(|e| fail("α = (a32)₀/c1", e))?;
    if alpha != alpha_alt {
        return Err(Error::RelationFailed(format!("α disagrees: {alpha} vs {alpha_alt}")));
    }
    let beta = -(&(&a31_1 * &c1) + &(&a32_1 * &c2));
    let gamma = (&(&a11_0 * &c2) - &(&a21_0 * &c1))
        .divide_exact(&c2)
        .map_err(|e| fail("γ", e))?;
    let delta = &(&(&(&a11_1 - &a22_1) * &(&c1 * &c2)) + &(&a12_1 * &c2.pow(2))) - &(&a21_1 * &c1.pow(2));
    Ok(ResidueQuadruple { alpha, beta, gamma, delta })
}

/// Residues of a product, `q̃` with `matrix(q̃) = matrix(q) · matrix(q′)`.
pub fn compose_residues(q: &ResidueQuadruple, q2: &ResidueQuadruple) -> ResidueQuadruple {
    let alpha = &(&(&q.alpha + &(&q.alpha * &q2.gamma)) + &q2.alpha) + &(&q2.alpha * &q.beta);
    let beta = &(&(&q.beta + &q2.beta) + &(&q.beta * &q2.beta)) + &(&q.alpha * &q2.delta);
    let gamma = &(&(&q.gamma + &q2.gamma) + &(&q.gamma * &q2.gamma)) + &(&q.delta * &q2.alpha);
    let delta = &(&(&q.delta + &q2.delta) + &(&q.delta * &q2.beta)) + &(&q.gamma * &q2.delta);
    ResidueQuadruple { alpha, beta, gamma, delta }
}

/// A 2×2 matrix over `Λ₂` of the shape
///
/// ```text
/// | 1 + Δ₂   Λ₂     |
/// | Δ₂²      1 + Δ₂ |
/// ```
///
/// with unit determinant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CongruenceMatrix(Mat<RingElement>);

impl CongruenceMatrix {
    pub fn new(b: Mat<RingElement>) -> Result<Self> {
        match scheme_violation(&b) {
            None => Ok(CongruenceMatrix(b)),
            Some(why) => Err(Error::NotInScheme(why)),
        }
    }

    pub fn matrix(&self) -> &Mat<RingElement> {
        &self.0
    }

    pub fn into_matrix(self) -> Mat<RingElement> {
        self.0
    }

    pub fn ring(&self) -> &RingDescriptor {
        self.0.ring()
    }

    pub fn residues(&self) -> ResidueQuadruple {
        ResidueQuadruple::from_matrix(&self.0).expect("2x2")
    }
}

/// Why `b` fails the congruence scheme, or `None` if it passes.
pub fn scheme_violation(b: &Mat<RingElement>) -> Option<String> {
    if b.nrows() != 2 || b.ncols() != 2 {
        return Some(format!("expected 2x2, got {}x{}", b.nrows(), b.ncols()));
    }
    if b.ring().nvars != 2 {
        return Some(format!("expected a ring in 2 variables, got {}", b.ring()));
    }
    let one = b.ring().one();
    if !in_delta(&(b.get(0, 0) - &one), 1) {
        return Some(format!("(1,1) entry {} is not 1 mod Δ₂", b.get(0, 0)));
    }
    if !in_delta(&(b.get(1, 1) - &one), 1) {
        return Some(format!("(2,2) entry {} is not 1 mod Δ₂", b.get(1, 1)));
    }
    if !in_delta(b.get(1, 0), 2) {
        return Some(format!("(2,1) entry {} is not in Δ₂²", b.get(1, 0)));
    }
    let det = b.det().expect("square");
    if !det.is_unit() {
        return Some(format!("determinant {det} is not a unit"));
    }
    None
}

pub fn in_scheme(b: &Mat<RingElement>) -> bool {
    scheme_violation(b).is_none()
}

/// `ρ(A) = [[1 + β, α], [δ, 1 + γ]]`.
pub fn rho(a: &StabMatrix) -> Result<CongruenceMatrix> {
    let b = residues(a)?.to_matrix();
    CongruenceMatrix::new(b).map_err(|e| Error::RelationFailed(format!("image of ρ left the scheme: {e}")))
}
