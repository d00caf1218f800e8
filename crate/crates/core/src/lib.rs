//! Exact computations with the stabilizer of the column `(c1, c2, c3)` in
//! `GL(3, Λ₃)`, where `Λ₃` is the polynomial ring `K[a1, a2, a3]` (with
//! `c_i = a_i`) or the Laurent polynomial ring `K[a1^±1, a2^±1, a3^±1]` (with
//! `c_i = a_i - 1`).
//!
//! The pipeline: a stabilizer `A` is conjugated and cut down to a 2×2 matrix
//! `R(A)` over `Λ₃ + c₃⁻¹Λ₃` ([`stab::reduce`]); the `c₃`-adic parts of
//! `R(A)` yield four residues `(α, β, γ, δ)` over `Λ₂` ([`stab::residues`]);
//! these assemble into `ρ(A)`, a homomorphism onto a congruence-type group
//! of 2×2 matrices ([`stab::rho`]), which can be inverted constructively in
//! many cases ([`stab::preimage`]).

pub mod cli;
pub mod error;
pub mod localize;
pub mod matrix;
pub mod ring;
pub mod stab;
pub mod tame;
pub mod verify;

pub use error::{Error, Result};
pub use localize::LocalizedElement;
pub use matrix::{Mat, MatrixDoc};
pub use ring::{CoeffDomain, Mode, RingDescriptor, RingElement};
