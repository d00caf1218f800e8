//! The stabilizer `G` of the column `(c1, c2, c3)` in `GL(3, Λ₃)`.
//!
//! For `A ∈ G` conjugation by
//!
//! ```text
//!     | 1 0 c1 |
//! C = | 0 1 c2 |
//!     | 0 0 c3 |
//! ```
//!
//! fixes the third basis vector, so the upper-left 2×2 block `R(A)` of
//! `C⁻¹AC` is multiplicative in `A`. Its entries have denominator at most
//! `c3`; the `c3`-adic parts of `R(A)` carry the residues (see
//! [`residues`]).

mod preimage;
mod residues;

use crate::error::{Error, Result};
use crate::localize::LocalizedElement;
use crate::matrix::Mat;
use crate::ring::{RingDescriptor, RingElement};

pub use preimage::{
    build_preimage_candidate, candidate_from_splits, determinant_defect, find_transvection_preimage,
    preimage, transvection_coefficient, PreimageCandidate, PreimageReport, PreimageStatus, ReportDoc, SearchBudget, Splits, Stage,
};
pub use residues::{
    compose_residues, in_scheme, residues, residues_closed_form, rho, scheme_violation, CongruenceMatrix,
    ResidueQuadruple,
};

/// A certified element of `G`: it fixes the column `(c1, c2, c3)` and has a
/// unit determinant. Values are only produced by [`check_stab`] or by
/// operations that preserve membership.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StabMatrix {
    matrix: Mat<RingElement>,
}

impl StabMatrix {
    pub fn identity(ring: RingDescriptor) -> Self {
        StabMatrix { matrix: Mat::identity(ring, 3) }
    }

    pub fn matrix(&self) -> &Mat<RingElement> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Mat<RingElement> {
        self.matrix
    }

    pub fn ring(&self) -> &RingDescriptor {
        self.matrix.ring()
    }

    /// Product in `G`.
    pub fn mul(&self, other: &StabMatrix) -> Result<StabMatrix> {
        Ok(StabMatrix { matrix: self.matrix.mul(&other.matrix)? })
    }

    /// Inverse in `G`.
    pub fn inverse(&self) -> Result<StabMatrix> {
        Ok(StabMatrix { matrix: self.matrix.inverse()? })
    }

    pub(crate) fn certified_unchecked(matrix: Mat<RingElement>) -> Self {
        debug_assert!(check_stab(&matrix).is_ok());
        StabMatrix { matrix }
    }
}

fn require_lambda3(ring: &RingDescriptor) -> Result<()> {
    if ring.nvars != 3 {
        return Err(Error::ModeMismatch(format!("stabilizers live over a ring in 3 variables, got {ring}")));
    }
    Ok(())
}

/// Accept `a` iff `a · c = c` and `det(a)` is a unit.
pub fn check_stab(a: &Mat<RingElement>) -> Result<StabMatrix> {
    require_lambda3(a.ring())?;
    if a.nrows() != 3 || a.ncols() != 3 {
        return Err(Error::DimensionMismatch(format!("expected 3x3, got {}x{}", a.nrows(), a.ncols())));
    }
    let c = a.ring().c_column();
    let image = a.apply_to_column(&c)?;
    let defect: Vec<RingElement> = image.iter().zip(&c).map(|(x, y)| x - y).collect();
    if defect.iter().any(|d| !d.is_zero()) {
        return Err(Error::NotStabilizing { defect: defect.iter().map(ToString::to_string).collect() });
    }
    let det = a.det()?;
    if !det.is_unit() {
        return Err(Error::NotInvertible { det: det.to_string() });
    }
    Ok(StabMatrix { matrix: a.clone() })
}

/// The conjugator `C` with columns `e1`, `e2`, `(c1, c2, c3)`.
pub fn conjugator(ring: RingDescriptor) -> Mat<RingElement> {
    let (z, o) = (ring.zero(), ring.one());
    Mat::from_rows(
        ring,
        vec![
            vec![o.clone(), z.clone(), ring.c(1)],
            vec![z.clone(), o, ring.c(2)],
            vec![z.clone(), z, ring.c(3)],
        ],
    )
    .expect("well-formed")
}

/// The square-zero matrix `X = (c1, c2)ᵀ (c2, -c1)` over `ring`.
pub fn x_matrix(ring: RingDescriptor) -> Mat<RingElement> {
    let (c1, c2) = (ring.c(1), ring.c(2));
    Mat::from_rows(
        ring,
        vec![vec![&c1 * &c2, -(&c1 * &c1)], vec![&c2 * &c2, -(&c1 * &c2)]],
    )
    .expect("well-formed")
}

/// `R(A)`: the upper-left block of `C⁻¹AC`.
///
/// Entrywise `R_ij = A_ij - A_3j c_i / c3` for `i, j ∈ {1, 2}`.
pub fn reduce(a: &StabMatrix) -> Mat<LocalizedElement> {
    let m = a.matrix();
    let ring = *m.ring();
    let c3 = ring.c(3);
    Mat::from_fn(ring, 2, 2, |i, j| {
        let num = &(m.get(i, j) * &c3) - &(m.get(2, j) * &ring.c(i + 1));
        let r = LocalizedElement::new(num, 1);
        assert!(r.denom_exp() <= 1);
        r
    })
}

/// `R = E + R₂c3² + R₁c3 + R₀ + R₋₁c3⁻¹` with `R₋₁, R₀, R₁` over `Λ₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RDecomposition {
    pub minus1: Mat<RingElement>,
    pub zero: Mat<RingElement>,
    pub one: Mat<RingElement>,
    /// Over `Λ₃`.
    pub two: Mat<RingElement>,
}

impl RDecomposition {
    /// Reassemble the localized matrix.
    pub fn reconstruct(&self) -> Mat<LocalizedElement> {
        let ring3 = *self.two.ring();
        let c3 = ring3.c(3);
        Mat::from_fn(ring3, 2, 2, |i, j| {
            let up = |m: &Mat<RingElement>| m.get(i, j).embed(ring3).unwrap();
            let diag = if i == j { ring3.one() } else { ring3.zero() };
            let poly = &(&(&diag + &up(&self.zero)) + &(&up(&self.one) * &c3)) + &(self.two.get(i, j) * &c3.pow(2));
            let num = &(&poly * &c3) + &up(&self.minus1);
            LocalizedElement::new(num, 1)
        })
    }
}

/// Split `R(A) - E` entrywise by powers of `c3`.
pub fn r_decompose(r: &Mat<LocalizedElement>) -> Result<RDecomposition> {
    let ring3 = *r.ring();
    require_lambda3(&ring3)?;
    let ring2 = ring3.with_nvars(2);
    let mut parts: [Vec<RingElement>; 4] = Default::default();
    for i in 0..2 {
        for j in 0..2 {
            let mut e = r.get(i, j).clone();
            if i == j {
                e = e.checked_add(&LocalizedElement::from_ring(-ring3.one()))?;
            }
            let d = e.decompose(2)?;
            parts[0].push(d.residue.restrict(2)?);
            parts[1].push(d.part.heads[0].restrict(2)?);
            parts[2].push(d.part.heads[1].restrict(2)?);
            parts[3].push(d.part.tail.clone());
        }
    }
    let to_mat = |ring: RingDescriptor, v: &[RingElement]| {
        Mat::from_rows(ring, vec![v[..2].to_vec(), v[2..].to_vec()])
    };
    Ok(RDecomposition {
        minus1: to_mat(ring2, &parts[0])?,
        zero: to_mat(ring2, &parts[1])?,
        one: to_mat(ring2, &parts[2])?,
        two: to_mat(ring3, &parts[3])?,
    })
}

/// Membership in the subgroup `H` of `G`: `A - E` has entries in `Λ₃c3²`
/// except in the third column, where `Λ₃c3` suffices.
pub fn in_h(a: &StabMatrix) -> bool {
    let m = a.matrix();
    let ring = *m.ring();
    (0..3).all(|i| {
        (0..3).all(|j| {
            let mut e = m.get(i, j).clone();
            if i == j {
                e = &e - &ring.one();
            }
            let power = if j == 2 { 1 } else { 2 };
            e.divisible_by_c_pow(3, power)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::unit_matrix;

    fn rings() -> [RingDescriptor; 2] {
        [RingDescriptor::polynomial(3), RingDescriptor::laurent(3)]
    }

    /// `T = E - c2 E31 + c1 E32`.
    fn t_matrix(ring: RingDescriptor) -> Mat<RingElement> {
        let mut m = Mat::identity(ring, 3);
        m.set(2, 0, -ring.c(2));
        m.set(2, 1, ring.c(1));
        m
    }

    #[test]
    fn check_stab_examples() {
        for ring in rings() {
            assert!(check_stab(&Mat::identity(ring, 3)).is_ok());
            assert!(check_stab(&t_matrix(ring)).is_ok());
            let t12 = crate::matrix::transvection(3, 1, 2, &ring.one()).unwrap();
            match check_stab(&t12) {
                Err(Error::NotStabilizing { defect }) => {
                    assert_eq!(defect, vec![ring.c(2).to_string(), "0".into(), "0".into()])
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn non_unit_determinant_rejected() {
        let ring = RingDescriptor::polynomial(3);
        // E + a3 E11 - a1 E13 fixes the column with det 1 + a3.
        let mut m = Mat::identity(ring, 3);
        m.set(0, 0, ring.parse("1 + a3").unwrap());
        m.set(0, 2, -ring.var(1));
        assert!(matches!(check_stab(&m), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn conjugator_has_determinant_c3() {
        for ring in rings() {
            assert_eq!(conjugator(ring).det().unwrap(), ring.c(3));
        }
    }

    #[test]
    fn x_is_square_zero() {
        for ring in [RingDescriptor::polynomial(2), RingDescriptor::laurent(2)] {
            let x = x_matrix(ring);
            let x2 = x.mul(&x).unwrap();
            assert_eq!(x2, Mat::zeros(ring, 2, 2));
        }
    }

    #[test]
    fn reduce_of_t_is_e_plus_x_over_c3() {
        for ring in rings() {
            let t = check_stab(&t_matrix(ring)).unwrap();
            let r = reduce(&t);
            let d = r_decompose(&r).unwrap();
            assert_eq!(d.minus1, x_matrix(ring.with_nvars(2)));
            assert_eq!(d.zero, Mat::zeros(ring.with_nvars(2), 2, 2));
            assert_eq!(d.one, Mat::zeros(ring.with_nvars(2), 2, 2));
            assert_eq!(d.two, Mat::zeros(ring, 2, 2));
            assert_eq!(d.reconstruct(), r);
        }
    }

    #[test]
    fn reduce_agrees_with_conjugation() {
        for ring in rings() {
            let t = check_stab(&t_matrix(ring)).unwrap();
            let c = conjugator(ring).to_localized();
            // C⁻¹ = adj(C) / c3
            let cinv = conjugator(ring)
                .adjugate()
                .unwrap()
                .to_localized()
                .scale(&LocalizedElement::new(ring.one(), 1))
                .unwrap();
            let full = cinv.mul(&t.matrix().to_localized()).unwrap().mul(&c).unwrap();
            let r = reduce(&t);
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(full.get(i, j), r.get(i, j));
                }
            }
            assert_eq!(full.get(0, 2), &LocalizedElement::from_ring(ring.zero()));
            assert_eq!(full.get(2, 2), &LocalizedElement::from_ring(ring.one()));
        }
    }

    #[test]
    fn reduce_identity() {
        for ring in rings() {
            let r = reduce(&StabMatrix::identity(ring));
            assert_eq!(r, Mat::identity(ring, 2));
            let d = r_decompose(&r).unwrap();
            assert!(d.minus1.rows().flatten().all(RingElement::is_zero));
            assert!(d.two.rows().flatten().all(RingElement::is_zero));
        }
    }

    #[test]
    fn h_membership_examples() {
        let ring = RingDescriptor::polynomial(3);
        assert!(in_h(&StabMatrix::identity(ring)));
        // T_{1,2,3}(c3) = E + c3² E12 - c2 c3 E13
        let mut m = Mat::identity(ring, 3);
        m.set(0, 1, ring.c(3).pow(2));
        m.set(0, 2, -(ring.c(2) * ring.c(3)));
        assert!(in_h(&check_stab(&m).unwrap()));
        // T_{1,2,3}(1) = E + c3 E12 - c2 E13
        let m = Mat::identity(ring, 3)
            .add(&unit_matrix(ring, 3, 1, 2).unwrap().scale(&ring.c(3)).unwrap())
            .unwrap()
            .sub(&unit_matrix(ring, 3, 1, 3).unwrap().scale(&ring.c(2)).unwrap())
            .unwrap();
        assert!(!in_h(&check_stab(&m).unwrap()));
    }
}
