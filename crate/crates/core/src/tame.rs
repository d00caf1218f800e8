//! Tame generators `T_{i,j,k}(a)` and `S_{i,j}(a)` of the stabilizer, words
//! over them, the 2×2 stabilizer `{E + aX}`, and the Cohn matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::ring::{Mode, RingDescriptor, RingElement};
use crate::stab::{rho, x_matrix, StabMatrix};

/// The admissible `(i, j, k)` for `T` and `(i, j)` for `S`.
pub const T_SHAPES: [(usize, usize, usize); 3] = [(1, 2, 3), (2, 1, 3), (3, 1, 2)];
pub const S_SHAPES: [(usize, usize); 3] = [(1, 2), (1, 3), (2, 3)];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TameToken {
    /// `E + a c_k E_ij - a c_j E_ik`
    T { i: usize, j: usize, k: usize, a: RingElement },
    /// `E + a c_i c_j E_ii - a c_i² E_ij + a c_j² E_ji - a c_i c_j E_jj`
    S { i: usize, j: usize, a: RingElement },
}

impl TameToken {
    pub fn param(&self) -> &RingElement {
        match self {
            TameToken::T { a, .. } | TameToken::S { a, .. } => a,
        }
    }

    pub fn with_param(&self, a: RingElement) -> TameToken {
        match *self {
            TameToken::T { i, j, k, .. } => TameToken::T { i, j, k, a },
            TameToken::S { i, j, .. } => TameToken::S { i, j, a },
        }
    }

    /// Both families are one-parameter subgroups, so the inverse negates `a`.
    pub fn inverse(&self) -> TameToken {
        self.with_param(-self.param())
    }

    pub fn validate(&self) -> Result<()> {
        let nvars = self.param().ring().nvars;
        if nvars != 3 {
            return Err(Error::ModeMismatch(format!("generators need a ring in 3 variables, got {nvars}")));
        }
        let in_range = |x: usize| (1..=3).contains(&x);
        match *self {
            TameToken::T { i, j, k, .. } => {
                if !(in_range(i) && in_range(j) && in_range(k)) || i == j || i == k || j >= k {
                    return Err(Error::IndexConstraint(format!("T({i},{j},{k}) needs i ∉ {{j,k}} and j < k")));
                }
            }
            TameToken::S { i, j, .. } => {
                if !(in_range(i) && in_range(j)) || i >= j {
                    return Err(Error::IndexConstraint(format!("S({i},{j}) needs i < j")));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self) -> Result<StabMatrix> {
        match self {
            TameToken::T { i, j, k, a } => gen_t(*i, *j, *k, a),
            TameToken::S { i, j, a } => gen_s(*i, *j, a),
        }
    }

    pub fn is_t(&self) -> bool {
        matches!(self, TameToken::T { .. })
    }
}

impl std::fmt::Display for TameToken {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TameToken::T { i, j, k, a } => write!(f, "T({i},{j},{k}; {a})"),
            TameToken::S { i, j, a } => write!(f, "S({i},{j}; {a})"),
        }
    }
}

/// `T_{i,j,k}(a)`.
pub fn gen_t(i: usize, j: usize, k: usize, a: &RingElement) -> Result<StabMatrix> {
    TameToken::T { i, j, k, a: a.clone() }.validate()?;
    let ring = *a.ring();
    let mut m = Mat::identity(ring, 3);
    m.set(i - 1, j - 1, a * &ring.c(k));
    m.set(i - 1, k - 1, -(a * &ring.c(j)));
    Ok(StabMatrix::certified_unchecked(m))
}

/// `S_{i,j}(a)`.
pub fn gen_s(i: usize, j: usize, a: &RingElement) -> Result<StabMatrix> {
    TameToken::S { i, j, a: a.clone() }.validate()?;
    let ring = *a.ring();
    let (ci, cj) = (ring.c(i), ring.c(j));
    let cij = a * &(&ci * &cj);
    let mut m = Mat::identity(ring, 3);
    m.set(i - 1, i - 1, &ring.one() + &cij);
    m.set(i - 1, j - 1, -(a * &(&ci * &ci)));
    m.set(j - 1, i - 1, a * &(&cj * &cj));
    m.set(j - 1, j - 1, &ring.one() - &cij);
    Ok(StabMatrix::certified_unchecked(m))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TameWord {
    ring: RingDescriptor,
    letters: Vec<TameToken>,
}

#[derive(Serialize, Deserialize)]
struct TokenDoc {
    kind: String,
    i: usize,
    j: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    k: Option<usize>,
    a: String,
}

impl TameWord {
    pub fn new(ring: RingDescriptor, letters: Vec<TameToken>) -> Result<Self> {
        for t in &letters {
            if t.param().ring() != &ring {
                return Err(Error::RingMismatch { left: ring.to_string(), right: t.param().ring().to_string() });
            }
            t.validate()?;
        }
        Ok(TameWord { ring, letters })
    }

    pub fn empty(ring: RingDescriptor) -> Self {
        TameWord { ring, letters: Vec::new() }
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn letters(&self) -> &[TameToken] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The word for the inverse product.
    pub fn inverse(&self) -> TameWord {
        TameWord { ring: self.ring, letters: self.letters.iter().rev().map(TameToken::inverse).collect() }
    }

    pub fn concat(&self, other: &TameWord) -> TameWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        TameWord { ring: self.ring, letters }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("plain data serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let docs: Vec<TokenDoc> = self
            .letters
            .iter()
            .map(|t| match t {
                TameToken::T { i, j, k, a } => {
                    TokenDoc { kind: "T".into(), i: *i, j: *j, k: Some(*k), a: a.to_string() }
                }
                TameToken::S { i, j, a } => TokenDoc { kind: "S".into(), i: *i, j: *j, k: None, a: a.to_string() },
            })
            .collect();
        serde_json::to_value(docs).expect("plain data serializes")
    }

    pub fn from_json(text: &str, ring: RingDescriptor) -> Result<Self> {
        let docs: Vec<TokenDoc> = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        let mut letters = Vec::with_capacity(docs.len());
        for d in docs {
            let a = ring.parse(&d.a)?;
            let token = match (d.kind.as_str(), d.k) {
                ("T", Some(k)) => TameToken::T { i: d.i, j: d.j, k, a },
                ("S", None) => TameToken::S { i: d.i, j: d.j, a },
                ("T", None) => return Err(Error::Document("T token needs \"k\"".into())),
                ("S", Some(_)) => return Err(Error::Document("S token takes no \"k\"".into())),
                (other, _) => return Err(Error::Document(format!("unknown token kind {other:?}"))),
            };
            letters.push(token);
        }
        TameWord::new(ring, letters)
    }
}

impl std::fmt::Display for TameWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "E");
        }
        let parts: Vec<String> = self.letters.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" · "))
    }
}

/// The ordered product of the letters; `E` for the empty word.
pub fn eval_word(w: &TameWord) -> Result<StabMatrix> {
    let mut acc = StabMatrix::identity(w.ring);
    for t in &w.letters {
        acc = acc.mul(&t.eval()?)?;
    }
    Ok(acc)
}

/// A random ring element: one or two terms, coefficients in `[-bound, bound]`,
/// monomials of total degree at most 2. Negative exponents only in Laurent
/// mode.
pub fn random_element<R: Rng>(rng: &mut R, ring: RingDescriptor, bound: i64) -> RingElement {
    let bound = bound.max(1);
    let nterms = rng.gen_range(1..=2);
    let mut out = ring.zero();
    for _ in 0..nterms {
        let coeff = rng.gen_range(-bound..=bound);
        let mut exp = vec![0i32; ring.nvars];
        let degree = rng.gen_range(0..=2);
        for _ in 0..degree {
            let v = rng.gen_range(0..ring.nvars);
            let step = if ring.mode == Mode::Laurent && rng.gen_bool(0.3) { -1 } else { 1 };
            exp[v] += step;
        }
        out = &out + &ring.monomial(coeff, &exp);
    }
    out
}

/// A random nonzero ring element, as [`random_element`].
pub fn random_nonzero<R: Rng>(rng: &mut R, ring: RingDescriptor, bound: i64) -> RingElement {
    loop {
        let e = random_element(rng, ring, bound);
        if !e.is_zero() {
            return e;
        }
    }
}

/// A random letter: a uniform shape among the six families and a random
/// parameter.
pub fn random_token<R: Rng>(rng: &mut R, ring: RingDescriptor, coeff_bound: i64) -> TameToken {
    let a = random_element(rng, ring, coeff_bound);
    let pick = rng.gen_range(0..T_SHAPES.len() + S_SHAPES.len());
    if pick < T_SHAPES.len() {
        let (i, j, k) = T_SHAPES[pick];
        TameToken::T { i, j, k, a }
    } else {
        let (i, j) = S_SHAPES[pick - T_SHAPES.len()];
        TameToken::S { i, j, a }
    }
}

/// A deterministic random word of the given length.
pub fn sample_tame(ring: RingDescriptor, seed: u64, length: usize, coeff_bound: i64) -> TameWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let letters = (0..length).map(|_| random_token(&mut rng, ring, coeff_bound)).collect();
    TameWord { ring, letters }
}

/// Every admissible token shape with parameter `a`.
pub fn all_tokens(a: &RingElement) -> Vec<TameToken> {
    let mut out: Vec<TameToken> =
        T_SHAPES.iter().map(|&(i, j, k)| TameToken::T { i, j, k, a: a.clone() }).collect();
    out.extend(S_SHAPES.iter().map(|&(i, j)| TameToken::S { i, j, a: a.clone() }));
    out
}

fn require_two_vars(ring: &RingDescriptor) -> Result<()> {
    if ring.nvars != 2 {
        return Err(Error::ModeMismatch(format!("the 2x2 stabilizer lives over 2 variables, got {ring}")));
    }
    Ok(())
}

/// `E + aX`, the general element of the stabilizer of `(c1, c2)` in `GL(2, Λ₂)`.
pub fn stab2(a: &RingElement) -> Result<Mat<RingElement>> {
    let ring = *a.ring();
    require_two_vars(&ring)?;
    Mat::identity(ring, 2).add(&x_matrix(ring).scale(a)?)
}

/// Recover `a` from `M = E + aX`. Rejects matrices that do not fix
/// `(c1, c2)`, have determinant other than 1, or are not of that shape.
pub fn stab2_param(m: &Mat<RingElement>) -> Result<RingElement> {
    let ring = *m.ring();
    require_two_vars(&ring)?;
    if m.nrows() != 2 || m.ncols() != 2 {
        return Err(Error::DimensionMismatch(format!("expected 2x2, got {}x{}", m.nrows(), m.ncols())));
    }
    let c = vec![ring.c(1), ring.c(2)];
    let image = m.apply_to_column(&c)?;
    if image != c {
        return Err(Error::NotStabilizing {
            defect: image.iter().zip(&c).map(|(x, y)| (x - y).to_string()).collect(),
        });
    }
    let det = m.det()?;
    if !det.is_one() {
        return Err(Error::NotInvertible { det: det.to_string() });
    }
    let c1c2 = &ring.c(1) * &ring.c(2);
    let top = m.get(0, 0) - &ring.one();
    let a = top
        .divide_exact(&c1c2)
        .map_err(|_| Error::NotInStab2 { row: 1, col: 1, witness: m.get(0, 0).to_string() })?;
    let expected = stab2(&a)?;
    for i in 0..2 {
        for j in 0..2 {
            if m.get(i, j) != expected.get(i, j) {
                return Err(Error::NotInStab2 { row: i + 1, col: j + 1, witness: m.get(i, j).to_string() });
            }
        }
    }
    Ok(a)
}

/// The matrix `[[1 + a c2, -a c1], [b c2, 1 - b c1]]`; every matrix fixing
/// `(c1, c2)` has this form.
pub fn stab2_general(a: &RingElement, b: &RingElement) -> Result<Mat<RingElement>> {
    let ring = *a.ring();
    require_two_vars(&ring)?;
    let (c1, c2) = (ring.c(1), ring.c(2));
    Mat::from_rows(
        ring,
        vec![
            vec![&ring.one() + &(a * &c2), -(a * &c1)],
            vec![b * &c2, &ring.one() - &(b * &c1)],
        ],
    )
}

fn is_triangular(m: &Mat<RingElement>) -> bool {
    m.get(0, 1).is_zero() || m.get(1, 0).is_zero()
}

/// Whether `ρ` of a single generator is triangular, hence lies in `GE(2, Λ₂)`.
pub fn image_is_triangular(token: &TameToken) -> Result<bool> {
    let b = rho(&token.eval()?)?;
    Ok(is_triangular(b.matrix()))
}

/// `[[1 + a1 a2, -a1²], [a2², 1 - a1 a2]]` over a polynomial ring in at
/// least two variables.
pub fn cohn_matrix(ring: RingDescriptor) -> Result<Mat<RingElement>> {
    if ring.mode != Mode::Polynomial || ring.nvars < 2 {
        return Err(Error::ModeMismatch(format!("the Cohn matrix needs polynomial mode with 2+ variables, got {ring}")));
    }
    let (a1, a2) = (ring.var(1), ring.var(2));
    let a12 = &a1 * &a2;
    Mat::from_rows(
        ring,
        vec![
            vec![&ring.one() + &a12, -(&a1 * &a1)],
            vec![&a2 * &a2, &ring.one() - &a12],
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stab::{check_stab, in_scheme, residues};

    fn rings() -> [RingDescriptor; 2] {
        [RingDescriptor::polynomial(3), RingDescriptor::laurent(3)]
    }

    #[test]
    fn t_generator_examples() {
        for ring in rings() {
            let t = gen_t(3, 1, 2, &ring.constant(-1)).unwrap();
            let mut expected = Mat::identity(ring, 3);
            expected.set(2, 0, -ring.c(2));
            expected.set(2, 1, ring.c(1));
            assert_eq!(t.matrix(), &expected);
            assert!(gen_t(1, 2, 3, &ring.zero()).unwrap().matrix().is_identity());
            assert!(matches!(gen_t(1, 1, 2, &ring.one()), Err(Error::IndexConstraint(_))));
            assert!(matches!(gen_t(1, 3, 2, &ring.one()), Err(Error::IndexConstraint(_))));
        }
    }

    #[test]
    fn generators_are_certified_with_det_one() {
        for ring in rings() {
            let a = ring.parse("a1*a3 - 2*a2 + 1").unwrap();
            for t in all_tokens(&a) {
                let m = t.eval().unwrap();
                assert!(check_stab(m.matrix()).is_ok(), "{t}");
                assert!(m.matrix().det().unwrap().is_one(), "{t}");
                let inv = t.inverse().eval().unwrap();
                assert!(m.mul(&inv).unwrap().matrix().is_identity(), "{t}");
            }
        }
    }

    #[test]
    fn s12_is_additive() {
        for ring in rings() {
            let a = ring.parse("a1 - 1").unwrap();
            let b = ring.parse("3*a3").unwrap();
            let ab = gen_s(1, 2, &a).unwrap().mul(&gen_s(1, 2, &b).unwrap()).unwrap();
            assert_eq!(ab, gen_s(1, 2, &(&a + &b)).unwrap());
            assert!(gen_s(1, 2, &ring.zero()).unwrap().matrix().is_identity());
        }
    }

    #[test]
    fn s23_image() {
        for ring in rings() {
            let r2 = ring.with_nvars(2);
            let a = ring.parse("a1 + a2").unwrap();
            let b = rho(&gen_s(2, 3, &a).unwrap()).unwrap();
            let d = -(a.restrict(2).unwrap() * r2.c(1) * r2.c(2).pow(2));
            let expected = Mat::from_rows(r2, vec![vec![r2.one(), r2.zero()], vec![d, r2.one()]]).unwrap();
            assert_eq!(b.matrix(), &expected);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        for ring in rings() {
            assert!(eval_word(&sample_tame(ring, 1, 0, 2)).unwrap().matrix().is_identity());
            let w1 = sample_tame(ring, 42, 5, 2);
            let w2 = sample_tame(ring, 42, 5, 2);
            assert_eq!(w1, w2);
            assert_eq!(w1.len(), 5);
            assert_ne!(w1, sample_tame(ring, 43, 5, 2));
        }
    }

    #[test]
    fn sampled_params_respect_mode_and_bound() {
        let ring = RingDescriptor::polynomial(3);
        let w = sample_tame(ring, 9, 50, 3);
        for t in w.letters() {
            for (e, c) in t.param().terms() {
                assert!(e.iter().all(|&x| x >= 0));
                assert!(e.iter().map(|x| x.abs()).sum::<i32>() <= 4);
                assert!(c.numer().magnitude() <= &num_bigint::BigUint::from(6u32));
            }
        }
    }

    #[test]
    fn small_word_stabilizes() {
        for ring in rings() {
            let w = TameWord::new(
                ring,
                vec![
                    TameToken::T { i: 3, j: 1, k: 2, a: ring.one() },
                    TameToken::S { i: 1, j: 2, a: ring.one() },
                ],
            )
            .unwrap();
            let m = eval_word(&w).unwrap();
            assert!(check_stab(m.matrix()).is_ok());
            assert!(eval_word(&w.concat(&w.inverse())).unwrap().matrix().is_identity());
        }
    }

    #[test]
    fn word_json_round_trip() {
        let ring = RingDescriptor::laurent(3);
        let w = TameWord::new(
            ring,
            vec![
                TameToken::T { i: 3, j: 1, k: 2, a: ring.constant(-1) },
                TameToken::S { i: 1, j: 2, a: ring.var(1) },
            ],
        )
        .unwrap();
        let text = w.to_json();
        assert_eq!(text, r#"[{"kind":"T","i":3,"j":1,"k":2,"a":"-1"},{"kind":"S","i":1,"j":2,"a":"a1"}]"#);
        assert_eq!(TameWord::from_json(&text, ring).unwrap(), w);
        assert!(TameWord::from_json(r#"[{"kind":"T","i":1,"j":2,"a":"1"}]"#, ring).is_err());
    }

    #[test]
    fn stab2_examples() {
        for r2 in [RingDescriptor::polynomial(2), RingDescriptor::laurent(2)] {
            assert!(stab2(&r2.zero()).unwrap().is_identity());
            assert!(stab2_param(&Mat::identity(r2, 2)).unwrap().is_zero());
            let a = r2.parse("a1 - 2*a2").unwrap();
            let b = r2.parse("a2^2").unwrap();
            let prod = stab2(&a).unwrap().mul(&stab2(&b).unwrap()).unwrap();
            assert_eq!(prod, stab2(&(&a + &b)).unwrap());
            assert_eq!(stab2_param(&stab2(&a).unwrap()).unwrap(), a);
            // The general fixing shape with a ≠ b c1/c2 has det 1 + a c2 - b c1.
            let m = stab2_general(&r2.one(), &r2.zero()).unwrap();
            assert!(matches!(stab2_param(&m), Err(Error::NotInvertible { .. })));
            // With a = x c1, b = x c2 the determinant is 1 and the shape matches.
            let x = r2.parse("a1 + 3").unwrap();
            let m = stab2_general(&(&x * &r2.c(1)), &(&x * &r2.c(2))).unwrap();
            assert_eq!(stab2_param(&m).unwrap(), x);
            let t = crate::matrix::transvection(2, 1, 2, &r2.one()).unwrap();
            assert!(matches!(stab2_param(&t), Err(Error::NotStabilizing { .. })));
        }
    }

    #[test]
    fn laurent_unit_determinant_fixers_exist_outside_the_family() {
        // [[1, 0], [1 - a2, a1]] fixes (a1 - 1, a2 - 1) with det a1, a unit.
        let r2 = RingDescriptor::laurent(2);
        let m = stab2_general(&r2.zero(), &(-r2.one())).unwrap();
        assert_eq!(m.get(1, 1), &r2.var(1));
        assert!(m.det().unwrap().is_unit());
        assert!(matches!(stab2_param(&m), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn triangular_images() {
        for ring in rings() {
            let r2 = ring.with_nvars(2);
            let a = ring.parse("a2 + 2").unwrap();
            let a2 = a.restrict(2).unwrap();
            let t312 = TameToken::T { i: 3, j: 1, k: 2, a: a.clone() };
            assert!(image_is_triangular(&t312).unwrap());
            assert_eq!(rho(&t312.eval().unwrap()).unwrap().matrix().get(0, 1), &-&a2);
            assert!(image_is_triangular(&TameToken::S { i: 1, j: 2, a: a.clone() }).unwrap());
            let t123 = TameToken::T { i: 1, j: 2, k: 3, a: a.clone() };
            assert!(image_is_triangular(&t123).unwrap());
            assert_eq!(residues(&t123.eval().unwrap()).unwrap().delta, &a2 * &r2.c(2).pow(2));
        }
    }

    #[test]
    fn cohn_examples() {
        let r2 = RingDescriptor::polynomial(2);
        let m = cohn_matrix(r2).unwrap();
        assert!(m.det().unwrap().is_one());
        assert!(in_scheme(&m));
        assert!(matches!(cohn_matrix(RingDescriptor::laurent(2)), Err(Error::ModeMismatch(_))));
        assert!(matches!(cohn_matrix(RingDescriptor::polynomial(1)), Err(Error::ModeMismatch(_))));
    }
}
