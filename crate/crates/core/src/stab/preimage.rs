//! Preimages under `ρ`: the explicit candidate built from `Δ₂`-splits of the
//! residues, and the staged construction that reduces a general scheme
//! matrix to a single transvection `t21(μ c1 c2)`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{check_stab, residues::CongruenceMatrix, rho, ResidueQuadruple, StabMatrix};
use crate::error::{Error, Result};
use crate::matrix::{transvection, Mat, MatrixDoc};
use crate::ring::{delta_split_linear, delta_split_quadratic, QuadraticSplit, RingDescriptor, RingElement};
use crate::tame::{all_tokens, TameToken, TameWord};

/// Residues written through their `Δ₂`-splits:
/// `β = β₁c1 + β₂c2`, `γ = γ₁c1 + γ₂c2`, `δ = δ₁₁c1² + (δ₁₂ + δ′₁₂)c1c2 + δ₂₂c2²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splits {
    pub alpha: RingElement,
    pub beta1: RingElement,
    pub beta2: RingElement,
    pub gamma1: RingElement,
    pub gamma2: RingElement,
    pub d: QuadraticSplit,
}

impl Splits {
    /// The deterministic split of a scheme matrix.
    pub fn canonical(b: &CongruenceMatrix) -> Result<Splits> {
        let q = b.residues();
        let (beta1, beta2) = delta_split_linear(&q.beta)?;
        let (gamma1, gamma2) = delta_split_linear(&q.gamma)?;
        let d = delta_split_quadratic(&q.delta)?;
        Ok(Splits { alpha: q.alpha, beta1, beta2, gamma1, gamma2, d })
    }

    pub fn ring(&self) -> &RingDescriptor {
        self.alpha.ring()
    }

    pub fn residues(&self) -> ResidueQuadruple {
        let ring = *self.ring();
        let (c1, c2) = (ring.c(1), ring.c(2));
        ResidueQuadruple {
            alpha: self.alpha.clone(),
            beta: &(&self.beta1 * &c1) + &(&self.beta2 * &c2),
            gamma: &(&self.gamma1 * &c1) + &(&self.gamma2 * &c2),
            delta: self.d.reconstruct(),
        }
    }

    /// The 2×2 matrix these splits describe.
    pub fn to_matrix(&self) -> Mat<RingElement> {
        self.residues().to_matrix()
    }

    fn embedded(&self) -> Result<[RingElement; 9]> {
        let ring3 = self.ring().with_nvars(3);
        let up = |x: &RingElement| x.embed(ring3);
        Ok([
            up(&self.alpha)?,
            up(&self.beta1)?,
            up(&self.beta2)?,
            up(&self.gamma1)?,
            up(&self.gamma2)?,
            up(&self.d.d11)?,
            up(&self.d.d12)?,
            up(&self.d.d12_prime)?,
            up(&self.d.d22)?,
        ])
    }
}

/// A 3×3 matrix fixing the column, with `det = det(B) + r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreimageCandidate {
    pub matrix: Mat<RingElement>,
    pub r: RingElement,
}

/// The candidate
///
/// ```text
/// | 1 + γ₂c2 + δ′₁₂c3   -γ₂c1 + δ₂₂c3      -δ′₁₂c1 - δ₂₂c2 |
/// | -γ₁c2 - δ₁₁c3       1 + γ₁c1 - δ₁₂c3   δ₁₁c1 + δ₁₂c2   |
/// | -αc2 - β₁c3         αc1 - β₂c3         1 + β₁c1 + β₂c2 |
/// ```
///
/// over `Λ₃`.
pub fn candidate_from_splits(s: &Splits) -> Result<PreimageCandidate> {
    let [al, b1, b2, g1, g2, d11, d12, d12p, d22] = s.embedded()?;
    let ring = *al.ring();
    let (c1, c2, c3) = (ring.c(1), ring.c(2), ring.c(3));
    let one = ring.one();
    let rows = vec![
        vec![
            &(&one + &(&g2 * &c2)) + &(&d12p * &c3),
            &(&d22 * &c3) - &(&g2 * &c1),
            -(&(&d12p * &c1) + &(&d22 * &c2)),
        ],
        vec![
            -(&(&g1 * &c2) + &(&d11 * &c3)),
            &(&one + &(&g1 * &c1)) - &(&d12 * &c3),
            &(&d11 * &c1) + &(&d12 * &c2),
        ],
        vec![
            -(&(&al * &c2) + &(&b1 * &c3)),
            &(&al * &c1) - &(&b2 * &c3),
            &(&one + &(&b1 * &c1)) + &(&b2 * &c2),
        ],
    ];
    Ok(PreimageCandidate { matrix: Mat::from_rows(ring, rows)?, r: determinant_defect(s)? })
}

/// The twelve-term `r = det(C) - det(B)` for the candidate `C` of `s`.
pub fn determinant_defect(s: &Splits) -> Result<RingElement> {
    let [_, b1, b2, g1, g2, d11, d12, d12p, d22] = s.embedded()?;
    let ring = *b1.ring();
    let (c1, c2, c3) = (ring.c(1), ring.c(2), ring.c(3));
    let c3sq = c3.pow(2);
    let terms = [
        &d12p * &c3,
        &g1 * &(&d12p * &(&c1 * &c3)),
        -(&d12 * &c3),
        -(&d12p * &(&d12 * &c3sq)),
        -(&g2 * &(&d12 * &(&c2 * &c3))),
        &b2 * &(&d12p * &(&c2 * &c3)),
        -(&b1 * &(&d12 * &(&c1 * &c3))),
        -(&b1 * &(&d22 * &(&c2 * &c3))),
        &g1 * &(&d22 * &(&c2 * &c3)),
        -(&g2 * &(&d11 * &(&c1 * &c3))),
        &d11 * &(&d22 * &c3sq),
        &b2 * &(&d11 * &(&c1 * &c3)),
    ];
    Ok(terms.iter().fold(ring.zero(), |acc, t| &acc + t))
}

/// The candidate for the canonical split of `b`.
pub fn build_preimage_candidate(b: &CongruenceMatrix) -> Result<PreimageCandidate> {
    candidate_from_splits(&Splits::canonical(b)?)
}

/// Limits for the search for a preimage of `t21(μ c1 c2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Longest tame word tried.
    pub max_word_len: usize,
    /// Constant word parameters range over `±1, …, ±coeff_bound`.
    pub coeff_bound: i64,
    /// Candidate splits `δ₁₂ = j`, `δ′₁₂ = μ - j` for `|j| ≤ split_bound`.
    pub split_bound: i64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_word_len: 4, coeff_bound: 2, split_bound: 2 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    /// The candidate for `B` itself.
    Direct,
    /// `B₁ = B|_{c2 = 0}` and its candidate.
    Specialize,
    /// `B′ = B₁⁻¹B`.
    Congruence,
    /// `B″ = B′ t21(-μ c1 c2)`.
    Transvection,
    /// The candidate for `B″`.
    Candidate,
    /// A preimage of `t21(μ c1 c2)`.
    TransvectionPreimage,
}

impl Stage {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Stage::Direct => "direct",
            Stage::Specialize => "specialize",
            Stage::Congruence => "congruence",
            Stage::Transvection => "transvection",
            Stage::Candidate => "candidate",
            Stage::TransvectionPreimage => "transvection-preimage",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PreimageStatus {
    Success,
    Obstructed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreimageReport {
    pub status: PreimageStatus,
    /// Where the construction finished or stopped.
    pub stage: Stage,
    pub preimage: Option<StabMatrix>,
    /// The leftover `μ`, or a non-unit determinant.
    pub obstruction: Option<RingElement>,
    /// `ρ(preimage) = B` was recomputed and holds.
    pub rho_verified: bool,
    pub transcript: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub status: PreimageStatus,
    pub stage: Stage,
    pub obstruction: Option<String>,
    pub preimage: Option<MatrixDoc>,
    pub rho_verified: bool,
    pub transcript: Vec<String>,
}

impl PreimageReport {
    pub fn is_success(&self) -> bool {
        self.status == PreimageStatus::Success
    }

    pub fn to_doc(&self) -> ReportDoc {
        ReportDoc {
            status: self.status,
            stage: self.stage,
            obstruction: self.obstruction.as_ref().map(ToString::to_string),
            preimage: self.preimage.as_ref().map(|m| m.matrix().to_doc()),
            rho_verified: self.rho_verified,
            transcript: self.transcript.clone(),
        }
    }

    fn obstructed(stage: Stage, obstruction: RingElement, transcript: Vec<String>) -> Self {
        PreimageReport {
            status: PreimageStatus::Obstructed,
            stage,
            preimage: None,
            obstruction: Some(obstruction),
            rho_verified: false,
            transcript,
        }
    }
}

fn scheme(m: Mat<RingElement>, what: &str) -> Result<CongruenceMatrix> {
    CongruenceMatrix::new(m).map_err(|e| Error::NotInScheme(format!("{what}: {e}")))
}

/// Certify a candidate whose determinant is a unit.
fn certify_candidate(c: &PreimageCandidate) -> Option<StabMatrix> {
    let det = c.matrix.det().ok()?;
    if det.is_unit() {
        check_stab(&c.matrix).ok()
    } else {
        None
    }
}

/// A preimage of `t21(μ c1 c2)` within the budget, with a description of
/// how it was found.
///
/// Tried in order: candidates for the splits `δ₁₂ = j`, `δ′₁₂ = μ - j`,
/// whose determinant is `1 + (μ - 2j)c3 - j(μ - j)c3²`; then tame words with
/// constant parameters, matched in the middle on their `ρ`-images.
pub fn find_transvection_preimage(
    mu: &RingElement,
    budget: &SearchBudget,
) -> Result<Option<(StabMatrix, String)>> {
    let ring2 = *mu.ring();
    let ring3 = ring2.with_nvars(3);
    let target = transvection(2, 2, 1, &(mu * &(&ring2.c(1) * &ring2.c(2))))?;
    if mu.is_zero() {
        return Ok(Some((StabMatrix::identity(ring3), "trivial".into())));
    }

    for j in -budget.split_bound..=budget.split_bound {
        let jj = ring2.constant(j);
        let s = Splits {
            alpha: ring2.zero(),
            beta1: ring2.zero(),
            beta2: ring2.zero(),
            gamma1: ring2.zero(),
            gamma2: ring2.zero(),
            d: QuadraticSplit { d11: ring2.zero(), d12: jj.clone(), d12_prime: mu - &jj, d22: ring2.zero() },
        };
        let cand = candidate_from_splits(&s)?;
        if let Some(a) = certify_candidate(&cand) {
            if rho(&a)?.matrix() == &target {
                return Ok(Some((a, format!("split δ12 = {j}, δ12' = {}", mu - &jj))));
            }
        }
    }

    if let Some(word) = search_words(&target, ring3, budget)? {
        let a = crate::tame::eval_word(&word)?;
        if rho(&a)?.matrix() == &target {
            return Ok(Some((a, format!("tame word {word}"))));
        }
    }
    Ok(None)
}

fn search_words(target: &Mat<RingElement>, ring3: RingDescriptor, budget: &SearchBudget) -> Result<Option<TameWord>> {
    if budget.max_word_len == 0 || budget.coeff_bound < 1 {
        return Ok(None);
    }
    let mut letters: Vec<(TameToken, Mat<RingElement>)> = Vec::new();
    for v in 1..=budget.coeff_bound {
        for a in [ring3.constant(v), ring3.constant(-v)] {
            for t in all_tokens(&a) {
                let image = rho(&t.eval()?)?.into_matrix();
                if !image.is_identity() {
                    letters.push((t, image));
                }
            }
        }
    }
    let ring2 = *target.ring();
    let left_len = budget.max_word_len.div_ceil(2);
    let right_len = budget.max_word_len / 2;

    // Right halves, keyed by image; the first (shortest) word wins.
    let mut right: HashMap<Mat<RingElement>, Vec<usize>> = HashMap::new();
    let mut layer: Vec<(Vec<usize>, Mat<RingElement>)> = vec![(Vec::new(), Mat::identity(ring2, 2))];
    for depth in 0..=right_len {
        for (w, m) in &layer {
            right.entry(m.clone()).or_insert_with(|| w.clone());
        }
        if depth == right_len {
            break;
        }
        layer = extend(&layer, &letters)?;
    }

    let mut layer: Vec<(Vec<usize>, Mat<RingElement>)> = vec![(Vec::new(), Mat::identity(ring2, 2))];
    for depth in 0..=left_len {
        for (w, m) in &layer {
            let need = m.inverse()?.mul(target)?;
            if let Some(r) = right.get(&need) {
                let tokens = w.iter().chain(r).map(|&i| letters[i].0.clone()).collect();
                return Ok(Some(TameWord::new(ring3, tokens)?));
            }
        }
        if depth == left_len {
            break;
        }
        layer = extend(&layer, &letters)?;
    }
    Ok(None)
}

fn extend(
    layer: &[(Vec<usize>, Mat<RingElement>)],
    letters: &[(TameToken, Mat<RingElement>)],
) -> Result<Vec<(Vec<usize>, Mat<RingElement>)>> {
    let mut out = Vec::with_capacity(layer.len() * letters.len());
    for (w, m) in layer {
        for (i, (_, img)) in letters.iter().enumerate() {
            let mut w2 = w.clone();
            w2.push(i);
            out.push((w2, m.mul(img)?));
        }
    }
    Ok(out)
}

/// `δ₁₂` of the canonical split of `B′`: the coefficient `μ` of the
/// `c1 c2` transvection left over by the staged construction.
fn congruence_coefficient(bp: &CongruenceMatrix) -> Result<RingElement> {
    Ok(Splits::canonical(bp)?.d.d12)
}

/// The `μ` that the staged construction reaches for `b`.
pub fn transvection_coefficient(b: &CongruenceMatrix) -> Result<RingElement> {
    let b1 = scheme(b.matrix().specialize(2)?, "specialized matrix")?;
    let bp = scheme(b1.matrix().inverse()?.mul(b.matrix())?, "B1^-1 B")?;
    congruence_coefficient(&bp)
}

/// Build `A ∈ G` with `ρ(A) = B`, or report where the construction stops.
///
/// 0. If the candidate for `B` has a unit determinant it is the answer.
/// 1. `B₁ = B|_{c2 = 0}` has `r = 0`, so its candidate `C₁` lies in `G`.
/// 2. `B′ = B₁⁻¹B` is congruent to `E` modulo `c2`.
/// 3. With `μ = δ₁₂(B′)`, `B″ = B′ t21(-μ c1 c2)`.
/// 4. The candidate `C″` of `B″` has `r = 0`.
/// 5. `A = C₁ C″ T` where `ρ(T) = t21(μ c1 c2)`; `T` is searched for
///    within `budget` unless `μ = 0`.
pub fn preimage(b: &CongruenceMatrix, budget: &SearchBudget) -> Result<PreimageReport> {
    let ring2 = *b.ring();
    let mut log = Vec::new();

    let direct = build_preimage_candidate(b)?;
    let det = direct.matrix.det()?;
    log.push(format!("direct: r = {}, det C = {det}", direct.r));
    if let Some(a) = certify_candidate(&direct) {
        return finish(b, a, Stage::Direct, log);
    }

    let b1 = scheme(b.matrix().specialize(2)?, "specialized matrix")?;
    let cand1 = build_preimage_candidate(&b1)?;
    log.push(format!("specialize: B1 = {}, r = {}", b1.matrix(), cand1.r));
    let Some(c1) = certify_candidate(&cand1) else {
        let det = cand1.matrix.det()?;
        log.push(format!("specialize: det C1 = {det} is not a unit"));
        return Ok(PreimageReport::obstructed(Stage::Specialize, det, log));
    };

    let bp = scheme(b1.matrix().inverse()?.mul(b.matrix())?, "B1^-1 B")?;
    log.push(format!("congruence: B' = {}", bp.matrix()));

    let mu = congruence_coefficient(&bp)?;
    let t = transvection(2, 2, 1, &-(&mu * &(&ring2.c(1) * &ring2.c(2))))?;
    let bpp = scheme(bp.matrix().mul(&t)?, "B' t")?;
    log.push(format!("transvection: mu = {mu}, B'' = {}", bpp.matrix()));

    let cand2 = build_preimage_candidate(&bpp)?;
    log.push(format!("candidate: r = {}", cand2.r));
    let Some(c2) = certify_candidate(&cand2) else {
        let det = cand2.matrix.det()?;
        log.push(format!("candidate: det C'' = {det} is not a unit"));
        return Ok(PreimageReport::obstructed(Stage::Candidate, det, log));
    };
    let partial = c1.mul(&c2)?;

    match find_transvection_preimage(&mu, budget)? {
        Some((tt, how)) => {
            log.push(format!("transvection-preimage: {how}"));
            finish(b, partial.mul(&tt)?, Stage::TransvectionPreimage, log)
        }
        None => {
            log.push(format!(
                "transvection-preimage: none for t21({mu} c1 c2) within words of length <= {}, \
                 parameters |a| <= {}, splits |j| <= {}",
                budget.max_word_len, budget.coeff_bound, budget.split_bound
            ));
            Ok(PreimageReport::obstructed(Stage::TransvectionPreimage, mu, log))
        }
    }
}

fn finish(b: &CongruenceMatrix, a: StabMatrix, stage: Stage, mut log: Vec<String>) -> Result<PreimageReport> {
    let back = rho(&a)?;
    if back != *b {
        return Err(Error::RelationFailed(format!("preimage maps to {} instead of {}", back.matrix(), b.matrix())));
    }
    log.push(format!("verified: rho(A) = B at stage {stage}"));
    Ok(PreimageReport {
        status: PreimageStatus::Success,
        stage,
        preimage: Some(a),
        obstruction: None,
        rho_verified: true,
        transcript: log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stab::in_h;
    use crate::tame::{cohn_matrix, gen_t};

    fn cm(m: Mat<RingElement>) -> CongruenceMatrix {
        CongruenceMatrix::new(m).unwrap()
    }

    #[test]
    fn identity_candidate() {
        for r2 in [RingDescriptor::polynomial(2), RingDescriptor::laurent(2)] {
            let c = build_preimage_candidate(&cm(Mat::identity(r2, 2))).unwrap();
            assert!(c.matrix.is_identity());
            assert!(c.r.is_zero());
            let rep = preimage(&cm(Mat::identity(r2, 2)), &SearchBudget::default()).unwrap();
            assert!(rep.is_success());
            assert!(rep.preimage.unwrap().matrix().is_identity());
        }
    }

    #[test]
    fn upper_transvection_candidate() {
        for r2 in [RingDescriptor::polynomial(2), RingDescriptor::laurent(2)] {
            let f = r2.parse("a1^2 - a2 + 4").unwrap();
            let b = cm(transvection(2, 1, 2, &f).unwrap());
            let c = build_preimage_candidate(&b).unwrap();
            assert!(c.r.is_zero());
            let expected = gen_t(3, 1, 2, &-f.embed(r2.with_nvars(3)).unwrap()).unwrap();
            assert_eq!(&c.matrix, expected.matrix());
            assert_eq!(rho(&expected).unwrap(), b);
        }
    }

    #[test]
    fn cohn_candidate() {
        let r2 = RingDescriptor::polynomial(2);
        let b = cm(cohn_matrix(r2).unwrap());
        let c = build_preimage_candidate(&b).unwrap();
        let r3 = r2.with_nvars(3);
        let expected = Mat::from_rows(
            r3,
            vec![
                vec![r3.parse("1 - a1*a2").unwrap(), r3.parse("a1^2 + a3").unwrap(), r3.parse("-a2").unwrap()],
                vec![r3.zero(), r3.one(), r3.zero()],
                vec![
                    r3.parse("a1^2*a2").unwrap(),
                    r3.parse("-a1^3 - a1*a3").unwrap(),
                    r3.parse("1 + a1*a2").unwrap(),
                ],
            ],
        )
        .unwrap();
        assert_eq!(c.matrix, expected);
        assert!(c.r.is_zero());
        assert!(c.matrix.det().unwrap().is_one());

        let rep = preimage(&b, &SearchBudget::default()).unwrap();
        assert!(rep.is_success() && rep.rho_verified);
        assert_eq!(rep.stage, Stage::Direct);
        assert_eq!(rep.preimage.unwrap().matrix(), &expected);
    }

    #[test]
    fn defect_matches_determinant() {
        let r2 = RingDescriptor::laurent(2);
        let p = |s: &str| r2.parse(s).unwrap();
        let s = Splits {
            alpha: p("a1 - 3"),
            beta1: p("2"),
            beta2: p("a2"),
            gamma1: p("-1"),
            gamma2: p("a1^-1"),
            d: QuadraticSplit { d11: p("1"), d12: p("a2 + 1"), d12_prime: p("-2"), d22: p("a1") },
        };
        let c = candidate_from_splits(&s).unwrap();
        let det_b = s.to_matrix().det().unwrap().embed(r2.with_nvars(3)).unwrap();
        assert_eq!(c.matrix.det().unwrap(), &det_b + &c.r);
        assert!(check_stab(&c.matrix).is_err() || c.matrix.det().unwrap().is_unit());
        let col = c.matrix.ring().c_column();
        assert_eq!(c.matrix.apply_to_column(&col).unwrap(), col);
    }

    #[test]
    fn lower_corner_transvection() {
        // Polynomial: no preimage of t21(c1 c2) within the default budget.
        let r2 = RingDescriptor::polynomial(2);
        let b = cm(transvection(2, 2, 1, &(r2.c(1) * r2.c(2))).unwrap());
        let direct = build_preimage_candidate(&b).unwrap();
        assert_eq!(direct.r, -r2.with_nvars(3).c(3));
        let rep = preimage(&b, &SearchBudget::default()).unwrap();
        assert_eq!(rep.status, PreimageStatus::Obstructed);
        assert_eq!(rep.stage, Stage::TransvectionPreimage);
        assert!(rep.obstruction.unwrap().is_one());

        // Laurent: the split δ12 = 0, δ12' = 1 has determinant a3.
        let r2 = RingDescriptor::laurent(2);
        let b = cm(transvection(2, 2, 1, &(r2.c(1) * r2.c(2))).unwrap());
        let rep = preimage(&b, &SearchBudget::default()).unwrap();
        assert!(rep.is_success());
        assert_eq!(rep.stage, Stage::TransvectionPreimage);
    }

    #[test]
    fn report_json_shape() {
        let r2 = RingDescriptor::polynomial(2);
        let b = cm(transvection(2, 2, 1, &(r2.c(1) * r2.c(2))).unwrap());
        let rep = preimage(&b, &SearchBudget::default()).unwrap();
        let v = serde_json::to_value(rep.to_doc()).unwrap();
        assert_eq!(v["status"], "OBSTRUCTED");
        assert_eq!(v["stage"], "transvection-preimage");
        assert_eq!(v["obstruction"], "1");
        assert!(v["preimage"].is_null());
    }

    #[test]
    fn h_elements_map_to_identity() {
        let r3 = RingDescriptor::polynomial(3);
        let a = &r3.parse("a1 + 2").unwrap() * &r3.c(3);
        let m = gen_t(1, 2, 3, &a).unwrap();
        assert!(in_h(&m));
        assert!(rho(&m).unwrap().matrix().is_identity());
    }
}
