//! Randomized verification suites. Each trial draws its inputs from a
//! seeded generator, so a `(suite, trials, seed)` triple always produces the
//! same report.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::localize::LocalizedElement;
use crate::matrix::Mat;
use crate::ring::{QuadraticSplit, RingDescriptor};
use crate::stab::{
    build_preimage_candidate, candidate_from_splits, compose_residues, in_h, in_scheme, preimage, r_decompose,
    reduce, residues, residues_closed_form, rho, transvection_coefficient, CongruenceMatrix, PreimageStatus,
    SearchBudget, Splits, StabMatrix,
};
use crate::tame::{
    all_tokens, eval_word, gen_s, gen_t, image_is_triangular, random_element, random_nonzero, sample_tame, stab2,
    stab2_general, stab2_param, TameWord,
};

const MAX_RECORDED_FAILURES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Decomposition,
    Relations,
    Homomorphism,
    ClosedForm,
    DetIdentity,
    Preimage,
    Kernel,
    Stab2,
    Triangular,
    All,
}

impl Suite {
    pub const EACH: [Suite; 9] = [
        Suite::Decomposition,
        Suite::Relations,
        Suite::Homomorphism,
        Suite::ClosedForm,
        Suite::DetIdentity,
        Suite::Preimage,
        Suite::Kernel,
        Suite::Stab2,
        Suite::Triangular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Decomposition => "decomposition",
            Suite::Relations => "relations",
            Suite::Homomorphism => "homomorphism",
            Suite::ClosedForm => "closed-form",
            Suite::DetIdentity => "det-identity",
            Suite::Preimage => "preimage",
            Suite::Kernel => "kernel",
            Suite::Stab2 => "stab2",
            Suite::Triangular => "triangular",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Suite::EACH
            .iter()
            .chain(&[Suite::All])
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::EACH.iter().map(|x| x.name()).collect();
                format!("unknown suite {s:?}; expected one of {}, all", names.join(", "))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    /// The first few failure messages.
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Run one suite (or every suite for [`Suite::All`]).
pub fn run_suite(suite: Suite, trials: usize, seed: u64) -> Vec<SuiteReport> {
    if suite == Suite::All {
        return Suite::EACH.iter().map(|&s| run_one(s, trials, seed)).collect();
    }
    vec![run_one(suite, trials, seed)]
}

fn run_one(suite: Suite, trials: usize, seed: u64) -> SuiteReport {
    let check: fn(&mut ChaCha8Rng, RingDescriptor) -> Result<()> = match suite {
        Suite::Decomposition => trial_decomposition,
        Suite::Relations => trial_relations,
        Suite::Homomorphism => trial_homomorphism,
        Suite::ClosedForm => trial_closed_form,
        Suite::DetIdentity => trial_det_identity,
        Suite::Preimage => trial_preimage,
        Suite::Kernel => trial_kernel,
        Suite::Stab2 => trial_stab2,
        Suite::Triangular => trial_triangular,
        Suite::All => unreachable!("expanded by run_suite"),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport { suite, trials, passed: 0, failed: 0, failures: Vec::new() };
    for t in 0..trials {
        let ring = if t % 2 == 0 { RingDescriptor::polynomial(3) } else { RingDescriptor::laurent(3) };
        match check(&mut rng, ring) {
            Ok(()) => report.passed += 1,
            Err(e) => {
                report.failed += 1;
                if report.failures.len() < MAX_RECORDED_FAILURES {
                    report.failures.push(format!("trial {t} ({ring}): {e}"));
                }
            }
        }
    }
    report
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::RelationFailed(what()))
    }
}

/// A random word of length at most 8 and its value.
pub fn random_stab<R: Rng>(rng: &mut R, ring: RingDescriptor) -> Result<(TameWord, StabMatrix)> {
    random_stab_upto(rng, ring, 8)
}

/// A random word of length at most `max_len` and its value.
pub fn random_stab_upto<R: Rng>(rng: &mut R, ring: RingDescriptor, max_len: usize) -> Result<(TameWord, StabMatrix)> {
    let len = rng.gen_range(0..=max_len);
    let w = sample_tame(ring, rng.gen(), len, 2);
    let a = eval_word(&w)?;
    Ok((w, a))
}

fn trial_decomposition(rng: &mut ChaCha8Rng, ring: RingDescriptor) -> Result<()> {
    let g = &random_element(rng, ring, 3) * &random_element(rng, ring, 3);
    let text = g.to_string();
    ensure(ring.parse(&text)? == g, || format!("parse(format(g)) != g for {text}"))?;
    for k in 1..=3 {
        for t in 1..=3 {
            let d = g.c_adic_decompose(k, t)?;
            ensure(d.reconstruct() == g, || format!("c{k}-adic depth {t} does not reconstruct {g}"))?;
            ensure(d.heads.iter().all(|h| !h.involves(k)), || format!("c{k}-adic head involves a{k} for {g}"))?;
        }
    }
    let f = LocalizedElement::new(g.clone(), rng.gen_range(0..=1));
    let d = f.decompose(2)?;
    ensure(d.reconstruct() == f, || format!("localized decomposition does not reconstruct {f}"))?;
    let d = random_nonzero(rng, ring, 2);
    let c = ring.c(rng.gen_range(1..=3)).pow(rng.gen_range(1..=2));
    let dc = &d * &c;
    ensure(dc.divide_exact(&c)? == d, || format!("({dc}) / ({c}) != {d}"))
}

fn trial_relations(rng: &mut ChaCha8Rng, ring: RingDescriptor) -> Result<()> {
    let (w, a) = random_stab(rng, ring)?;
    let r = reduce(&a);
    ensure(r.rows().flatten().all(|e| e.denom_exp() <= 1), || format!("R({w}) has a c3^2 denominator"))?;
    let d = r_decompose(&r)?;
    ensure(d.reconstruct() == r, || format!("R({w}) does not reconstruct"))?;
    residues(&a).map(|_| ()).map_err(|e| Error::RelationFailed(format!("{w}: {e}")))
}

fn trial_closed_form(rng: &mut ChaCha8Rng, ring: RingDescriptor) -> Result<()> {
    let (w, a) = random_stab(rng, ring)?;
    let q = residues(&a)?;
    let q2 = residues_closed_form(&a)?;
    ensure(q == q2, || format!("{w}: relations give {:?}, closed form gives {:?}", q, q2))
}

fn trial_homomorphism(rng: &mut ChaCha8Rng, ring: RingDescriptor) -> Result<()> {
    // Halves of at most 4 letters keep the product within the length 8 of
    // the other suites.
    let (w1, a) = random_stab_upto(rng, ring, 4)?;
    let (w2, b) = random_stab_upto(rng, ring, 4)?;
    let ab = a.mul(&b)?;
    let (ra, rb, rab) = (rho(&a)?, rho(&b)?, rho(&ab)?);
    ensure(rab.matrix() == &ra.matrix().mul(rb.matrix())?, || format!("ρ(AB) != ρ(A)ρ(B) for {w1} ; {w2}"))?;
    // The inverse word is far cheaper than the adjugate on long products.
    let ainv = eval_word(&w1.inverse())?;
    ensure(a.mul(&ainv)?.matrix().is_identity(), || format!("inverse word of {w1} is not an inverse"))?;
    let rinv = rho(&ainv)?;
    ensure(rinv.matrix() == &ra.matrix().inverse()?, || format!("ρ(A⁻¹) != ρ(A)⁻¹ for {w1}"))?;
    let q = compose_residues(&residues(&a)?, &residues(&b)?);
    ensure(q.to_matrix() == *rab.matrix(), || format!("compose_residues disagrees for {w1} ; {w2}"))?;
    ensure(reduce(&ab) == reduce(&a).mul(&reduce(&b))?, || format!("R(AB) != R(A)R(B) for {w1} ; {w2}"))?;
    ensure(in_scheme(rab.matrix()), || format!("ρ({w1} ; {w2}) left the scheme"))
}

/// Random splits of elements of `Λ₂`; `δ₁₂` is nonzero about half the time.
fn random_splits<R: Rng>(rng: &mut R, ring2: RingDescriptor) -> Splits {
    let el = |rng: &mut R| if rng.gen_bool(0.3) { ring2.zero() } else { random_element(rng, ring2, 2) };
    Splits {
        alpha: el(rng),
        beta1: el(rng),
        beta2: el(rng),
        gamma1: el(rng),
        gamma2: el(rng),
        d: QuadraticSplit { d11: el(rng), d12: el(rng), d12_prime: el(rng), d22: el(rng) },
    }
}

fn trial_det_identity(rng: &mut ChaCha8Rng, ring: RingDescriptor) -> Result<()> {
    let ring2 = ring.with_nvars(2);
    let s = random_splits(rng, ring2);
    let c = candidate_from_splits(&s)?;
    let det_b = s.to_matrix().det()?.embed(ring)?;
    ensure(c.matrix.det()? == &det_b + &c.r, || format!("det C - det B != r for {s:?}"))?;
    let col = ring.c_column();
    ensure(c.matrix.apply_to_column(&col)? == col, || format!("candidate does not fix the column for {s:?}"))
}

/// Splits with `δ₁₂ = δ′₁₂ = 0`, `r = 0` and `det B = 1`, from one of two
/// families: `δ = d c2²` with `γ = α d c2²`, or `δ = d c1²` with `β = α d c1²`.
pub fn random_unimodular_splits<R: Rng>(rng: &mut R, ring2: RingDescriptor) -> Splits {
    let alpha = random_element(rng, ring2, 2);
    let d = random_element(rng, ring2, 2);
    let z = ring2.zero();
    let (c1, c2) = (ring2.c(1), ring2.c(2));
    if rng.gen_bool(0.5) {
        Splits {
            gamma2: &(&alpha * &d) * &c2,
            alpha,
            beta1: z.clone(),
            beta2: z.clone(),
            gamma1: z.clone(),
            d: QuadraticSplit { d11: z.clone(), d12: z.clone(), d12_prime: z, d22: d },
        }
    } else {
        Splits {
            beta1: &(&alpha * &d) * &c1,
            alpha,
            beta2: z.clone(),
            gamma1: z.clone(),
            gamma2: z.clone(),
            d: QuadraticSplit { d11: d, d12: z.clone(), d12_prime: z.clone(), d22: z },
        }
    }
}

/// A random scheme matrix: the image of a random word, or a unimodular
/// split family member.
pub fn random_scheme_matrix<R: Rng>(rng: &mut R, ring: RingDescriptor) -> Result<CongruenceMatrix> {
    if rng.gen_bool(0.5) {
        let (_, a) = random_stab(rng, ring)?;
        rho(&a)
    } else {
        CongruenceMatrix::new(random_unimodular_splits(rng, ring.with_nvars(2)).to_matrix())
    }
}

fn trial_preimage(rng: &mut ChaCha8Rng, ring: RingDescriptor) -> Result<()> {
    let s = random_unimodular_splits(rng, ring.with_nvars(2));
    let c = candidate_from_splits(&s)?;
    ensure(c.r.is_zero(), || format!("r != 0 for unimodular splits {s:?}"))?;
    let a = crate::stab::check_stab(&c.matrix)?;
    ensure(rho(&a)?.matrix() == &s.to_matrix(), || format!("ρ(C) != B for {s:?}"))?;

    let b = random_scheme_matrix(rng, ring)?;
    let mu = transvection_coefficient(&b)?;
    let rep = preimage(&b, &SearchBudget::default())?;
    match rep.status {
        PreimageStatus::Success => ensure(rep.rho_verified, || "unverified success".into()),
        PreimageStatus::Obstructed => {
            ensure(!mu.is_zero(), || format!("obstructed with μ = 0 for {}", b.matrix()))?;
            // The canonical candidate itself must at least be well formed.
            let c = build_preimage_candidate(&b)?;
            let col = ring.c_column();
            ensure(c.matrix.apply_to_column(&col)? == col, || "candidate does not fix the column".into())
        }
    }
}

/// A random element of `H`: a product of generators whose parameters carry
/// enough factors of `c3`.
pub fn random_h<R: Rng>(rng: &mut R, ring: RingDescriptor) -> Result<StabMatrix> {
    let c3 = ring.c(3);
    let c3sq = c3.pow(2);
    let mut acc = StabMatrix::identity(ring);
    for _ in 0..rng.gen_range(1..=4) {
        let a = random_element(rng, ring, 2);
        let g = match rng.gen_range(0..6) {
            0 => gen_t(1, 2, 3, &(&a * &c3))?,
            1 => gen_t(2, 1, 3, &(&a * &c3))?,
            2 => gen_t(3, 1, 2, &(&a * &c3sq))?,
            3 => gen_s(1, 3, &(&a * &c3))?,
            4 => gen_s(2, 3, &(&a * &c3))?,
            _ => gen_s(1, 2, &(&a * &c3sq))?,
        };
        acc = acc.mul(&g)?;
    }
    Ok(acc)
}

fn trial_kernel(rng: &mut ChaCha8Rng, ring: RingDescriptor) -> Result<()> {
    let h = random_h(rng, ring)?;
    ensure(in_h(&h), || format!("sampled element is outside H: {}", h.matrix()))?;
    ensure(rho(&h)?.matrix().is_identity(), || format!("ρ != E on {}", h.matrix()))
}

fn trial_stab2(rng: &mut ChaCha8Rng, ring: RingDescriptor) -> Result<()> {
    let ring2 = ring.with_nvars(2);
    let a = random_element(rng, ring2, 3);
    let b = random_element(rng, ring2, 3);
    let sa = stab2(&a)?;
    let col = vec![ring2.c(1), ring2.c(2)];
    ensure(sa.apply_to_column(&col)? == col, || format!("stab2({a}) does not fix the column"))?;
    ensure(sa.det()?.is_one(), || format!("det stab2({a}) != 1"))?;
    ensure(sa.mul(&stab2(&b)?)? == stab2(&(&a + &b))?, || format!("stab2({a}) stab2({b}) != stab2(a + b)"))?;
    ensure(stab2_param(&sa)? == a, || format!("stab2_param does not invert stab2 at {a}"))?;
    // The general fixing shape with det forced to 1.
    let x = random_element(rng, ring2, 3);
    let m = stab2_general(&(&x * &ring2.c(1)), &(&x * &ring2.c(2)))?;
    ensure(m.det()?.is_one(), || "forced determinant is not 1".into())?;
    ensure(stab2_param(&m)? == x, || format!("stab2_param rejects the det-1 matrix for {x}"))
}

fn trial_triangular(rng: &mut ChaCha8Rng, ring: RingDescriptor) -> Result<()> {
    let a = random_element(rng, ring, 2);
    for t in all_tokens(&a) {
        ensure(image_is_triangular(&t)?, || format!("ρ({t}) is not triangular"))?;
    }
    let (w, m) = random_stab(rng, ring)?;
    let mut prod = Mat::identity(ring.with_nvars(2), 2);
    for t in w.letters() {
        prod = prod.mul(rho(&t.eval()?)?.matrix())?;
    }
    ensure(&prod == rho(&m)?.matrix(), || format!("ρ({w}) is not the product over letters"))
}
