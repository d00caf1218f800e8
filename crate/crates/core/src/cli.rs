//! The `colstab` command line.
//!
//! Every subcommand prints one JSON document on stdout,
//! `{"subcommand": ..., "input": ..., "result": ...}` (or `"error"` in place
//! of `"result"`), and a one-line summary on stderr. Exit codes: 0 success,
//! 1 property violation or obstructed preimage, 2 malformed input, 3 input
//! outside the domain of the operation.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::matrix::{Mat, MatrixDoc};
use crate::ring::{CoeffDomain, Mode, RingDescriptor, RingElement};
use crate::stab::{
    check_stab, preimage, r_decompose, reduce, residues, rho, CongruenceMatrix, PreimageStatus, SearchBudget,
};
use crate::tame::{eval_word, sample_tame};
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "colstab", version, about = "Exact computations with the stabilizer of (c1, c2, c3) in GL(3, Λ₃)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a 3x3 matrix fixes the column and has a unit determinant.
    CheckStab(MatrixInput),
    /// Residues (alpha, beta, gamma, delta) of a stabilizer.
    Residues(MatrixInput),
    /// The 2x2 image rho(A) of a stabilizer.
    Rho(MatrixInput),
    /// The reduction R(A) and its c3-adic parts.
    Reduce(MatrixInput),
    /// c-adic decomposition of a polynomial.
    Decompose(DecomposeArgs),
    /// Build a stabilizer with a given 2x2 image.
    Preimage(PreimageArgs),
    /// Sample a random word in the tame generators.
    TameSample(SampleArgs),
    /// Run randomized verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Polynomial,
    Laurent,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Polynomial => Mode::Polynomial,
            ModeArg::Laurent => Mode::Laurent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoeffArg {
    Int,
    Rat,
}

#[derive(Debug, Args)]
pub struct RingArgs {
    #[arg(long, value_enum, default_value = "polynomial")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 3)]
    pub nvars: usize,
    #[arg(long, value_enum, default_value = "int")]
    pub coeff: CoeffArg,
}

impl RingArgs {
    fn descriptor(&self) -> std::result::Result<RingDescriptor, Error> {
        if self.nvars == 0 || self.nvars > 9 {
            return Err(Error::ModeMismatch(format!("--nvars must be in 1..=9, got {}", self.nvars)));
        }
        let coeff = match self.coeff {
            CoeffArg::Int => CoeffDomain::Integers,
            CoeffArg::Rat => CoeffDomain::Rationals,
        };
        Ok(RingDescriptor::new(self.mode.into(), self.nvars).with_coeff_domain(coeff))
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Read the input from a file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Take the input text from the command line.
    #[arg(long)]
    pub inline: Option<String>,
}

impl Source {
    fn text(&self) -> std::result::Result<String, Error> {
        match (&self.input, &self.inline) {
            (_, Some(t)) => Ok(t.clone()),
            (Some(p), None) => {
                fs::read_to_string(p).map_err(|e| Error::Document(format!("cannot read {}: {e}", p.display())))
            }
            (None, None) => Err(Error::Document("no input given".into())),
        }
    }
}

/// A JSON matrix document.
#[derive(Debug, Args)]
pub struct MatrixInput {
    #[command(flatten)]
    pub source: Source,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub ring: RingArgs,
    /// Pivot variable k; the expansion is in powers of c_k.
    #[arg(long, default_value_t = 3)]
    pub var: usize,
    /// Number of heads t.
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
}

#[derive(Debug, Args)]
pub struct PreimageArgs {
    #[command(flatten)]
    pub source: Source,
    /// Longest tame word tried when searching for a transvection preimage.
    #[arg(long, default_value_t = 4)]
    pub budget: usize,
    /// Word parameters range over ±1..=±coeff-bound.
    #[arg(long, default_value_t = 2)]
    pub coeff_bound: i64,
    /// Candidate splits δ12 = j with |j| <= split-bound.
    #[arg(long, default_value_t = 2)]
    pub split_bound: i64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub ring: RingArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub length: usize,
    #[arg(long, default_value_t = 2)]
    pub coeff_bound: i64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: Suite,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// What a run prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Reply {
    code: i32,
    input: Value,
    body: std::result::Result<Value, Error>,
    summary: String,
}

impl Reply {
    fn ok(input: Value, result: Value, summary: impl Into<String>) -> Self {
        Reply { code: EXIT_OK, input, body: Ok(result), summary: summary.into() }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_parse_error() {
        EXIT_PARSE
    } else {
        EXIT_DOMAIN
    }
}

fn error_json(e: &Error) -> Value {
    let kind = match e {
        Error::Parse { .. } => "parse",
        Error::NegativeExponent { .. } => "negative-exponent",
        Error::Document(_) => "document",
        Error::NotStabilizing { .. } => "not-stabilizing",
        Error::NotInvertible { .. } => "not-invertible",
        Error::NotInScheme(_) => "not-in-scheme",
        Error::ModeMismatch(_) => "mode-mismatch",
        Error::DimensionMismatch(_) => "dimension-mismatch",
        _ => "domain",
    };
    let mut v = json!({ "kind": kind, "message": e.to_string() });
    match e {
        Error::Parse { pos, .. } | Error::NegativeExponent { pos } => v["pos"] = json!(pos),
        Error::NotStabilizing { defect } => v["defect"] = json!(defect),
        _ => {}
    }
    v
}

/// Parse `args` (including the program name) and run.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let (name, reply) = match &cli.command {
        Command::CheckStab(m) => ("check-stab", with_matrix(m, cmd_check_stab)),
        Command::Residues(m) => ("residues", with_matrix(m, cmd_residues)),
        Command::Rho(m) => ("rho", with_matrix(m, cmd_rho)),
        Command::Reduce(m) => ("reduce", with_matrix(m, cmd_reduce)),
        Command::Decompose(a) => ("decompose", cmd_decompose(a)),
        Command::Preimage(a) => ("preimage", cmd_preimage(a)),
        Command::TameSample(a) => ("tame-sample", cmd_tame_sample(a)),
        Command::Verify(a) => ("verify", cmd_verify(a)),
    };
    let (code, doc, summary) = match reply.body {
        Ok(result) => (reply.code, json!({ "subcommand": name, "input": reply.input, "result": result }), reply.summary),
        Err(e) => {
            let summary = format!("{name}: {e}");
            (exit_code(&e), json!({ "subcommand": name, "input": reply.input, "error": error_json(&e) }), summary)
        }
    };
    Outcome {
        code,
        stdout: serde_json::to_string(&doc).expect("JSON values serialize") + "\n",
        stderr: summary + "\n",
    }
}

fn failed(input: Value, e: Error) -> Reply {
    Reply { code: exit_code(&e), input, body: Err(e), summary: String::new() }
}

fn with_matrix(m: &MatrixInput, f: fn(Mat<RingElement>, Value) -> Reply) -> Reply {
    let parsed = m.source.text().and_then(|t| MatrixDoc::from_json(&t)).and_then(|doc| {
        let mat = Mat::from_doc(&doc)?;
        Ok((mat.to_doc(), mat))
    });
    match parsed {
        Ok((doc, mat)) => f(mat, json!({ "matrix": doc })),
        Err(e) => failed(Value::Null, e),
    }
}

fn cmd_check_stab(m: Mat<RingElement>, input: Value) -> Reply {
    match check_stab(&m) {
        Ok(a) => {
            let det = a.matrix().det().expect("square");
            Reply::ok(input, json!({ "stabilizer": true, "det": det.to_string() }), "check-stab: accepted")
        }
        Err(e @ (Error::NotStabilizing { .. } | Error::NotInvertible { .. })) => {
            let summary = format!("check-stab: rejected: {e}");
            let result = json!({ "stabilizer": false, "reason": error_json(&e) });
            Reply { code: EXIT_VIOLATION, input, body: Ok(result), summary }
        }
        Err(e) => failed(input, e),
    }
}

fn cmd_residues(m: Mat<RingElement>, input: Value) -> Reply {
    match check_stab(&m).and_then(|a| residues(&a)) {
        Ok(q) => {
            let summary = format!("residues: α = {}, β = {}, γ = {}, δ = {}", q.alpha, q.beta, q.gamma, q.delta);
            Reply::ok(input, q.to_json_value(), summary)
        }
        Err(e) => failed(input, e),
    }
}

fn cmd_rho(m: Mat<RingElement>, input: Value) -> Reply {
    match check_stab(&m).and_then(|a| rho(&a)) {
        Ok(b) => {
            let summary = format!("rho: {}", b.matrix());
            Reply::ok(input, json!(b.matrix().to_doc()), summary)
        }
        Err(e) => failed(input, e),
    }
}

fn loc_entries(r: &Mat<crate::LocalizedElement>) -> Value {
    json!(r.rows().map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn cmd_reduce(m: Mat<RingElement>, input: Value) -> Reply {
    let out = check_stab(&m).and_then(|a| {
        let r = reduce(&a);
        let d = r_decompose(&r)?;
        Ok(json!({
            "reduction": loc_entries(&r),
            "parts": {
                "minus1": d.minus1.to_doc(),
                "zero": d.zero.to_doc(),
                "one": d.one.to_doc(),
                "two": d.two.to_doc(),
            }
        }))
    });
    match out {
        Ok(v) => Reply::ok(input, v, "reduce: done"),
        Err(e) => failed(input, e),
    }
}

fn cmd_decompose(a: &DecomposeArgs) -> Reply {
    let ring = match a.ring.descriptor() {
        Ok(r) => r,
        Err(e) => return failed(Value::Null, e),
    };
    let text = match a.source.text() {
        Ok(t) => t,
        Err(e) => return failed(Value::Null, e),
    };
    let echo = json!({ "ring": ring, "polynomial": text.trim(), "var": a.var, "depth": a.depth });
    if a.depth == 0 {
        return failed(echo, Error::IndexConstraint("--depth must be at least 1".into()));
    }
    let out = ring.parse(&text).and_then(|g| g.c_adic_decompose(a.var, a.depth));
    match out {
        Ok(d) => {
            let heads: Vec<String> = d.heads.iter().map(ToString::to_string).collect();
            let summary = format!("decompose: {} heads in c{}", heads.len(), a.var);
            Reply::ok(echo, json!({ "var": a.var, "heads": heads, "tail": d.tail.to_string() }), summary)
        }
        Err(e) => failed(echo, e),
    }
}

fn cmd_preimage(a: &PreimageArgs) -> Reply {
    let budget = SearchBudget { max_word_len: a.budget, coeff_bound: a.coeff_bound, split_bound: a.split_bound };
    let parsed = a.source.text().and_then(|t| MatrixDoc::from_json(&t)).and_then(|doc| Mat::from_doc(&doc));
    let m = match parsed {
        Ok(m) => m,
        Err(e) => return failed(Value::Null, e),
    };
    let input = json!({ "matrix": m.to_doc(), "budget": budget });
    match CongruenceMatrix::new(m).and_then(|b| preimage(&b, &budget)) {
        Ok(rep) => {
            let code = match rep.status {
                PreimageStatus::Success => EXIT_OK,
                PreimageStatus::Obstructed => EXIT_VIOLATION,
            };
            let summary = match &rep.obstruction {
                None => format!("preimage: SUCCESS at stage {}", rep.stage),
                Some(o) => format!("preimage: OBSTRUCTED at stage {} ({o})", rep.stage),
            };
            Reply { code, input, body: Ok(json!(rep.to_doc())), summary }
        }
        Err(e) => failed(input, e),
    }
}

fn cmd_tame_sample(a: &SampleArgs) -> Reply {
    let ring = match a.ring.descriptor() {
        Ok(r) if r.nvars == 3 => r,
        Ok(r) => return failed(Value::Null, Error::ModeMismatch(format!("tame words need 3 variables, got {r}"))),
        Err(e) => return failed(Value::Null, e),
    };
    let input = json!({ "ring": ring, "seed": a.seed, "length": a.length, "coeff_bound": a.coeff_bound });
    let w = sample_tame(ring, a.seed, a.length, a.coeff_bound);
    match eval_word(&w) {
        Ok(m) => {
            let summary = format!("tame-sample: {w}");
            Reply::ok(input, json!({ "word": w.to_json_value(), "matrix": m.matrix().to_doc() }), summary)
        }
        Err(e) => failed(input, e),
    }
}

fn cmd_verify(a: &VerifyArgs) -> Reply {
    let input = json!({ "suite": a.suite, "trials": a.trials, "seed": a.seed });
    let reports = run_suite(a.suite, a.trials, a.seed);
    let ok = reports.iter().all(|r| r.ok());
    let summary = reports
        .iter()
        .map(|r| format!("{}: {}/{} passed", r.suite, r.passed, r.trials))
        .collect::<Vec<_>>()
        .join("; ");
    let code = if ok { EXIT_OK } else { EXIT_VIOLATION };
    Reply { code, input, body: Ok(json!({ "ok": ok, "reports": reports })), summary: format!("verify: {summary}") }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Outcome {
        run_args(std::iter::once("colstab").chain(args.iter().copied()))
    }

    const T312_NEG1: &str = r#"{"ring":{"mode":"polynomial","nvars":3,"coeff":"int"},"entries":[["1","0","0"],["0","1","0"],["-a2","a1","1"]]}"#;

    #[test]
    fn residues_of_t() {
        let out = run(&["residues", "--inline", T312_NEG1]);
        assert_eq!(out.code, 0, "{out:?}");
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["subcommand"], "residues");
        assert_eq!(v["result"], json!({"alpha":"1","beta":"0","gamma":"0","delta":"0"}));
    }

    #[test]
    fn malformed_polynomial_exits_2_with_position() {
        let out = run(&["decompose", "--inline", "a1 + * a2"]);
        assert_eq!(out.code, 2);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["error"]["pos"], 5);
    }

    #[test]
    fn non_stabilizer_is_a_domain_error() {
        let doc = r#"{"ring":{"mode":"polynomial","nvars":3,"coeff":"int"},"entries":[["1","1","0"],["0","1","0"],["0","0","1"]]}"#;
        assert_eq!(run(&["residues", "--inline", doc]).code, 3);
        assert_eq!(run(&["check-stab", "--inline", doc]).code, 1);
        assert_eq!(run(&["check-stab", "--inline", T312_NEG1]).code, 0);
    }

    #[test]
    fn output_is_reproducible() {
        let a = run(&["tame-sample", "--seed", "42", "--length", "5", "--mode", "laurent"]);
        let b = run(&["tame-sample", "--seed", "42", "--length", "5", "--mode", "laurent"]);
        assert_eq!(a.code, 0);
        assert_eq!(a, b);
    }

    #[test]
    fn bad_flags_exit_2() {
        assert_eq!(run(&["verify", "--suite", "nope"]).code, 2);
        assert_eq!(run(&["residues"]).code, 2);
    }
}
