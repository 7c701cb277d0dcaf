//! Command-line front end.
//!
//! Exit codes: 0 verdict (or all checks passed), 1 a certificate or lemma check
//! failed, 2 usage error, 3 inconclusive.

use std::collections::BTreeSet;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::classify::{
    classify_entirely_even, classify_symmetric, is_entirely_even, verify_certificate_against, Certificate,
    ClassifyOptions, DecoratedSplitting, EngineDecisions, StabilityVerdict,
};
use crate::error::{Error, Result};
use crate::family::{verify_cubic_lemmas, verify_tensor_lemmas, Family, FamilyReport};
use crate::field::FieldSpec;
use crate::groebner::{lie_kernel_dim, stabilizer_dim, GroebnerLimits, StabDim};
use crate::parse::parse;
use crate::poly::{Polynomial, TermOrder};
use crate::symfun::{self, Partition, SkewShape};
use crate::torus::{ess_indices, torus_classify, StabilityClass, WeightSystem, WeightedVector};

pub const SCHEMA: &str = "polystab/certificate/v1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

/// Characteristics of the appendix table.
pub const APPENDIX_CHARS: [u64; 7] = [0, 2, 3, 5, 7, 11, 13];

#[derive(Parser, Debug)]
#[command(name = "polystab", version, about = "Exact SL_n stability decisions with certificates")]
pub struct Cli {
    /// Write the JSON output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct LimitArgs {
    #[arg(long, default_value_t = GroebnerLimits::default().max_basis)]
    pub max_basis: usize,
    #[arg(long, default_value_t = GroebnerLimits::default().max_degree)]
    pub max_degree: u32,
    #[arg(long, default_value_t = GroebnerLimits::default().max_pairs)]
    pub max_pairs: usize,
}

impl From<LimitArgs> for GroebnerLimits {
    fn from(a: LimitArgs) -> Self {
        GroebnerLimits {
            max_basis: a.max_basis,
            max_degree: a.max_degree,
            max_pairs: a.max_pairs,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a symmetric or entirely-even form.
    Classify {
        #[arg(long)]
        n: usize,
        /// One characteristic or a comma list.
        #[arg(long = "char", value_delimiter = ',', default_value = "0")]
        chars: Vec<u64>,
        /// Expression or macro such as `h3`, `e{2,1}`, `s{2,1}`.
        #[arg(long)]
        input: String,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Classify a torus weight vector.
    Torus {
        /// Weights separated by `;`, coordinates by `,`.
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        /// `all` or a comma list of indices.
        #[arg(long, default_value = "all")]
        support: String,
    },
    /// Symmetric-function utilities.
    Symfun {
        #[command(subcommand)]
        op: SymfunOp,
    },
    /// Dimension of the SL_n-stabilizer.
    Stabdim {
        #[arg(long)]
        n: usize,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
        #[arg(long)]
        input: String,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Check the closed-orbit lemmas of the cubic or tensor family.
    CertifyFamily {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
    },
    /// Classify h3 in three variables over every characteristic in {0,2,3,5,7,11,13}.
    Appendix {
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Re-verify certificate documents from a file.
    CheckCertificate {
        path: std::path::PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum SymfunOp {
    /// Monomial and Schur expansions.
    Expand {
        #[arg(long)]
        n: usize,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
        #[arg(long)]
        input: String,
    },
    /// Apply D = sum d/dx_i.
    D {
        #[arg(long)]
        n: usize,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
        #[arg(long)]
        input: String,
    },
    /// Number of standard Young tableaux of outer/inner.
    Syt {
        #[arg(long)]
        outer: Partition,
        #[arg(long, default_value = "")]
        inner: Partition,
    },
    /// D s_shape in the Schur basis.
    DSchur {
        #[arg(long)]
        shape: Partition,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timings {
    pub total_micros: u64,
}

/// The emitted classification record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub schema: String,
    pub input: String,
    pub n: usize,
    pub d: u32,
    pub char: u64,
    pub class: StabilityClass,
    pub certificate: Certificate,
    pub stabilizer: Option<StabDim>,
    pub splitting: Option<DecoratedSplitting>,
    pub decisions: EngineDecisions,
    pub timings: Timings,
}

impl CertificateDocument {
    /// JSON with the timings zeroed, for run-to-run comparison.
    pub fn fingerprint(&self) -> String {
        let mut d = self.clone();
        d.timings = Timings { total_micros: 0 };
        serde_json::to_string(&d).expect("document serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppendixRow {
    pub char: u64,
    pub class: StabilityClass,
    pub document: CertificateDocument,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum Documents {
    One(Box<CertificateDocument>),
    Many(Vec<CertificateDocument>),
}

/// Classifies `input` in `n` variables over `field`, picking the symmetric or
/// entirely-even decision procedure.
pub fn classify_input(input: &str, n: usize, field: FieldSpec, limits: GroebnerLimits) -> Result<CertificateDocument> {
    let start = Instant::now();
    let f = parse(input, n, field)?;
    let opts = ClassifyOptions { limits };
    let verdict: StabilityVerdict = if symfun::is_symmetric(&f) {
        classify_symmetric(&f, &opts)?
    } else if is_entirely_even(&f) {
        classify_entirely_even(&f, &opts)?
    } else {
        return Err(Error::Invalid(
            "input is neither symmetric nor entirely even; no decision procedure applies".into(),
        ));
    };
    Ok(CertificateDocument {
        schema: SCHEMA.into(),
        input: input.into(),
        n,
        d: f.total_degree().unwrap_or(0),
        char: field.characteristic(),
        class: verdict.class,
        certificate: verdict.certificate,
        stabilizer: verdict.stabilizer,
        splitting: verdict.splitting,
        decisions: verdict.decisions,
        timings: Timings {
            total_micros: start.elapsed().as_micros() as u64,
        },
    })
}

/// One worker per characteristic; results in input order.
pub fn classify_many(input: &str, n: usize, chars: &[u64], limits: GroebnerLimits) -> Vec<Result<CertificateDocument>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = chars
            .iter()
            .map(|&p| s.spawn(move || FieldSpec::new(p).and_then(|field| classify_input(input, n, field, limits))))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Internal("worker panicked".into()))))
            .collect()
    })
}

/// `h3(x, y, z)` over each characteristic of the appendix.
pub fn run_appendix(limits: GroebnerLimits) -> Result<Vec<AppendixRow>> {
    classify_many("h3", 3, &APPENDIX_CHARS, limits)
        .into_iter()
        .map(|r| {
            r.map(|document| AppendixRow {
                char: document.char,
                class: document.class,
                document,
            })
        })
        .collect()
}

/// Re-verifies one document: parses the input, checks the class against the
/// certificate kind, and re-derives the limit claims from the weights.
pub fn check_document(doc: &CertificateDocument) -> Result<()> {
    if doc.schema != SCHEMA {
        return Err(Error::Invalid(format!("unsupported schema '{}'", doc.schema)));
    }
    let field = FieldSpec::new(doc.char)?;
    let f = parse(&doc.input, doc.n, field)?;
    if !doc.certificate.matches(doc.class) {
        return Err(Error::Internal(format!(
            "certificate rejected: {} certificate for class {}",
            doc.certificate.kind(),
            doc.class
        )));
    }
    verify_certificate_against(&doc.certificate, &f)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Inconclusive(_) | Error::LpTooLarge { .. } => EXIT_INCONCLUSIVE,
        Error::Internal(_) => EXIT_REJECTED,
        _ => EXIT_USAGE,
    }
}

/// Captured result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn fail(e: &Error) -> Self {
        Outcome {
            code: exit_code(e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn field_of(p: u64) -> Result<FieldSpec> {
    FieldSpec::new(p)
}

#[derive(Serialize)]
struct TorusOutput {
    rank: usize,
    weights: Vec<Vec<i64>>,
    support: Vec<usize>,
    class: StabilityClass,
    essential_support: Vec<usize>,
}

fn parse_weights(s: &str) -> Result<WeightSystem> {
    let weights = s
        .split(';')
        .map(|w| {
            w.split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Invalid(format!("bad weight entry '{t}'"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let rank = weights.first().map(Vec::len).unwrap_or(0);
    WeightSystem::new(rank, weights)
}

fn torus(weights: &str, support: &str) -> Result<String> {
    let ws = parse_weights(weights)?;
    let v = if support.trim() == "all" {
        WeightedVector::full(ws)
    } else {
        let idx = support
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Invalid(format!("bad index '{t}'"))))
            .collect::<Result<BTreeSet<_>>>()?;
        WeightedVector::new(ws, idx)?
    };
    let class = torus_classify(&v)?;
    Ok(json(&TorusOutput {
        rank: v.system().rank(),
        weights: v.system().weights().to_vec(),
        support: v.support().iter().copied().collect(),
        class,
        essential_support: ess_indices(&v)?.into_iter().collect(),
    }))
}

fn var_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn print_poly(f: &Polynomial) -> String {
    let names = var_names(f.nvars());
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    f.to_string_with(&names, TermOrder::Lex)
}

#[derive(Serialize)]
struct ExpandOutput {
    input: String,
    n: usize,
    char: u64,
    polynomial: String,
    monomial: Vec<(String, String)>,
    schur: Option<Vec<(String, String)>>,
}

fn symfun_op(op: &SymfunOp) -> Result<String> {
    match op {
        SymfunOp::Expand {
            n,
            characteristic,
            input,
        } => {
            let field = field_of(*characteristic)?;
            let f = parse(input, *n, field)?;
            let pairs = |v: Vec<(Partition, crate::field::Scalar)>| {
                v.into_iter().map(|(p, c)| (p.to_string(), c.to_string())).collect::<Vec<_>>()
            };
            let monomial = pairs(symfun::monomial_expand(&f)?);
            let schur = if field.is_rational() {
                Some(pairs(symfun::schur_expand(&f)?))
            } else {
                None
            };
            Ok(json(&ExpandOutput {
                input: input.clone(),
                n: *n,
                char: *characteristic,
                polynomial: print_poly(&f),
                monomial,
                schur,
            }))
        }
        SymfunOp::D {
            n,
            characteristic,
            input,
        } => {
            let f = parse(input, *n, field_of(*characteristic)?)?;
            Ok(format!("{}\n", print_poly(&symfun::d_op(&f))))
        }
        SymfunOp::Syt { outer, inner } => {
            let shape = SkewShape::new(outer.clone(), inner.clone())?;
            Ok(format!("{}\n", symfun::skew_syt_count(&shape)))
        }
        SymfunOp::DSchur { shape, n } => {
            let terms: Vec<(String, i64)> = symfun::d_schur_expand(shape, *n)?
                .into_iter()
                .map(|(p, c)| (p.to_string(), c))
                .collect();
            Ok(json(&terms))
        }
    }
}

#[derive(Serialize)]
struct StabdimOutput {
    input: String,
    n: usize,
    char: u64,
    lie_kernel_dim: usize,
    stabilizer: StabDim,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let mut outcome = dispatch(&cli.command);
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &outcome.stdout) {
            outcome.stderr.push_str(&format!("error: cannot write {}: {e}\n", path.display()));
            outcome.code = outcome.code.max(EXIT_USAGE);
        }
        outcome.stdout.clear();
    }
    outcome
}

fn dispatch(cmd: &Command) -> Outcome {
    let simple = |r: Result<String>| match r {
        Ok(stdout) => Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome::fail(&e),
    };
    match cmd {
        Command::Classify {
            n,
            chars,
            input,
            limits,
        } => {
            let results = classify_many(input, *n, chars, (*limits).into());
            let mut code = EXIT_OK;
            let mut stderr = String::new();
            let mut docs = Vec::new();
            for (p, r) in chars.iter().zip(results) {
                match r {
                    Ok(d) => docs.push(d),
                    Err(e) => {
                        code = code.max(exit_code(&e));
                        stderr.push_str(&format!("error (char {p}): {e}\n"));
                    }
                }
            }
            let stdout = match (chars.len(), docs.len()) {
                (_, 0) => String::new(),
                (1, _) => json(&Documents::One(Box::new(docs.remove(0)))),
                _ => json(&Documents::Many(docs)),
            };
            Outcome { code, stdout, stderr }
        }
        Command::Torus { weights, support } => simple(torus(weights, support)),
        Command::Symfun { op } => simple(symfun_op(op)),
        Command::Stabdim {
            n,
            characteristic,
            input,
            limits,
        } => simple((|| {
            let f = parse(input, *n, field_of(*characteristic)?)?;
            Ok(json(&StabdimOutput {
                input: input.clone(),
                n: *n,
                char: *characteristic,
                lie_kernel_dim: lie_kernel_dim(&f),
                stabilizer: stabilizer_dim(&f, (*limits).into())?,
            }))
        })()),
        Command::CertifyFamily {
            family,
            n,
            characteristic,
        } => {
            let report: Result<FamilyReport> = field_of(*characteristic).and_then(|field| match family {
                Family::Cubic => verify_cubic_lemmas(*n, field),
                Family::Tensor => verify_tensor_lemmas(*n, field),
            });
            match report {
                Ok(r) => Outcome {
                    code: if r.passed() { EXIT_OK } else { EXIT_REJECTED },
                    stdout: json(&r),
                    stderr: String::new(),
                },
                Err(e) => Outcome::fail(&e),
            }
        }
        Command::Appendix { limits } => simple(run_appendix((*limits).into()).map(|rows| json(&rows))),
        Command::CheckCertificate { path } => check_file(path),
    }
}

fn check_file(path: &std::path::Path) -> Outcome {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Outcome::fail(&Error::Invalid(format!("cannot read {}: {e}", path.display()))),
    };
    let docs = match serde_json::from_str::<Documents>(&text) {
        Ok(Documents::One(d)) => vec![*d],
        Ok(Documents::Many(v)) => v,
        Err(e) => return Outcome::fail(&Error::Invalid(format!("not a {SCHEMA} document: {e}"))),
    };
    let mut out = Outcome::default();
    for (i, d) in docs.iter().enumerate() {
        match check_document(d) {
            Ok(()) => out.stdout.push_str(&format!(
                "ok {i}: {} n={} char={} {} ({})\n",
                d.input,
                d.n,
                d.char,
                d.class,
                d.certificate.kind()
            )),
            Err(e) => {
                out.code = out.code.max(exit_code(&e));
                out.stderr.push_str(&format!("rejected {i}: {e}\n"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("polystab").chain(args.iter().copied()))
    }

    #[test]
    fn classify_h3_char0_is_stable() {
        let o = go(&["classify", "--n", "3", "--char", "0", "--input", "h3"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let d: CertificateDocument = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(d.class, StabilityClass::Stable);
        assert_eq!((d.n, d.d, d.char), (3, 3, 0));
        check_document(&d).unwrap();
    }

    #[test]
    fn classify_char_list_gives_array() {
        let o = go(&["classify", "--n", "3", "--char", "0,5", "--input", "h3"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let d: Vec<CertificateDocument> = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(d[1].class, StabilityClass::Unstable);
        for doc in &d {
            check_document(doc).unwrap();
        }
    }

    #[test]
    fn syt_and_torus_examples() {
        assert_eq!(go(&["symfun", "syt", "--outer", "2,1"]).stdout, "2\n");
        assert_eq!(go(&["symfun", "syt", "--outer", "3,2", "--inner", "1"]).stdout, "5\n");
        let o = go(&["torus", "--weights", "1,-1;-1,1", "--support", "all"]);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["class"], "polystable-not-stable");
        let o = go(&["torus", "--weights", "1;-1;2", "--support", "0,2"]);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["class"], "unstable");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(go(&["classify", "--n", "3"]).code, EXIT_USAGE);
        assert_eq!(go(&["classify", "--n", "3", "--char", "4", "--input", "h3"]).code, EXIT_USAGE);
        assert_eq!(go(&["classify", "--n", "2", "--input", "x1^3 + x2"]).code, EXIT_USAGE);
        assert_eq!(go(&["classify", "--n", "3", "--input", "x1^2*x2"]).code, EXIT_USAGE);
        assert_eq!(go(&["frobnicate"]).code, EXIT_USAGE);
    }

    #[test]
    fn inconclusive_exits_3() {
        // Nonzero Lie kernel in char 3 sends this to Groebner, which gets no pairs.
        let o = go(&[
            "stabdim", "--n", "3", "--char", "3", "--input", "x1*x2*x3", "--max-pairs", "0",
        ]);
        assert_eq!(o.code, EXIT_INCONCLUSIVE, "{o:?}");
    }

    #[test]
    fn output_is_deterministic() {
        let a = classify_input("e{2,1} + 3*p3", 3, FieldSpec::rationals(), GroebnerLimits::default()).unwrap();
        let b = classify_input("e{2,1} + 3*p3", 3, FieldSpec::rationals(), GroebnerLimits::default()).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        let s = go(&["symfun", "expand", "--n", "3", "--input", "s{2,1}"]);
        assert_eq!(s.stdout, go(&["symfun", "expand", "--n", "3", "--input", "s{2,1}"]).stdout);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let d = classify_input("h3", 3, FieldSpec::new(5).unwrap(), GroebnerLimits::default()).unwrap();
        let mut v = serde_json::to_value(&d).unwrap();
        v["extra"] = serde_json::json!(1);
        assert!(serde_json::from_value::<CertificateDocument>(v).is_err());
    }

    #[test]
    fn check_certificate_round_trip() {
        let dir = std::env::temp_dir().join(format!("polystab-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("h3.json");
        let p = path.to_str().unwrap();
        let o = go(&["classify", "--n", "3", "--char", "0,2,5", "--input", "h3", "--out", p]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.is_empty());
        let o = go(&["check-certificate", p]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert_eq!(o.stdout.lines().count(), 3);

        let mut docs: Vec<CertificateDocument> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        docs[2].input = "h3 + x1*x2*x3".into();
        std::fs::write(&path, serde_json::to_string(&docs).unwrap()).unwrap();
        let o = go(&["check-certificate", p]);
        assert_eq!(o.code, EXIT_REJECTED, "{o:?}");
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn certify_family_report() {
        let o = go(&["certify-family", "--family", "cubic", "--n", "2", "--char", "7"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let r: FamilyReport = serde_json::from_str(&o.stdout).unwrap();
        assert!(r.passed());
        assert_eq!(go(&["certify-family", "--family", "cubic", "--n", "1", "--char", "2"]).code, EXIT_USAGE);
    }
}
