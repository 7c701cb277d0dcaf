//! `SL_n` stability of symmetric and entirely even forms.
//!
//! Symmetric forms are decided in the basis `l = x_1 + ... + x_n`,
//! `b_i = x_i - x_{i+1}` when `p` does not divide `n`, and on the rank-two
//! torus of the basis `(l, b_1, ..., b_{n-2}, x_n)` otherwise. Entirely even
//! forms are decided by their Newton polytope. Every verdict carries a
//! certificate that is re-checked by weight arithmetic before it is returned.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{factorial, FieldSpec, Scalar};
use crate::groebner::{same_orbit_dim_test, stabilizer_dim, GroebnerLimits, StabDim, StabMethod};
use crate::linalg::Matrix;
use crate::lp::{rat, Constraint, LinearProgram, LpStatus, Relation};
use crate::poly::{is_divisible_by_linear, Monomial, Polynomial, TermOrder};
use crate::symfun::{self, BasisKind, Partition, SkewShape};
use crate::torus::{ess_indices, newton_classify, st_character, StabilityClass, WeightSystem, WeightedVector};

/// An invertible change of coordinates `Y = A x`; row `k` of `A` is the `k`-th basis form.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisChange {
    label: String,
    names: Vec<String>,
    forward: Matrix,
    inverse: Matrix,
}

impl BasisChange {
    pub fn new(label: &str, names: Vec<String>, forward: Matrix) -> Result<Self> {
        if names.len() != forward.rows() {
            return Err(Error::Dimension("one name per basis form".into()));
        }
        let inverse = forward
            .inverse()
            .ok_or_else(|| Error::Invalid(format!("basis {label} is not invertible over {}", forward.field())))?;
        Ok(BasisChange {
            label: label.to_string(),
            names,
            forward,
            inverse,
        })
    }

    /// `(l, b_1, ..., b_{n-1})`; invertible iff `p` does not divide `n`.
    pub fn lb(n: usize, field: FieldSpec) -> Result<Self> {
        let mut rows = vec![vec![1i64; n]];
        let mut names = vec!["l".to_string()];
        for k in 0..n - 1 {
            rows.push(unit_difference(n, k));
            names.push(format!("b{}", k + 1));
        }
        let forward = Matrix::from_i64_rows(field, &rows)?;
        if forward.inverse().is_none() {
            return Err(Error::CharDividesN {
                p: field.characteristic(),
                n,
            });
        }
        BasisChange::new("l,b", names, forward)
    }

    /// `(l, b_1, ..., b_{n-2}, c = x_n)`, invertible in every characteristic.
    pub fn lbc(n: usize, field: FieldSpec) -> Result<Self> {
        let mut rows = vec![vec![1i64; n]];
        let mut names = vec!["l".to_string()];
        for k in 0..n.saturating_sub(2) {
            rows.push(unit_difference(n, k));
            names.push(format!("b{}", k + 1));
        }
        let mut c = vec![0i64; n];
        c[n - 1] = 1;
        rows.push(c);
        names.push("c".to_string());
        let out = BasisChange::new("l,b,c", names, Matrix::from_i64_rows(field, &rows)?);
        out.map_err(|e| Error::Internal(format!("(l, b, x_n) basis must be invertible: {e}")))
    }

    pub fn standard(n: usize, field: FieldSpec) -> Self {
        let names = (1..=n).map(|i| format!("x{i}")).collect();
        BasisChange::new("x", names, Matrix::identity(n, field)).expect("identity")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn forward(&self) -> &Matrix {
        &self.forward
    }

    /// `f` written in the basis coordinates.
    pub fn to_basis(&self, f: &Polynomial) -> Result<Polynomial> {
        f.substitute_linear(&self.inverse)
    }

    pub fn from_basis(&self, g: &Polynomial) -> Result<Polynomial> {
        g.substitute_linear(&self.forward)
    }

    pub fn print(&self, g: &Polynomial) -> String {
        let names: Vec<&str> = self.names.iter().map(String::as_str).collect();
        g.to_string_with(&names, TermOrder::Lex)
    }

    fn form_rows(&self) -> Vec<Vec<String>> {
        self.forward
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|s| s.to_string()).collect())
            .collect()
    }
}

fn unit_difference(n: usize, k: usize) -> Vec<i64> {
    let mut r = vec![0i64; n];
    r[k] = 1;
    r[k + 1] = -1;
    r
}

/// `f = sum_i l^i p_i(b_1, ..., b_{n-1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct LBDecomposition {
    n: usize,
    degree: u32,
    field: FieldSpec,
    components: BTreeMap<u32, Polynomial>,
}

impl LBDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Nonzero components only.
    pub fn components(&self) -> &BTreeMap<u32, Polynomial> {
        &self.components
    }

    pub fn component(&self, i: u32) -> Polynomial {
        self.components
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.n - 1, self.field))
    }

    pub fn nonzero_indices(&self) -> BTreeSet<u32> {
        self.components.keys().copied().collect()
    }

    /// `sum l^i p_i` back in the `x` coordinates.
    pub fn reconstruct(&self) -> Result<Polynomial> {
        let n = self.n;
        let basis = BasisChange::lb(n, self.field)?;
        basis.from_basis(&self.in_basis())
    }

    /// The decomposition as one polynomial in `(l, b_1, ..., b_{n-1})`.
    pub fn in_basis(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.n, self.field);
        for (&i, p) in &self.components {
            for (m, c) in p.terms() {
                let mut e = Vec::with_capacity(self.n);
                e.push(i);
                e.extend_from_slice(m.exponents());
                out.add_term(Monomial::new(e), c.clone());
            }
        }
        out
    }
}

pub fn lb_decompose(f: &Polynomial) -> Result<LBDecomposition> {
    let n = f.nvars();
    if n < 2 {
        return Err(Error::Invalid("the l-b decomposition needs n >= 2".into()));
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let basis = BasisChange::lb(n, f.field())?;
    let g = basis.to_basis(f)?;
    let mut components: BTreeMap<u32, Polynomial> = BTreeMap::new();
    for (m, c) in g.terms() {
        let (&i, rest) = m.exponents().split_first().expect("n >= 2");
        components
            .entry(i)
            .or_insert_with(|| Polynomial::zero(n - 1, f.field()))
            .add_term(Monomial::new(rest.to_vec()), c.clone());
    }
    Ok(LBDecomposition {
        n,
        degree: f.total_degree().unwrap_or(0),
        field: f.field(),
        components,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "t->0")]
    ToZero,
    #[serde(rename = "t->inf")]
    ToInfinity,
}

impl Direction {
    fn sign(self) -> i64 {
        match self {
            Direction::ToZero => 1,
            Direction::ToInfinity => -1,
        }
    }
}

/// `lambda(t)` scales basis form `k` by `t^{exponents[k]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OnePsg {
    pub basis: String,
    pub names: Vec<String>,
    /// Rows of coefficients of each basis form in `x_1, ..., x_n`.
    pub forms: Vec<Vec<String>>,
    pub exponents: Vec<i64>,
    pub direction: Direction,
}

impl OnePsg {
    fn new(basis: &BasisChange, exponents: Vec<i64>, direction: Direction) -> Result<Self> {
        if exponents.len() != basis.names.len() {
            return Err(Error::Dimension("one exponent per basis form".into()));
        }
        if exponents.iter().sum::<i64>() != 0 {
            return Err(Error::Internal("one-parameter subgroup leaves SL_n".into()));
        }
        Ok(OnePsg {
            basis: basis.label.clone(),
            names: basis.names.clone(),
            forms: basis.form_rows(),
            exponents,
            direction,
        })
    }

    /// `lambda_can`: `t^{n-1}` on `l`, `t^{-1}` on every `b_i`.
    pub fn canonical(basis: &BasisChange, direction: Direction) -> Result<Self> {
        let n = basis.names.len();
        let mut e = vec![-1i64; n];
        e[0] = n as i64 - 1;
        OnePsg::new(basis, e, direction)
    }

    /// Exponent of `t` on the basis monomial `Y^e`, read in the direction `t -> 0`.
    pub fn weight(&self, e: &[u32]) -> i64 {
        let s = self.direction.sign();
        e.iter().zip(&self.exponents).map(|(&a, &w)| s * a as i64 * w).sum()
    }
}

/// The decorated splitting `(G, c)` of a one-parameter subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoratedSplitting {
    pub subspaces: Vec<String>,
    pub dims: Vec<usize>,
    /// Weakly decreasing, gcd 1, `sum c_i dim G_i = 0`.
    pub decoration: Vec<i64>,
    pub flag: Flag,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flag {
    pub subspaces: Vec<String>,
}

impl DecoratedSplitting {
    pub fn from_psg(psg: &OnePsg) -> Result<Self> {
        let s = psg.direction.sign();
        let mut groups: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (k, &e) in psg.exponents.iter().enumerate() {
            groups.entry(s * e).or_default().push(k);
        }
        let ordered: Vec<(i64, Vec<usize>)> = groups.into_iter().rev().collect();
        let g = ordered.iter().fold(0i64, |acc, (e, _)| acc.gcd(e)).max(1);
        let canonical = psg.basis == "l,b" && ordered.len() == 2;
        let label = |idx: &[usize]| {
            if canonical {
                if idx == [0] { "L".to_string() } else { "M".to_string() }
            } else {
                let names: Vec<&str> = idx.iter().map(|&k| psg.names[k].as_str()).collect();
                format!("span({})", names.join(","))
            }
        };
        let subspaces: Vec<String> = ordered.iter().map(|(_, idx)| label(idx)).collect();
        let dims: Vec<usize> = ordered.iter().map(|(_, idx)| idx.len()).collect();
        let decoration: Vec<i64> = ordered.iter().map(|(e, _)| e / g).collect();
        let mut flag = Vec::new();
        for k in 1..=subspaces.len() {
            flag.push(if k == subspaces.len() {
                "full".to_string()
            } else {
                subspaces[..k].join("+")
            });
        }
        let out = DecoratedSplitting {
            subspaces,
            dims,
            decoration,
            flag: Flag { subspaces: flag },
        };
        out.validate()?;
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        let weighted: i64 = self.decoration.iter().zip(&self.dims).map(|(c, &d)| c * d as i64).sum();
        let decreasing = self.decoration.windows(2).all(|w| w[0] >= w[1]);
        let g = self.decoration.iter().fold(0i64, |acc, c| acc.gcd(c));
        if weighted != 0 || !decreasing || (g != 1 && !self.decoration.iter().all(|&c| c == 0)) {
            return Err(Error::Internal(format!("malformed decoration {:?}", self.decoration)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

pub fn terms_of(p: &Polynomial) -> Vec<Term> {
    p.terms()
        .map(|(m, c)| Term {
            exponents: m.exponents().to_vec(),
            coefficient: c.to_string(),
        })
        .collect()
}

pub fn polynomial_from_terms(terms: &[Term], nvars: usize, field: FieldSpec) -> Result<Polynomial> {
    let mut out = Polynomial::zero(nvars, field);
    for t in terms {
        if t.exponents.len() != nvars {
            return Err(Error::Dimension("term length differs from basis size".into()));
        }
        out.add_term(Monomial::new(t.exponents.clone()), parse_scalar(&t.coefficient, field)?);
    }
    Ok(out)
}

pub fn parse_scalar(s: &str, field: FieldSpec) -> Result<Scalar> {
    let r = BigRational::from_str(s.trim()).map_err(|_| Error::Parse {
        pos: 0,
        msg: format!("bad coefficient '{s}'"),
    })?;
    field.from_rational(&r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleOutCheck {
    pub condition: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl RuleOutCheck {
    fn failed(condition: impl Into<String>, detail: impl Into<String>) -> Self {
        RuleOutCheck {
            condition: condition.into(),
            holds: false,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Certificate {
    ZeroInput {
        note: String,
    },
    /// `lambda(t) . f -> 0`: every weight is positive.
    Destabilizing {
        psg: OnePsg,
        transformed: Vec<Term>,
        weights: Vec<i64>,
    },
    /// `lambda(t) . f -> w` with `w` outside the orbit of `f`.
    Boundary {
        psg: OnePsg,
        transformed: Vec<Term>,
        weights: Vec<i64>,
        /// Weight-zero part, in basis coordinates.
        limit: Vec<Term>,
        boundary_point: String,
        dim_f: Option<StabDim>,
        dim_w: Option<StabDim>,
    },
    RuleOut {
        checks: Vec<RuleOutCheck>,
    },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::ZeroInput { .. } => "zero-input",
            Certificate::Destabilizing { .. } => "destabilizing",
            Certificate::Boundary { .. } => "boundary",
            Certificate::RuleOut { .. } => "rule-out",
        }
    }

    /// The certificate kind required for `class`.
    pub fn matches(&self, class: StabilityClass) -> bool {
        match self {
            Certificate::ZeroInput { .. } | Certificate::Destabilizing { .. } => class == StabilityClass::Unstable,
            Certificate::Boundary { .. } => class == StabilityClass::SemistableNotPolystable,
            Certificate::RuleOut { .. } => class.is_polystable(),
        }
    }
}

/// Re-derives the limit claim of a certificate from its weights alone.
pub fn verify_certificate(cert: &Certificate, field: FieldSpec) -> Result<()> {
    let bad = |m: &str| Err(Error::Internal(format!("certificate rejected: {m}")));
    let (psg, transformed, weights) = match cert {
        Certificate::Destabilizing {
            psg,
            transformed,
            weights,
        }
        | Certificate::Boundary {
            psg,
            transformed,
            weights,
            ..
        } => (psg, transformed, weights),
        _ => return Ok(()),
    };
    if psg.exponents.iter().sum::<i64>() != 0 {
        return bad("exponents do not sum to zero");
    }
    if psg.forms.len() != psg.exponents.len() || psg.names.len() != psg.exponents.len() {
        return bad("basis size mismatch");
    }
    let nb = psg.exponents.len();
    let rows = psg
        .forms
        .iter()
        .map(|r| r.iter().map(|s| parse_scalar(s, field)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if Matrix::from_rows(field, rows)?.inverse().is_none() {
        return bad("basis forms are not invertible");
    }
    let g = polynomial_from_terms(transformed, nb, field)?;
    if g.is_zero() {
        return bad("empty transformed polynomial");
    }
    let computed: Vec<i64> = g.support().map(|m| psg.weight(m.exponents())).collect();
    if &computed != weights {
        return bad("listed weights differ from recomputed weights");
    }
    match cert {
        Certificate::Destabilizing { .. } => {
            if computed.iter().any(|&w| w <= 0) {
                return bad("a term keeps a non-positive t-exponent");
            }
        }
        Certificate::Boundary { limit, .. } => {
            if computed.iter().any(|&w| w < 0) {
                return bad("a term has a negative t-exponent so the limit does not exist");
            }
            let want = Polynomial::from_terms(
                nb,
                field,
                g.terms()
                    .filter(|(m, _)| psg.weight(m.exponents()) == 0)
                    .map(|(m, c)| (m.clone(), c.clone())),
            );
            if want.is_zero() {
                return bad("the limit is zero, so the point is unstable");
            }
            if polynomial_from_terms(limit, nb, field)? != want {
                return bad("listed limit differs from the weight-zero part");
            }
        }
        _ => {}
    }
    Ok(())
}

/// `verify_certificate`, and the transformed polynomial is `f` written in the
/// certificate's basis.
pub fn verify_certificate_against(cert: &Certificate, f: &Polynomial) -> Result<()> {
    let field = f.field();
    verify_certificate(cert, field)?;
    let (psg, transformed) = match cert {
        Certificate::ZeroInput { .. } => {
            return if f.is_zero() {
                Ok(())
            } else {
                Err(Error::Internal("certificate rejected: zero-input certificate for a nonzero input".into()))
            };
        }
        Certificate::Destabilizing { psg, transformed, .. } | Certificate::Boundary { psg, transformed, .. } => {
            (psg, transformed)
        }
        Certificate::RuleOut { .. } => return Ok(()),
    };
    if psg.forms.iter().any(|r| r.len() != f.nvars()) {
        return Err(Error::Internal("certificate rejected: forms do not match n".into()));
    }
    let rows = psg
        .forms
        .iter()
        .map(|r| r.iter().map(|s| parse_scalar(s, field)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let basis = BasisChange::new(&psg.basis, psg.names.clone(), Matrix::from_rows(field, rows)?)?;
    if basis.to_basis(f)? != polynomial_from_terms(transformed, f.nvars(), field)? {
        return Err(Error::Internal(
            "certificate rejected: transformed polynomial is not the input in the listed basis".into(),
        ));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `f = 0` or `n = 1`.
    Trivial,
    PNotDividingN,
    PDividingN,
    EntirelyEven,
    FamilyShortcut,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineDecisions {
    pub branch: Branch,
    pub groebner_invoked: bool,
    /// A Groebner computation entered the unstable / semistable / polystable decision.
    pub groebner_in_class_decision: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityVerdict {
    pub class: StabilityClass,
    pub certificate: Certificate,
    /// Dimension of the `SL_n`-stabilizer of `f`, when computed.
    pub stabilizer: Option<StabDim>,
    pub splitting: Option<DecoratedSplitting>,
    pub decisions: EngineDecisions,
}

impl StabilityVerdict {
    fn emit(self, field: FieldSpec) -> Result<Self> {
        if !self.certificate.matches(self.class) {
            return Err(Error::Internal(format!(
                "{} certificate for class {}",
                self.certificate.kind(),
                self.class
            )));
        }
        verify_certificate(&self.certificate, field)?;
        Ok(self)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub limits: GroebnerLimits,
}

/// Limits of `lambda_can(t) . f` at `t -> 0` and `t -> inf` in `x` coordinates;
/// `None` when the limit does not exist.
pub fn canonical_psg_limits(f: &Polynomial) -> Result<(Option<Polynomial>, Option<Polynomial>)> {
    let dec = lb_decompose(f)?;
    let basis = BasisChange::lb(f.nvars(), f.field())?;
    let n = dec.n as i64;
    let d = dec.degree as i64;
    let at = |keep_sign: i64| -> Result<Option<Polynomial>> {
        if dec.components.keys().any(|&i| keep_sign * (n * i as i64 - d) < 0) {
            return Ok(None);
        }
        let part = LBDecomposition {
            components: dec
                .components
                .iter()
                .filter(|(&i, _)| n * i as i64 == d)
                .map(|(&i, p)| (i, p.clone()))
                .collect(),
            ..dec.clone()
        };
        Ok(Some(basis.from_basis(&part.in_basis())?))
    };
    Ok((at(1)?, at(-1)?))
}

fn psg_certificate(basis: &BasisChange, psg: OnePsg, f: &Polynomial) -> Result<(Polynomial, Vec<Term>, Vec<i64>)> {
    let g = basis.to_basis(f)?;
    let weights = g.support().map(|m| psg.weight(m.exponents())).collect();
    Ok((g.clone(), terms_of(&g), weights))
}

fn destabilizing(basis: &BasisChange, psg: OnePsg, f: &Polynomial) -> Result<Certificate> {
    let (_, transformed, weights) = psg_certificate(basis, psg.clone(), f)?;
    Ok(Certificate::Destabilizing {
        psg,
        transformed,
        weights,
    })
}

fn boundary(
    basis: &BasisChange,
    psg: OnePsg,
    f: &Polynomial,
    dims: Option<(StabDim, StabDim)>,
) -> Result<(Certificate, Polynomial)> {
    let (g, transformed, weights) = psg_certificate(basis, psg.clone(), f)?;
    let limit = Polynomial::from_terms(
        g.nvars(),
        g.field(),
        g.terms()
            .filter(|(m, _)| psg.weight(m.exponents()) == 0)
            .map(|(m, c)| (m.clone(), c.clone())),
    );
    let w = basis.from_basis(&limit)?;
    Ok((
        Certificate::Boundary {
            psg,
            transformed,
            weights,
            limit: terms_of(&limit),
            boundary_point: w.to_string(),
            dim_f: dims.map(|d| d.0),
            dim_w: dims.map(|d| d.1),
        },
        w,
    ))
}

fn trivial(f: &Polynomial) -> Option<StabilityVerdict> {
    let decisions = EngineDecisions {
        branch: Branch::Trivial,
        groebner_invoked: false,
        groebner_in_class_decision: false,
    };
    if f.is_zero() {
        return Some(StabilityVerdict {
            class: StabilityClass::Unstable,
            certificate: Certificate::ZeroInput {
                note: "the zero form lies in the null cone; polystability requires a nonzero vector".into(),
            },
            stabilizer: None,
            splitting: None,
            decisions,
        });
    }
    if f.nvars() == 1 {
        return Some(StabilityVerdict {
            class: StabilityClass::Stable,
            certificate: Certificate::RuleOut {
                checks: vec![RuleOutCheck::failed(
                    "a nontrivial one-parameter subgroup of SL_1 exists",
                    "SL_1 is the trivial group",
                )],
            },
            stabilizer: Some(StabDim {
                dim: 0,
                method: StabMethod::LieAlgebra,
            }),
            splitting: None,
            decisions,
        });
    }
    None
}

/// Classifies a symmetric form under `SL_n`.
pub fn classify_symmetric(f: &Polynomial, opts: &ClassifyOptions) -> Result<StabilityVerdict> {
    if let Some(v) = trivial(f) {
        return v.emit(f.field());
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    if !symfun::is_symmetric(f) {
        return Err(Error::NotSymmetric);
    }
    let p = f.field().characteristic();
    let n = f.nvars();
    let v = if p != 0 && (n as u64).is_multiple_of(p) {
        classify_p_divides_n(f, opts)?
    } else {
        classify_p_not_dividing_n(f, opts)?
    };
    v.emit(f.field())
}

fn classify_p_not_dividing_n(f: &Polynomial, opts: &ClassifyOptions) -> Result<StabilityVerdict> {
    let n = f.nvars();
    let field = f.field();
    let basis = BasisChange::lb(n, field)?;
    let dec = lb_decompose(f)?;
    let d = dec.degree as i64;
    let ni = |i: u32| n as i64 * i as i64 - d;
    let idx = dec.nonzero_indices();
    let mut decisions = EngineDecisions {
        branch: Branch::PNotDividingN,
        groebner_invoked: false,
        groebner_in_class_decision: false,
    };
    let floor = d / n as i64;
    let ceil = (d + n as i64 - 1) / n as i64;
    let divides_high = idx.iter().all(|&i| ni(i) > 0);
    let low_only = idx.iter().all(|&i| ni(i) < 0);
    let mut checks = vec![
        RuleOutCheck::failed(
            format!("l^{} divides f", floor + 1),
            format!("p_i != 0 for i in {:?}", idx),
        ),
        RuleOutCheck::failed(format!("f = sum of l^i p_i over i <= {}", ceil - 1), ""),
    ];
    for (dir, hit) in [(Direction::ToZero, divides_high), (Direction::ToInfinity, low_only)] {
        if hit {
            let psg = OnePsg::canonical(&basis, dir)?;
            let splitting = DecoratedSplitting::from_psg(&psg)?;
            return Ok(StabilityVerdict {
                class: StabilityClass::Unstable,
                certificate: destabilizing(&basis, psg, f)?,
                stabilizer: None,
                splitting: Some(splitting),
                decisions,
            });
        }
    }
    let mut dim_f: Option<StabDim> = None;
    let mut class = StabilityClass::PolystableNotStable;
    if d % n as i64 == 0 {
        let m = (d / n as i64) as u32;
        let below = idx.iter().any(|&i| i < m);
        let above = idx.iter().any(|&i| i > m);
        checks.push(RuleOutCheck::failed(format!("l^{m} divides f"), ""));
        checks.push(RuleOutCheck::failed(format!("f = sum of l^i p_i over i <= {m}"), ""));
        if !(below && above) {
            let dir = if below { Direction::ToInfinity } else { Direction::ToZero };
            let psg = OnePsg::canonical(&basis, dir)?;
            let mut f_prime_dec = dec.clone();
            f_prime_dec.components.retain(|&i, _| i == m);
            let f_prime = basis.from_basis(&f_prime_dec.in_basis())?;
            if f_prime != *f {
                let test = same_orbit_dim_test(f, &f_prime, opts.limits)?;
                let used = [test.dim_f, test.dim_w].iter().any(|s| s.method == StabMethod::Groebner);
                decisions.groebner_invoked |= used;
                decisions.groebner_in_class_decision |= used;
                dim_f = Some(test.dim_f);
                if !test.equal {
                    let (certificate, _) = boundary(&basis, psg.clone(), f, Some((test.dim_f, test.dim_w)))?;
                    return Ok(StabilityVerdict {
                        class: StabilityClass::SemistableNotPolystable,
                        certificate,
                        stabilizer: Some(test.dim_f),
                        splitting: Some(DecoratedSplitting::from_psg(&psg)?),
                        decisions,
                    });
                }
                checks.push(RuleOutCheck::failed(
                    "stabilizer dimensions of f and l^{d/n} p_{d/n} differ",
                    format!("both are {}", test.dim_f.dim),
                ));
            } else {
                checks.push(RuleOutCheck::failed(
                    "the lambda_can limit differs from f",
                    "f = l^{d/n} p_{d/n}",
                ));
            }
        }
    }
    let sd = match dim_f {
        Some(s) => s,
        None => {
            let s = stabilizer_dim(f, opts.limits)?;
            decisions.groebner_invoked |= s.method == StabMethod::Groebner;
            s
        }
    };
    if sd.dim == 0 {
        class = StabilityClass::Stable;
    }
    Ok(StabilityVerdict {
        class,
        certificate: Certificate::RuleOut { checks },
        stabilizer: Some(sd),
        splitting: None,
        decisions,
    })
}

/// `t . l^a b^beta c^g` has `T_2`-weight `(a - g, |beta| - (n - 2) g)`.
fn t2_weight(e: &[u32]) -> Vec<i64> {
    let (&a, rest) = e.split_first().expect("nonempty");
    let (&g, b) = rest.split_last().expect("at least two forms");
    let nb = b.len() as i64;
    let beta: i64 = b.iter().map(|&x| x as i64).sum();
    vec![a as i64 - g as i64, beta - nb * g as i64]
}

fn t2_exponents(y: &[i64], n: usize) -> Vec<i64> {
    let mut e = vec![y[0]];
    e.extend(std::iter::repeat_n(y[1], n - 2));
    e.push(-y[0] - (n as i64 - 2) * y[1]);
    e
}

/// An integer `y` with `y . w_i = 0` for `i` in `zero_on` and `y . w_i >= 1` otherwise.
pub fn separating_direction(weights: &[Vec<i64>], rank: usize, zero_on: &BTreeSet<usize>) -> Result<Option<Vec<i64>>> {
    let mut lp = LinearProgram::new(rank);
    for k in 0..rank {
        lp.set_free(k);
    }
    for (i, w) in weights.iter().enumerate() {
        let coeffs = w.iter().map(|&x| rat(x)).collect();
        if zero_on.contains(&i) {
            lp.add_constraint(Constraint::new(coeffs, Relation::Eq, rat(0)))?;
        } else {
            lp.add_constraint(Constraint::new(coeffs, Relation::Ge, rat(1)))?;
        }
    }
    let res = lp.solve()?;
    if res.status == LpStatus::Infeasible {
        return Ok(None);
    }
    let denom = res
        .witness
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = res
        .witness
        .iter()
        .map(|r| (r * BigRational::from_integer(denom.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let g = if g.is_zero() { BigInt::one() } else { g };
    ints.iter()
        .map(|v| (v / &g).to_i64().ok_or_else(|| Error::Internal("1-PSG exponent overflow".into())))
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

fn classify_p_divides_n(f: &Polynomial, opts: &ClassifyOptions) -> Result<StabilityVerdict> {
    let n = f.nvars();
    let basis = BasisChange::lbc(n, f.field())?;
    let g = basis.to_basis(f)?;
    let monos: Vec<Monomial> = g.support().cloned().collect();
    let weights: Vec<Vec<i64>> = monos.iter().map(|m| t2_weight(m.exponents())).collect();
    let ws = WeightSystem::new(2, weights.clone())?;
    let essential = ess_indices(&WeightedVector::full(ws))?;
    let mut decisions = EngineDecisions {
        branch: Branch::PDividingN,
        groebner_invoked: false,
        groebner_in_class_decision: false,
    };
    if essential.is_empty() {
        let y = separating_direction(&weights, 2, &BTreeSet::new())?
            .ok_or_else(|| Error::Internal("ess(f) = 0 but no destabilizing direction".into()))?;
        let psg = OnePsg::new(&basis, t2_exponents(&y, n), Direction::ToZero)?;
        return Ok(StabilityVerdict {
            class: StabilityClass::Unstable,
            splitting: Some(DecoratedSplitting::from_psg(&psg)?),
            certificate: destabilizing(&basis, psg, f)?,
            stabilizer: None,
            decisions,
        });
    }
    let w_basis = Polynomial::from_terms(
        g.nvars(),
        g.field(),
        g.terms()
            .enumerate()
            .filter(|(i, _)| essential.contains(i))
            .map(|(_, (m, c))| (m.clone(), c.clone())),
    );
    let w = basis.from_basis(&w_basis)?;
    let mut checks = vec![RuleOutCheck::failed("ess(f) = 0 on the rank-two torus", "")];
    let sd;
    if w == *f {
        checks.push(RuleOutCheck::failed(
            "some torus weight of f is not essential",
            "ess(f) = f",
        ));
        let s = stabilizer_dim(f, opts.limits)?;
        decisions.groebner_invoked |= s.method == StabMethod::Groebner;
        sd = s;
    } else {
        let test = same_orbit_dim_test(f, &w, opts.limits)?;
        let used = [test.dim_f, test.dim_w].iter().any(|s| s.method == StabMethod::Groebner);
        decisions.groebner_invoked |= used;
        decisions.groebner_in_class_decision |= used;
        if !test.equal {
            let y = separating_direction(&weights, 2, &essential)?
                .ok_or_else(|| Error::Internal("no 1-PSG realizes ess(f)".into()))?;
            let psg = OnePsg::new(&basis, t2_exponents(&y, n), Direction::ToZero)?;
            let (certificate, limit) = boundary(&basis, psg.clone(), f, Some((test.dim_f, test.dim_w)))?;
            if limit != w {
                return Err(Error::Internal("1-PSG limit differs from ess(f)".into()));
            }
            return Ok(StabilityVerdict {
                class: StabilityClass::SemistableNotPolystable,
                certificate,
                stabilizer: Some(test.dim_f),
                splitting: Some(DecoratedSplitting::from_psg(&psg)?),
                decisions,
            });
        }
        checks.push(RuleOutCheck::failed(
            "stabilizer dimensions of f and ess(f) differ",
            format!("both are {}", test.dim_f.dim),
        ));
        sd = test.dim_f;
    }
    Ok(StabilityVerdict {
        class: if sd.dim == 0 {
            StabilityClass::Stable
        } else {
            StabilityClass::PolystableNotStable
        },
        certificate: Certificate::RuleOut { checks },
        stabilizer: Some(sd),
        splitting: None,
        decisions,
    })
}

pub fn is_entirely_even(f: &Polynomial) -> bool {
    f.support().all(|m| m.exponents().iter().all(|e| e % 2 == 0))
}

/// Classifies an entirely even form by the position of the barycenter in its Newton polytope.
pub fn classify_entirely_even(f: &Polynomial, opts: &ClassifyOptions) -> Result<StabilityVerdict> {
    if f.field().characteristic() == 2 {
        return Err(Error::UnsupportedCharacteristic(
            "entirely even classification needs characteristic != 2".into(),
        ));
    }
    if let Some(v) = trivial(f) {
        return v.emit(f.field());
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    if !is_entirely_even(f) {
        return Err(Error::Invalid("support is not entirely even".into()));
    }
    let n = f.nvars();
    let basis = BasisChange::standard(n, f.field());
    let torus = newton_classify(f)?;
    let monos: Vec<Monomial> = f.support().cloned().collect();
    let weights: Vec<Vec<i64>> = monos.iter().map(|m| st_character(m.exponents())).collect();
    let exps = |y: &[i64]| {
        let mut e = y.to_vec();
        e.push(-y.iter().sum::<i64>());
        e
    };
    let mut decisions = EngineDecisions {
        branch: Branch::EntirelyEven,
        groebner_invoked: false,
        groebner_in_class_decision: false,
    };
    let v = match torus {
        StabilityClass::Unstable => {
            let y = separating_direction(&weights, n - 1, &BTreeSet::new())?
                .ok_or_else(|| Error::Internal("barycenter outside NP(f) but no direction".into()))?;
            let psg = OnePsg::new(&basis, exps(&y), Direction::ToZero)?;
            StabilityVerdict {
                class: StabilityClass::Unstable,
                splitting: Some(DecoratedSplitting::from_psg(&psg)?),
                certificate: destabilizing(&basis, psg, f)?,
                stabilizer: None,
                decisions,
            }
        }
        StabilityClass::SemistableNotPolystable => {
            let ws = WeightSystem::new(n - 1, weights.clone())?;
            let essential = ess_indices(&WeightedVector::full(ws))?;
            let y = separating_direction(&weights, n - 1, &essential)?
                .ok_or_else(|| Error::Internal("no 1-PSG realizes ess(f)".into()))?;
            let psg = OnePsg::new(&basis, exps(&y), Direction::ToZero)?;
            let (certificate, _) = boundary(&basis, psg.clone(), f, None)?;
            StabilityVerdict {
                class: StabilityClass::SemistableNotPolystable,
                certificate,
                stabilizer: None,
                splitting: Some(DecoratedSplitting::from_psg(&psg)?),
                decisions,
            }
        }
        _ => {
            let sd = stabilizer_dim(f, opts.limits)?;
            decisions.groebner_invoked |= sd.method == StabMethod::Groebner;
            StabilityVerdict {
                class: if sd.dim == 0 {
                    StabilityClass::Stable
                } else {
                    StabilityClass::PolystableNotStable
                },
                certificate: Certificate::RuleOut {
                    checks: vec![RuleOutCheck::failed(
                        "the barycenter (d/n, ..., d/n) lies on the relative boundary of NP(f) or outside it",
                        format!("torus verdict {torus}"),
                    )],
                },
                stabilizer: Some(sd),
                splitting: None,
                decisions,
            }
        }
    };
    v.emit(f.field())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyPath {
    Shortcut,
    Fallback,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyVerdict {
    pub verdict: StabilityVerdict,
    pub path: FamilyPath,
    pub criterion: String,
}

impl fmt::Display for FamilyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyPath::Shortcut => "shortcut",
            FamilyPath::Fallback => "fallback",
        })
    }
}

/// Distinct parts `k_i` with multiplicities `a_i`.
fn multiplicities(shape: &Partition) -> Vec<(u64, u64)> {
    let mut out: BTreeMap<u64, u64> = BTreeMap::new();
    for &k in shape.parts() {
        *out.entry(k as u64).or_default() += 1;
    }
    out.into_iter().rev().collect()
}

fn is_power_of(k: u64, p: u64) -> bool {
    let mut k = k;
    while k.is_multiple_of(p) {
        k /= p;
    }
    k == 1
}

/// Integer coefficient of `s_mu` in `D^k/k! s_lambda` for `|lambda| < n`:
/// `prod (n + j - i) * f^{lambda/mu} / k!` over the boxes of `lambda/mu`.
pub fn divided_power_schur_coefficient(shape: &SkewShape, n: usize) -> BigInt {
    let mut prod = BigInt::one();
    for i in 0..shape.outer().len() {
        for j in shape.inner().part(i)..shape.outer().part(i) {
            prod *= BigInt::from(n as i64 + j as i64 - i as i64);
        }
    }
    let total = prod * symfun::skew_syt_count(shape);
    let (q, r) = total.div_rem(&factorial(shape.size() as u64));
    debug_assert!(r.is_zero());
    q
}

fn sub_partitions(shape: &Partition) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(shape.len());
    fn go(shape: &Partition, i: usize, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i == shape.len() {
            out.push(Partition::new(cur.clone()).expect("weakly decreasing"));
            return;
        }
        for v in 0..=shape.part(i).min(cap) {
            cur.push(v);
            go(shape, i + 1, v, cur, out);
            cur.pop();
        }
    }
    go(shape, 0, u32::MAX, &mut cur, &mut out);
    out
}

/// The family shortcut alone: `Some((class, criterion))` when a closed-form criterion applies.
pub fn family_shortcut(kind: BasisKind, shape: &Partition, n: usize, field: FieldSpec) -> Option<(StabilityClass, String)> {
    let d = shape.size() as usize;
    let p = field.characteristic();
    if d >= n || d == 0 || (p != 0 && (n as u64).is_multiple_of(p)) {
        return None;
    }
    let poly = StabilityClass::PolystableNotStable;
    let min = shape.min_part().unwrap_or(0);
    let mult = multiplicities(shape);
    match (kind, p) {
        (BasisKind::Elementary | BasisKind::Homogeneous | BasisKind::PowerSum, 0) => Some(if min >= 2 {
            (poly, "char 0, d < n: every part of lambda is >= 2".to_string())
        } else {
            (StabilityClass::Unstable, "char 0, d < n: lambda has a part equal to 1, so l divides f".to_string())
        }),
        (BasisKind::Schur, 0) => Some(if d >= 2 {
            (poly, "char 0, 2 <= d < n: Schur polynomials are polystable".to_string())
        } else {
            (StabilityClass::Unstable, "s_(1) = l".to_string())
        }),
        (BasisKind::Elementary, _) => {
            let hit = mult.iter().any(|&(k, a)| !((n as u64 + 1 - k) * a).is_multiple_of(p));
            (min >= 2 && hit).then(|| (poly, "e_lambda: parts >= 2 and p does not divide (n+1-k_i) a_i for some i".to_string()))
        }
        (BasisKind::Homogeneous, _) => {
            let hit = mult.iter().any(|&(k, a)| !((n as u64 + k - 1) * a).is_multiple_of(p));
            (min >= 2 && hit).then(|| (poly, "h_lambda: parts >= 2 and p does not divide (n+k_i-1) a_i for some i".to_string()))
        }
        (BasisKind::PowerSum, _) => {
            let no_power = mult.iter().all(|&(k, _)| !is_power_of(k, p));
            let hit = mult.iter().any(|&(k, a)| (k * a) % p != 0);
            (no_power && hit).then(|| (poly, "p_lambda: no part is a power of p and p does not divide a_i k_i for some i".to_string()))
        }
        (BasisKind::Schur, _) => {
            if d < 2 {
                return None;
            }
            let pb = BigInt::from(p);
            let hit = sub_partitions(shape).into_iter().any(|mu| {
                mu.size() < shape.size()
                    && !(divided_power_schur_coefficient(&SkewShape::new(shape.clone(), mu).expect("contained"), n) % &pb).is_zero()
            });
            hit.then(|| (poly, "s_lambda: 1 < d < n, l does not divide s_lambda, and some D^k/k! coefficient is nonzero mod p".to_string()))
        }
        (BasisKind::Monomial, _) => None,
    }
}

/// Classifies `e/h/p/s_lambda` in `n` variables, by a family criterion when one applies.
pub fn classify_family(kind: BasisKind, shape: &Partition, n: usize, field: FieldSpec, opts: &ClassifyOptions) -> Result<FamilyVerdict> {
    let f = symfun::basis_poly(kind, shape, n, field)?;
    let Some((class, criterion)) = family_shortcut(kind, shape, n, field) else {
        let verdict = classify_symmetric(&f, opts)?;
        return Ok(FamilyVerdict {
            verdict,
            path: FamilyPath::Fallback,
            criterion: "general algorithm".into(),
        });
    };
    let mut decisions = EngineDecisions {
        branch: Branch::FamilyShortcut,
        groebner_invoked: false,
        groebner_in_class_decision: false,
    };
    let verdict = if class == StabilityClass::Unstable {
        let basis = BasisChange::lb(n, field)?;
        let l = Polynomial::linear_form(field, &vec![field.one(); n]);
        if is_divisible_by_linear(&f, &l)?.is_none() {
            return Err(Error::Internal(format!("family criterion '{criterion}' claims l | f")));
        }
        let psg = OnePsg::canonical(&basis, Direction::ToZero)?;
        StabilityVerdict {
            class,
            splitting: Some(DecoratedSplitting::from_psg(&psg)?),
            certificate: destabilizing(&basis, psg, &f)?,
            stabilizer: None,
            decisions,
        }
    } else {
        let sd = stabilizer_dim(&f, opts.limits)?;
        decisions.groebner_invoked = sd.method == StabMethod::Groebner;
        StabilityVerdict {
            class: if sd.dim == 0 {
                StabilityClass::Stable
            } else {
                StabilityClass::PolystableNotStable
            },
            certificate: Certificate::RuleOut {
                checks: vec![
                    RuleOutCheck::failed(format!("l divides {}{}", kind.symbol(), shape), criterion.clone()),
                    RuleOutCheck::failed(format!("D^k/k! {}{} = 0 for every k > 0", kind.symbol(), shape), criterion.clone()),
                ],
            },
            stabilizer: Some(sd),
            splitting: None,
            decisions,
        }
    };
    Ok(FamilyVerdict {
        verdict: verdict.emit(field)?,
        path: FamilyPath::Shortcut,
        criterion,
    })
}
