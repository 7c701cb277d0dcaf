//! Polynomials whose coefficients are polynomials in formal parameters.
//!
//! A [`ParamPolynomial`] in `n` variables with `k` parameters is stored as an
//! ordinary polynomial in `n + k` variables, the parameters last.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::Matrix;
use crate::poly::{Monomial, Polynomial, TermOrder};

/// A polynomial in named parameters with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamScalar {
    names: Vec<String>,
    poly: Polynomial,
}

impl ParamScalar {
    pub fn new(names: Vec<String>, poly: Polynomial) -> Result<Self> {
        if poly.nvars() != names.len() {
            return Err(Error::Dimension("one name per parameter".into()));
        }
        Ok(ParamScalar { names, poly })
    }

    pub fn zero(names: &[String], field: FieldSpec) -> Self {
        ParamScalar {
            names: names.to_vec(),
            poly: Polynomial::zero(names.len(), field),
        }
    }

    pub fn constant(names: &[String], c: Scalar) -> Self {
        ParamScalar {
            names: names.to_vec(),
            poly: Polynomial::constant(names.len(), c),
        }
    }

    pub fn param(names: &[String], field: FieldSpec, i: usize) -> Self {
        ParamScalar {
            names: names.to_vec(),
            poly: Polynomial::var(names.len(), field, i),
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn as_polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn field(&self) -> FieldSpec {
        self.poly.field()
    }

    /// Exact: zero iff every coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.poly.support().all(Monomial::is_one)
    }

    pub fn evaluate(&self, values: &[Scalar]) -> Scalar {
        self.poly.evaluate(values)
    }

    /// `c * a^e * cofactor` where `a^e` is the largest monomial dividing every term
    /// and `c` is the leading coefficient of the rest.
    pub fn factors(&self) -> Vec<String> {
        if self.poly.is_zero() {
            return vec!["0".into()];
        }
        let k = self.names.len();
        let mut content = vec![u32::MAX; k];
        for m in self.poly.support() {
            for (i, &e) in m.exponents().iter().enumerate() {
                content[i] = content[i].min(e);
            }
        }
        let lc = self.poly.leading().expect("nonzero").1.clone();
        let inv = lc.inverse().expect("nonzero leading coefficient");
        let cofactor = Polynomial::from_terms(
            k,
            self.field(),
            self.poly.terms().map(|(m, c)| {
                let e = m.exponents().iter().zip(&content).map(|(a, b)| a - b).collect();
                (Monomial::new(e), c * &inv)
            }),
        );
        let mut out = Vec::new();
        if !lc.is_one() {
            out.push(lc.to_string());
        }
        for (i, &e) in content.iter().enumerate() {
            match e {
                0 => {}
                1 => out.push(self.names[i].clone()),
                _ => out.push(format!("{}^{e}", self.names[i])),
            }
        }
        if !cofactor.support().all(Monomial::is_one) {
            out.push(format!("({})", self.print(&cofactor)));
        }
        if out.is_empty() {
            out.push("1".into());
        }
        out
    }

    fn print(&self, p: &Polynomial) -> String {
        let names: Vec<&str> = self.names.iter().map(String::as_str).collect();
        p.to_string_with(&names, TermOrder::Lex)
    }

    fn lift(&self, poly: Polynomial) -> Self {
        ParamScalar {
            names: self.names.clone(),
            poly,
        }
    }
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print(&self.poly))
    }
}

impl Add for &ParamScalar {
    type Output = ParamScalar;
    fn add(self, rhs: &ParamScalar) -> ParamScalar {
        self.lift(&self.poly + &rhs.poly)
    }
}

impl Sub for &ParamScalar {
    type Output = ParamScalar;
    fn sub(self, rhs: &ParamScalar) -> ParamScalar {
        self.lift(&self.poly - &rhs.poly)
    }
}

impl Mul for &ParamScalar {
    type Output = ParamScalar;
    fn mul(self, rhs: &ParamScalar) -> ParamScalar {
        self.lift(&self.poly * &rhs.poly)
    }
}

impl Neg for &ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        self.lift(self.poly.scale(&-&self.field().one()))
    }
}

/// A polynomial in `nvars` variables with [`ParamScalar`] coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPolynomial {
    nvars: usize,
    names: Vec<String>,
    joint: Polynomial,
}

impl ParamPolynomial {
    /// Reads `joint` (in `nvars + names.len()` variables) with the trailing variables as parameters.
    pub fn from_joint(joint: Polynomial, nvars: usize, names: Vec<String>) -> Result<Self> {
        if joint.nvars() != nvars + names.len() {
            return Err(Error::Dimension("joint ring size differs from variables plus parameters".into()));
        }
        Ok(ParamPolynomial { nvars, names, joint })
    }

    pub fn constant_in_params(f: &Polynomial, names: Vec<String>) -> Self {
        let joint = f.embed(f.nvars() + names.len(), 0);
        ParamPolynomial {
            nvars: f.nvars(),
            names,
            joint,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn joint(&self) -> &Polynomial {
        &self.joint
    }

    /// Monomial in the variables to its parameter coefficient; zero coefficients are absent.
    pub fn coefficients(&self) -> BTreeMap<Monomial, ParamScalar> {
        let k = self.names.len();
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in self.joint.terms() {
            let (vars, params) = m.exponents().split_at(self.nvars);
            out.entry(Monomial::new(vars.to_vec()))
                .or_insert_with(|| Polynomial::zero(k, self.joint.field()))
                .add_term(Monomial::new(params.to_vec()), c.clone());
        }
        out.into_iter()
            .map(|(m, poly)| {
                (
                    m,
                    ParamScalar {
                        names: self.names.clone(),
                        poly,
                    },
                )
            })
            .collect()
    }

    /// Support for generic parameter values.
    pub fn support(&self) -> Vec<Monomial> {
        self.coefficients().into_keys().collect()
    }

    /// Substitutes values for the parameters.
    pub fn specialize(&self, values: &[Scalar]) -> Result<Polynomial> {
        if values.len() != self.names.len() {
            return Err(Error::Dimension("one value per parameter".into()));
        }
        let field = self.joint.field();
        let mut images: Vec<Polynomial> = (0..self.nvars).map(|i| Polynomial::var(self.nvars, field, i)).collect();
        images.extend(values.iter().map(|v| Polynomial::constant(self.nvars, v.clone())));
        self.joint.substitute(&images)
    }
}

/// A linear map `x_j -> sum_i M_ij(params) x_i` with parameter-polynomial entries.
#[derive(Clone, Debug, PartialEq)]
pub struct GenericBaseChange {
    nvars: usize,
    names: Vec<String>,
    /// Image of each variable, in the joint ring.
    images: Vec<Polynomial>,
}

impl GenericBaseChange {
    pub fn new(nvars: usize, names: Vec<String>, images: Vec<Polynomial>) -> Result<Self> {
        let total = nvars + names.len();
        if images.len() != nvars || images.iter().any(|p| p.nvars() != total) {
            return Err(Error::Dimension("one image per variable in the joint ring".into()));
        }
        for p in &images {
            for m in p.support() {
                let deg: u32 = m.exponents()[..nvars].iter().sum();
                if deg != 1 {
                    return Err(Error::Invalid("images must be linear in the variables".into()));
                }
            }
        }
        Ok(GenericBaseChange { nvars, names, images })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn apply(&self, f: &Polynomial) -> Result<ParamPolynomial> {
        if f.nvars() != self.nvars {
            return Err(Error::Dimension("polynomial lives in a different ring".into()));
        }
        let joint = f.substitute(&self.images)?;
        ParamPolynomial::from_joint(joint, self.nvars, self.names.clone())
    }

    /// `M[i][j]`: coefficient of `x_i` in the image of `x_j`.
    pub fn matrix(&self) -> Vec<Vec<ParamScalar>> {
        let field = self.images[0].field();
        let mut out = vec![vec![ParamScalar::zero(&self.names, field); self.nvars]; self.nvars];
        for (j, img) in self.images.iter().enumerate() {
            let pp = ParamPolynomial::from_joint(img.clone(), self.nvars, self.names.clone()).expect("sized");
            for (m, c) in pp.coefficients() {
                let i = m.exponents().iter().position(|&e| e == 1).expect("linear");
                out[i][j] = c;
            }
        }
        out
    }

    /// Determinant is the constant 1: `M - I` is nilpotent.
    pub fn is_unipotent(&self) -> bool {
        let n = self.nvars;
        let field = self.images[0].field();
        let one = ParamScalar::constant(&self.names, field.one());
        let mut nmat = self.matrix();
        for (i, row) in nmat.iter_mut().enumerate() {
            row[i] = &row[i] - &one;
        }
        let mul = |a: &Vec<Vec<ParamScalar>>, b: &Vec<Vec<ParamScalar>>| {
            let mut c = vec![vec![ParamScalar::zero(&self.names, field); n]; n];
            for i in 0..n {
                for k in 0..n {
                    if a[i][k].is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        if !b[k][j].is_zero() {
                            c[i][j] = &c[i][j] + &(&a[i][k] * &b[k][j]);
                        }
                    }
                }
            }
            c
        };
        let mut power = nmat.clone();
        for _ in 1..n.max(1) {
            if power.iter().flatten().all(ParamScalar::is_zero) {
                return true;
            }
            power = mul(&power, &nmat);
        }
        power.iter().flatten().all(ParamScalar::is_zero)
    }

    /// The map at specific parameter values, as a matrix acting by `substitute_linear`.
    pub fn specialize(&self, values: &[Scalar]) -> Result<Matrix> {
        let m = self.matrix();
        let field = self.images[0].field();
        let rows = (0..self.nvars)
            .map(|j| (0..self.nvars).map(|i| m[i][j].evaluate(values)).collect())
            .collect();
        Matrix::from_rows(field, rows)
    }
}
