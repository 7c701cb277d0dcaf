//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{binomial, FieldSpec, Scalar};
use crate::linalg::Matrix;

/// Dense exponent vector. `Ord` is graded reverse lexicographic with
/// `x1 > x2 > ... > xn`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(
            other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn cmp_lex(&self, other: &Monomial) -> Ordering {
        self.0.cmp(&other.0)
    }

    pub fn cmp_grevlex(&self, other: &Monomial) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_grevlex(other)
    }
}

/// Term order used for printing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TermOrder {
    #[default]
    GrevLex,
    Lex,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    nvars: usize,
    field: FieldSpec,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize, field: FieldSpec) -> Self {
        Polynomial {
            nvars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let field = c.field();
        Polynomial::monomial(nvars, field, Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize, field: FieldSpec) -> Self {
        Polynomial::constant(nvars, field.one())
    }

    pub fn var(nvars: usize, field: FieldSpec, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        Polynomial::monomial(nvars, field, Monomial::var(nvars, i), field.one())
    }

    pub fn monomial(nvars: usize, field: FieldSpec, m: Monomial, c: Scalar) -> Self {
        let mut p = Polynomial::zero(nvars, field);
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I>(nvars: usize, field: FieldSpec, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut p = Polynomial::zero(nvars, field);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Linear form `sum coeffs[i] * x_i`.
    pub fn linear_form(field: FieldSpec, coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        Polynomial::from_terms(
            n,
            field,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(n, i), c.clone())),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing graded reverse lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Scalar> {
        self.terms
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.terms.keys()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Exponent of variable `i` in every term is at least `k`.
    pub fn divisible_by_var_power(&self, i: usize, k: u32) -> bool {
        self.terms.keys().all(|m| m.0[i] >= k)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        debug_assert_eq!(m.nvars(), self.nvars);
        debug_assert!(self.field.owns(&c));
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `self -= c * m * g`.
    pub fn sub_scaled_shifted(&mut self, c: &Scalar, m: &Monomial, g: &Polynomial) {
        for (gm, gc) in &g.terms {
            self.add_term(gm.mul(m), -&(c * gc));
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars, self.field);
        }
        Polynomial {
            nvars: self.nvars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn shift(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inverse().expect("nonzero leading coefficient")),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars, self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars, self.field);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c * &self.field.from_u64(e as u64));
        }
        out
    }

    /// Replaces `x_j` by `images[j]`; all images must share a ring.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.nvars {
            return Err(Error::Dimension(format!(
                "{} images for {} variables",
                images.len(),
                self.nvars
            )));
        }
        let Some(first) = images.first() else {
            // zero variables: the polynomial is a constant
            return Ok(self.clone());
        };
        let target_n = first.nvars;
        if images
            .iter()
            .any(|p| p.nvars != target_n || p.field != self.field)
        {
            return Err(Error::Dimension("substitution images live in different rings".into()));
        }
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(target_n, self.field), p.clone()])
            .collect();
        let mut out = Polynomial::zero(target_n, self.field);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target_n, c.clone());
            for (j, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[j].len() <= e {
                    let next = &powers[j][powers[j].len() - 1] * &images[j];
                    powers[j].push(next);
                }
                term = &term * &powers[j][e];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// `f(M x)`: each `x_j` becomes the `j`-th coordinate of `M x`.
    pub fn substitute_linear(&self, m: &Matrix) -> Result<Polynomial> {
        if m.rows() != self.nvars || m.cols() != self.nvars {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for {} variables",
                m.rows(),
                m.cols(),
                self.nvars
            )));
        }
        if m.field() != self.field {
            return Err(Error::Dimension("matrix over a different field".into()));
        }
        let images: Vec<Polynomial> = (0..self.nvars)
            .map(|j| Polynomial::linear_form(self.field, m.row(j)))
            .collect();
        self.substitute(&images)
    }

    /// Re-reads the polynomial in a larger ring, placing variable `i` at `offset + i`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Polynomial {
        assert!(offset + self.nvars <= nvars);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; nvars];
            e[offset..offset + self.nvars].copy_from_slice(&m.0);
            (Monomial(e), c.clone())
        });
        Polynomial::from_terms(nvars, self.field, terms)
    }

    /// Views the polynomial as one in the last `nvars - k` variables whose
    /// coefficients are polynomials in the first `k`.
    pub fn split_leading_vars(&self, k: usize) -> BTreeMap<Monomial, Polynomial> {
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let head = Monomial(m.0[..k].to_vec());
            let tail = Monomial(m.0[k..].to_vec());
            out.entry(tail)
                .or_insert_with(|| Polynomial::zero(k, self.field))
                .add_term(head, c.clone());
        }
        out
    }

    pub fn permute_variables(&self, perm: &[usize]) -> Polynomial {
        assert_eq!(perm.len(), self.nvars);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; self.nvars];
            for (i, &p) in perm.iter().enumerate() {
                e[p] = m.0[i];
            }
            (Monomial(e), c.clone())
        });
        Polynomial::from_terms(self.nvars, self.field, terms)
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars);
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Coefficient of `eps^k` in `f(x_1 + eps, ..., x_n + eps)`.
    pub fn shift_coefficient(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars, self.field);
        for (m, c) in &self.terms {
            if m.degree() < k {
                continue;
            }
            distribute_shift(m, c, k, 0, &mut m.0.clone(), self.field.one(), &mut out);
        }
        out
    }

    pub fn to_string_with(&self, names: &[&str], order: TermOrder) -> String {
        format_terms(self, order, |m| {
            let mut s = String::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => s.push_str(names[i]),
                    _ => s.push_str(&format!("{}^{e}", names[i])),
                }
            }
            s
        }, "")
    }
}

fn distribute_shift(
    m: &Monomial,
    c: &Scalar,
    remaining: u32,
    var: usize,
    current: &mut Vec<u32>,
    acc: Scalar,
    out: &mut Polynomial,
) {
    if remaining == 0 {
        out.add_term(Monomial(current.clone()), c * &acc);
        return;
    }
    if var == m.0.len() {
        return;
    }
    let e = m.0[var];
    let field = c.field();
    for j in 0..=e.min(remaining) {
        let b = field.from_bigint(&binomial(e as u64, j as u64));
        if b.is_zero() {
            continue;
        }
        current[var] = e - j;
        distribute_shift(m, c, remaining - j, var + 1, current, &acc * &b, out);
    }
    current[var] = e;
}

fn format_terms<F>(p: &Polynomial, order: TermOrder, mono: F, mul_sep: &str) -> String
where
    F: Fn(&Monomial) -> String,
{
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(&Monomial, &Scalar)> = p.terms.iter().collect();
    match order {
        TermOrder::GrevLex => terms.sort_by(|a, b| b.0.cmp_grevlex(a.0)),
        TermOrder::Lex => terms.sort_by(|a, b| b.0.cmp_lex(a.0)),
    }
    let mut out = String::new();
    for (idx, (m, c)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        let abs = if neg { -c } else { c.clone() };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let ms = mono(m);
        if ms.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&ms);
        } else {
            out.push_str(&abs.to_string());
            out.push_str(mul_sep);
            out.push_str(&ms);
        }
    }
    out
}

impl fmt::Display for Polynomial {
    /// Canonical form: graded reverse lexicographic, descending, `x1^2*x2` style.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format_terms(
            self,
            TermOrder::GrevLex,
            |m| {
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{e}", i + 1)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*")
            },
            "*",
        );
        f.write_str(&s)
    }
}

fn check_ring(a: &Polynomial, b: &Polynomial) {
    assert_eq!(a.nvars, b.nvars, "polynomials in different numbers of variables");
    assert_eq!(a.field, b.field, "polynomials over different fields");
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        check_ring(self, rhs);
        let (mut big, small) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        check_ring(self, rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        check_ring(self, rhs);
        let mut out = Polynomial::zero(self.nvars, self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-&self.field.one())
    }
}

macro_rules! forward_poly {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_poly!(Add, add);
forward_poly!(Sub, sub);
forward_poly!(Mul, mul);

/// Decides whether the linear form `l` divides `f`, returning the quotient.
///
/// `l` is moved to a coordinate by an invertible substitution; `l | f` iff
/// that coordinate divides every term of the transformed polynomial.
pub fn is_divisible_by_linear(f: &Polynomial, l: &Polynomial) -> Result<Option<Polynomial>> {
    let (pivot, fwd, back) = linear_coordinate_change(f, l)?;
    let g = f.substitute_linear(&back)?;
    if !g.divisible_by_var_power(pivot, 1) {
        return Ok(None);
    }
    let shifted = Polynomial::from_terms(
        g.nvars,
        g.field,
        g.terms.iter().map(|(m, c)| {
            let mut e = m.0.clone();
            e[pivot] -= 1;
            (Monomial(e), c.clone())
        }),
    );
    Ok(Some(shifted.substitute_linear(&fwd)?))
}

/// Largest `k` with `l^k | f` (for `f != 0`).
pub fn linear_multiplicity(f: &Polynomial, l: &Polynomial) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (pivot, _, back) = linear_coordinate_change(f, l)?;
    let g = f.substitute_linear(&back)?;
    Ok(g.terms.keys().map(|m| m.0[pivot]).min().unwrap_or(0))
}

/// Returns `(pivot, A, A^{-1})` where `A` maps coordinates `y` with
/// `y_pivot = l(x)` and `y_i = x_i` otherwise.
fn linear_coordinate_change(f: &Polynomial, l: &Polynomial) -> Result<(usize, Matrix, Matrix)> {
    if l.nvars != f.nvars || l.field != f.field {
        return Err(Error::Dimension("linear form lives in a different ring".into()));
    }
    if l.is_zero() || l.terms.keys().any(|m| m.degree() != 1) {
        return Err(Error::Invalid("divisor must be a nonzero homogeneous linear form".into()));
    }
    let n = f.nvars;
    let field = f.field;
    let mut coeffs = vec![field.zero(); n];
    for (m, c) in &l.terms {
        let i = m.0.iter().position(|&e| e == 1).expect("linear term");
        coeffs[i] = c.clone();
    }
    let pivot = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero form");
    let mut fwd = Matrix::identity(n, field);
    for (j, c) in coeffs.iter().enumerate() {
        fwd.set(pivot, j, c.clone());
    }
    let back = fwd.inverse().expect("coordinate change is invertible");
    Ok((pivot, fwd, back))
}
