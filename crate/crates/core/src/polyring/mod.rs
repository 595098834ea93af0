//! Exact multivariate polynomials over the rationals.
//!
//! Terms are kept in a map keyed by exponent vectors ordered graded-lex, so
//! iteration order (and therefore the printed form) is canonical.

mod eval;
mod parse;

pub use eval::{CompiledPoly, ComplexPoint};
pub use parse::parse_polynomial;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("dimension mismatch: polynomial has {expected} variables, point has {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("size mismatch: {polys} polynomials against {vars} variables")]
    SizeMismatch { polys: usize, vars: usize },
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("non-finite coordinate in complex point")]
    NonFinite,
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}

/// Exponent vector with graded-lex ordering: total degree first, then
/// lexicographic on the exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Result of [`Polynomial::homogeneous_degree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Degree(u32),
    Inhomogeneous,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    variables: Vec<String>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(variables: Vec<String>) -> Self {
        Polynomial {
            variables,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(variables: Vec<String>, c: BigRational) -> Self {
        let n = variables.len();
        let mut p = Polynomial::zero(variables);
        p.add_term(Monomial::one(n), c);
        p
    }

    /// The polynomial consisting of the single variable with index `i`.
    pub fn variable(variables: Vec<String>, i: usize) -> Self {
        let mut exps = vec![0; variables.len()];
        exps[i] = 1;
        let mut p = Polynomial::zero(variables);
        p.add_term(Monomial(exps), BigRational::one());
        p
    }

    pub fn from_terms<I>(variables: Vec<String>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut p = Polynomial::zero(variables);
        for (e, c) in terms {
            assert_eq!(e.len(), p.variables.len(), "exponent length mismatch");
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Linear form `Σ coeffs[i]·v_i`.
    pub fn linear_form(variables: Vec<String>, coeffs: &[BigRational]) -> Self {
        assert_eq!(coeffs.len(), variables.len());
        let n = variables.len();
        let mut p = Polynomial::zero(variables);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    /// Variable names `prefix1..prefixN`.
    pub fn var_names(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Highest total degree of any term; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Degree in the variable with index `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.0.len(), self.variables.len());
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Same polynomial over a renamed variable list of equal length.
    pub fn with_variables(mut self, variables: Vec<String>) -> Self {
        assert_eq!(variables.len(), self.variables.len());
        self.variables = variables;
        self
    }

    fn check_compatible(&self, other: &Polynomial) {
        assert_eq!(
            self.variables, other.variables,
            "polynomials over different variable lists"
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_compatible(other);
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, s: &BigRational) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero(self.variables.clone());
        }
        Polynomial {
            variables: self.variables.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * s))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check_compatible(other);
        let mut r = Polynomial::zero(self.variables.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                r.add_term(Monomial(e), ca * cb);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::constant(self.variables.clone(), BigRational::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Formal partial derivative with respect to the variable at index `i`.
    pub fn derivative_index(&self, i: usize) -> Polynomial {
        let mut r = Polynomial::zero(self.variables.clone());
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut ne = m.0.clone();
            ne[i] -= 1;
            r.add_term(Monomial(ne), c * BigRational::from_integer(BigInt::from(e)));
        }
        r
    }

    pub fn derivative(&self, var: &str) -> Result<Polynomial, PolyError> {
        let i = self
            .var_index(var)
            .ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
        Ok(self.derivative_index(i))
    }

    /// Sets every variable in `tvars` to zero, dropping them from the variable
    /// list. Names not present in the polynomial are ignored.
    pub fn restrict_zero(&self, tvars: &[&str]) -> Polynomial {
        let drop: Vec<bool> = self
            .variables
            .iter()
            .map(|v| tvars.contains(&v.as_str()))
            .collect();
        let keep_vars: Vec<String> = self
            .variables
            .iter()
            .zip(&drop)
            .filter(|(_, d)| !**d)
            .map(|(v, _)| v.clone())
            .collect();
        let mut r = Polynomial::zero(keep_vars);
        for (m, c) in &self.terms {
            if m.0.iter().zip(&drop).any(|(e, d)| *d && *e > 0) {
                continue;
            }
            let e: Vec<u32> = m
                .0
                .iter()
                .zip(&drop)
                .filter(|(_, d)| !**d)
                .map(|(e, _)| *e)
                .collect();
            r.add_term(Monomial(e), c.clone());
        }
        r
    }

    pub fn homogeneous_degree(&self) -> Result<Homogeneity, PolyError> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let first = degrees.next().ok_or(PolyError::ZeroPolynomial)?;
        if degrees.all(|d| d == first) {
            Ok(Homogeneity::Degree(first))
        } else {
            Ok(Homogeneity::Inhomogeneous)
        }
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars());
        let mut sum = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            sum += t;
        }
        sum
    }

    /// Substitutes variable `i` by the linear form `images[i]` over
    /// `new_vars` (each image is a coefficient vector of length
    /// `new_vars.len()`).
    pub fn substitute_linear(&self, new_vars: &[String], images: &[Vec<BigRational>]) -> Polynomial {
        assert_eq!(images.len(), self.nvars());
        let forms: Vec<Polynomial> = images
            .iter()
            .map(|row| Polynomial::linear_form(new_vars.to_vec(), row))
            .collect();
        let mut powers: Vec<Vec<Polynomial>> = forms
            .iter()
            .map(|f| vec![Polynomial::constant(new_vars.to_vec(), BigRational::one()), f.clone()])
            .collect();
        let mut result = Polynomial::zero(new_vars.to_vec());
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(new_vars.to_vec(), c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&forms[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize]);
            }
            result = result.add(&term);
        }
        result
    }

    /// Largest absolute coefficient value, as `f64`.
    pub fn max_abs_coefficient(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .values()
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }

    /// Evaluates at a complex point; see [`CompiledPoly`] for repeated use.
    pub fn eval(&self, z: &ComplexPoint) -> Result<num_complex::Complex64, PolyError> {
        if z.dim() != self.nvars() {
            return Err(PolyError::DimensionMismatch {
                expected: self.nvars(),
                got: z.dim(),
            });
        }
        Ok(CompiledPoly::new(self).eval(z.coords()))
    }
}

/// Exponent vectors of all degree-`k` monomials in `n` variables, in
/// descending lex order.
pub fn monomials_of_degree(n: usize, k: u32) -> Vec<Vec<u32>> {
    fn go(n: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n - 1 {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=k).rev() {
            prefix.push(e);
            go(n, k - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    go(n, k, &mut Vec::new(), &mut out);
    out
}

/// Determinant of `[∂U_i/∂x_j]` by cofactor expansion along rows, with
/// minors memoized by column subset.
pub fn jacobian_det(polys: &[Polynomial], xs: &[&str]) -> Result<Polynomial, PolyError> {
    if polys.is_empty() || polys.len() != xs.len() {
        return Err(PolyError::SizeMismatch {
            polys: polys.len(),
            vars: xs.len(),
        });
    }
    let vars = polys[0].variables().to_vec();
    let mut matrix = Vec::with_capacity(polys.len());
    for p in polys {
        let row = xs
            .iter()
            .map(|x| p.derivative(x))
            .collect::<Result<Vec<_>, _>>()?;
        matrix.push(row);
    }
    Ok(determinant(&matrix, vars))
}

/// Exact determinant of a square matrix of polynomials.
pub fn determinant(matrix: &[Vec<Polynomial>], vars: Vec<String>) -> Polynomial {
    let n = matrix.len();
    if matrix.iter().any(|row| row.iter().all(Polynomial::is_zero)) {
        return Polynomial::zero(vars);
    }
    let mut memo: BTreeMap<u32, Polynomial> = BTreeMap::new();
    minor(matrix, 0, (1u32 << n) - 1, &vars, &mut memo)
}

fn minor(
    matrix: &[Vec<Polynomial>],
    row: usize,
    cols: u32,
    vars: &[String],
    memo: &mut BTreeMap<u32, Polynomial>,
) -> Polynomial {
    if row == matrix.len() {
        return Polynomial::constant(vars.to_vec(), BigRational::one());
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let mut acc = Polynomial::zero(vars.to_vec());
    let mut sign_positive = true;
    for j in 0..matrix.len() {
        if cols & (1 << j) == 0 {
            continue;
        }
        let entry = &matrix[row][j];
        if !entry.is_zero() {
            let sub = minor(matrix, row + 1, cols & !(1 << j), vars, memo);
            if !sub.is_zero() {
                let prod = entry.mul(&sub);
                acc = if sign_positive { acc.add(&prod) } else { acc.sub(&prod) };
            }
        }
        sign_positive = !sign_positive;
    }
    memo.insert(cols, acc.clone());
    acc
}

fn fmt_rational(c: &BigRational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0/1");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", fmt_rational(c))?;
            for (v, &e) in self.variables.iter().zip(&m.0) {
                if e > 0 {
                    write!(f, "*{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}
