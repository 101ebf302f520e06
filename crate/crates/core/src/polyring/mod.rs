//! Sparse multivariate polynomials with big-integer coefficients.
//!
//! Polynomials live in `Z[x0,...,xn]` for a fixed `n`. Terms are kept in a
//! canonical order (graded, then reverse lexicographic: among monomials of
//! equal degree, the one with the smaller power of the highest-index variable
//! that differs comes first), without zero coefficients or repeated
//! monomials, so structural equality is polynomial equality.

mod field;
mod render;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::semigroup::CurveSpec;

pub use field::{ModPolynomial, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },
    #[error("negative exponent in term {term}")]
    NegativeExponent { term: String },
    #[error("polynomial mentions x{var}, beyond x{up_to}")]
    UnexpectedVariable { var: usize, up_to: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent overflow")]
    ExponentOverflow,
}

/// Exponent vector `(e0, ..., en)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u64>);

impl Monomial {
    pub fn new(exponents: Vec<u64>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// `x_var^power` in `nvars` variables.
    pub fn var_power(nvars: usize, var: usize, power: u64) -> Self {
        let mut e = vec![0; nvars];
        e[var] = power;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u64] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: u64) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }
}

impl Ord for Monomial {
    /// Greater means earlier in canonical order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| {
                for (a, b) in self.0.iter().zip(&other.0).rev() {
                    if a != b {
                        return b.cmp(a);
                    }
                }
                Ordering::Equal
            })
            .then_with(|| self.0.len().cmp(&other.0.len()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: BigInt,
    pub mono: Monomial,
}

impl Term {
    pub fn new(coeff: impl Into<BigInt>, mono: Monomial) -> Self {
        Term {
            coeff: coeff.into(),
            mono,
        }
    }
}

/// Weight `(u, v)` under `deg(x_j) = (mn - m_j, m_j)`, `m0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BiDegree(pub u128, pub u128);

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

pub fn bi_degree(mono: &Monomial, curve: &CurveSpec) -> BiDegree {
    assert_eq!(mono.nvars(), curve.nvars(), "monomial/curve size mismatch");
    let top = curve.top() as u128;
    mono.exponents()
        .iter()
        .enumerate()
        .fold(BiDegree(0, 0), |acc, (j, &e)| {
            let mj = curve.m(j) as u128;
            BiDegree(acc.0 + e as u128 * (top - mj), acc.1 + e as u128 * mj)
        })
}

/// `C(n, k)` via the multiplicative formula.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePolynomial {
    nvars: usize,
    terms: Vec<Term>,
}

impl SparsePolynomial {
    pub fn zero(nvars: usize) -> Self {
        SparsePolynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::from_terms(nvars, [Term::new(c, Monomial::one(nvars))])
    }

    pub fn var(nvars: usize, j: usize) -> Self {
        Self::from_terms(nvars, [Term::new(1, Monomial::var_power(nvars, j, 1))])
    }

    pub fn from_term(term: Term) -> Self {
        let nvars = term.mono.nvars();
        Self::from_terms(nvars, [term])
    }

    /// Collects terms into canonical form, merging equal monomials.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = Term>) -> Self {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for t in terms {
            assert_eq!(t.mono.nvars(), nvars, "term has wrong variable count");
            *acc.entry(t.mono).or_insert_with(BigInt::zero) += t.coeff;
        }
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mono, coeff)| Term { coeff, mono })
            .collect();
        SparsePolynomial { nvars, terms }
    }

    /// Builds from `(coeff, exponents)` pairs.
    pub fn from_pairs<C: Into<BigInt>>(
        nvars: usize,
        pairs: impl IntoIterator<Item = (C, Vec<u64>)>,
    ) -> Self {
        Self::from_terms(
            nvars,
            pairs
                .into_iter()
                .map(|(c, e)| Term::new(c, Monomial::new(e))),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_ring(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::VariableCountMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_ring(other)?;
        Ok(Self::from_terms(
            self.nvars,
            self.terms.iter().chain(&other.terms).cloned(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SparsePolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(-&t.coeff, t.mono.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_ring(other)?;
        let products = self.terms.iter().flat_map(|a| {
            other
                .terms
                .iter()
                .map(move |b| Term::new(&a.coeff * &b.coeff, a.mono.mul(&b.mono)))
        });
        Ok(Self::from_terms(self.nvars, products))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, 1);
        for _ in 0..k {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// `(p - q)^m` expanded with exact binomial coefficients.
    pub fn binomial_power(p: &Term, q: &Term, m: u64) -> Self {
        let nvars = p.mono.nvars();
        assert_eq!(nvars, q.mono.nvars(), "binomial terms in different rings");
        let terms = (0..=m).map(|k| {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let coeff = binomial(m, k)
                * sign
                * num_traits::pow(p.coeff.clone(), (m - k) as usize)
                * num_traits::pow(q.coeff.clone(), k as usize);
            Term::new(coeff, p.mono.pow(m - k).mul(&q.mono.pow(k)))
        });
        Self::from_terms(nvars, terms)
    }

    /// Exact division by a monomial; fails if any exponent would go negative.
    pub fn div_monomial(&self, d: &Monomial) -> Result<Self, PolyError> {
        let laurent = self.div_monomial_laurent(d);
        if let Some(bad) = laurent.negative_terms().first() {
            return Err(PolyError::NegativeExponent {
                term: bad.to_string(),
            });
        }
        Ok(laurent.into_polynomial().expect("no negative exponents"))
    }

    /// Division allowing negative exponents, for inspecting which terms
    /// survive as genuine monomials.
    pub fn div_monomial_laurent(&self, d: &Monomial) -> LaurentPolynomial {
        assert_eq!(d.nvars(), self.nvars, "divisor in a different ring");
        LaurentPolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| LaurentTerm {
                    coeff: t.coeff.clone(),
                    exponents: t
                        .mono
                        .exponents()
                        .iter()
                        .zip(d.exponents())
                        .map(|(&e, &s)| e as i128 - s as i128)
                        .collect(),
                })
                .collect(),
        }
    }

    /// Image under `x0 -> 1`, `x_j -> t^(m_j)` for `j < level`, keeping
    /// `x_level`. The result is in the two variables `(t, x_level)`.
    pub fn substitute_parametric(
        &self,
        curve: &CurveSpec,
        level: usize,
    ) -> Result<SparsePolynomial, PolyError> {
        assert_eq!(self.nvars, curve.nvars(), "polynomial/curve size mismatch");
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let e = t.mono.exponents();
            if let Some(var) = (level + 1..e.len()).find(|&j| e[j] > 0) {
                return Err(PolyError::UnexpectedVariable { var, up_to: level });
            }
            let mut t_power: u64 = 0;
            for (j, &ej) in e.iter().enumerate().take(level).skip(1) {
                t_power = ej
                    .checked_mul(curve.m(j))
                    .and_then(|p| t_power.checked_add(p))
                    .ok_or(PolyError::ExponentOverflow)?;
            }
            let x_power = e.get(level).copied().unwrap_or(0);
            out.push(Term::new(
                t.coeff.clone(),
                Monomial::new(vec![t_power, x_power]),
            ));
        }
        Ok(Self::from_terms(2, out))
    }

    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.iter().map(|t| &t.coeff).sum()
    }

    /// Terms grouped by [`BiDegree`].
    pub fn graded_pieces(&self, curve: &CurveSpec) -> BTreeMap<BiDegree, SparsePolynomial> {
        let mut groups: BTreeMap<BiDegree, Vec<Term>> = BTreeMap::new();
        for t in &self.terms {
            groups
                .entry(bi_degree(&t.mono, curve))
                .or_default()
                .push(t.clone());
        }
        groups
            .into_iter()
            .map(|(d, ts)| (d, Self::from_terms(self.nvars, ts)))
            .collect()
    }

    pub fn is_graded_homogeneous(&self, curve: &CurveSpec) -> bool {
        self.graded_pieces(curve).len() <= 1
    }

    /// Exact value at an integer point.
    pub fn eval_integer(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars, "point has wrong length");
        let mut cache: BTreeMap<(usize, u64), BigInt> = BTreeMap::new();
        let mut total = BigInt::zero();
        for t in &self.terms {
            let mut value = t.coeff.clone();
            for (j, &e) in t.mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache
                    .entry((j, e))
                    .or_insert_with(|| num_traits::pow(point[j].clone(), e as usize));
                value *= &*p;
            }
            total += value;
        }
        total
    }

    /// Value at a point of `F_p^(n+1)`.
    pub fn eval_mod(&self, field: &PrimeField, point: &[u64]) -> u64 {
        ModPolynomial::new(self, *field).eval(point)
    }

    /// Replaces coefficient of term `index` (for mutation testing).
    pub fn with_term_replaced(&self, index: usize, term: Term) -> Self {
        let mut terms = self.terms.clone();
        terms[index] = term;
        Self::from_terms(self.nvars, terms)
    }

    pub fn max_abs_coefficient(&self) -> BigInt {
        self.terms
            .iter()
            .map(|t| t.coeff.abs())
            .max()
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentTerm {
    pub coeff: BigInt,
    pub exponents: Vec<i128>,
}

impl LaurentTerm {
    pub fn is_monomial(&self) -> bool {
        self.exponents.iter().all(|&e| e >= 0)
    }

    pub fn min_exponent(&self) -> i128 {
        self.exponents.iter().copied().min().unwrap_or(0)
    }
}

impl fmt::Display for LaurentTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        for (j, e) in self.exponents.iter().enumerate() {
            if *e != 0 {
                write!(f, "*x{j}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Result of dividing by a monomial with negative exponents allowed. Terms
/// keep the order of the dividend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPolynomial {
    nvars: usize,
    terms: Vec<LaurentTerm>,
}

impl LaurentPolynomial {
    pub fn terms(&self) -> &[LaurentTerm] {
        &self.terms
    }

    pub fn negative_terms(&self) -> Vec<&LaurentTerm> {
        self.terms.iter().filter(|t| !t.is_monomial()).collect()
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(LaurentTerm::is_monomial)
    }

    /// Values of the `var` exponent at terms that are not monomials.
    pub fn negative_indices_by(&self, var: usize) -> Vec<i128> {
        let mut out: Vec<i128> = self
            .negative_terms()
            .iter()
            .map(|t| t.exponents[var])
            .collect();
        out.sort_unstable();
        out
    }

    pub fn into_polynomial(self) -> Option<SparsePolynomial> {
        if !self.is_polynomial() {
            return None;
        }
        let nvars = self.nvars;
        Some(SparsePolynomial::from_terms(
            nvars,
            self.terms.into_iter().map(|t| {
                Term::new(
                    t.coeff,
                    Monomial::new(t.exponents.into_iter().map(|e| e as u64).collect()),
                )
            }),
        ))
    }
}
