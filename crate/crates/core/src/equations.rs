//! Construction of the equations `F1,...,F(n-1)`.
//!
//! `F1 = x1^m2 - x2^m1 * x0^(m2-m1)` is the plane-curve binomial. For each
//! level `3 <= i <= n` a decomposition pair of `mi` yields
//!
//! ```text
//! F(i-1) = sum_{k=0}^{m(i-1)} (-1)^k C(m(i-1), k) * M_k
//! ```
//!
//! where `M_k` comes from the signed form for `k <= N_i = m(i-1) - m1` and from
//! the positive form for larger `k`. Substituting `x0 = 1`, `x_j = t^(m_j)` for
//! `j < i` collapses `F(i-1)` to `(t^mi - x_i)^m(i-1)`.
//!
//! [`build_general_splice`] is the same idea for arbitrary signed and positive
//! representations over all smaller generators, with a free split index.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::polyring::{binomial, Monomial, SparsePolynomial, Term};
use crate::semigroup::{
    select_decomposition, Admission, CurveSpec, DecompositionPair, Selection, SelectionPolicy,
    SemigroupError, SignedDecomposition,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquationError {
    #[error("level {level}: {source}")]
    Selection {
        level: usize,
        #[source]
        source: SemigroupError,
    },
    #[error("level {level}: F{} is not a polynomial (smallest exponent {})", level - 1, diagnostics.min_exponent_seen)]
    NotPolynomial {
        level: usize,
        diagnostics: Box<BuildDiagnostics>,
    },
    #[error("invalid splice data: {0}")]
    InvalidSplice(String),
    #[error("splice with N = {split} is not a polynomial: {reason}")]
    SpliceNotPolynomial { split: u64, reason: String },
}

/// Exponent bookkeeping for one `F(i-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildDiagnostics {
    pub level: usize,
    /// `N_i = m(i-1) - m1`.
    pub split: u64,
    pub sufficient_conditions_met: bool,
    pub direct_polynomiality: bool,
    pub min_exponent_seen: i128,
    /// `(k, exponent of x(i-1))` for the signed block `1 <= k <= N_i`.
    pub pivot_exponents: Vec<(u64, i128)>,
    /// `(k, h0)` for the positive block `N_i < k <= m(i-1)`.
    pub h0_values: Vec<(u64, i128)>,
}

struct RawTerm {
    coeff: BigInt,
    exponents: Vec<i128>,
}

fn sign(k: u64) -> i32 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Terms of `F(i-1)` with possibly negative exponents, `k = 0..=m(i-1)`.
fn lemma_terms(curve: &CurveSpec, pair: &DecompositionPair) -> (Vec<RawTerm>, BuildDiagnostics) {
    let level = pair.level();
    let nvars = curve.nvars();
    let m1 = curve.m(1) as i128;
    let m2 = curve.m(2) as i128;
    let prev = curve.m(level - 1);
    let prev_i = prev as i128;
    let target = curve.m(level) as i128;
    let split = prev - curve.m(1);
    let (alpha, beta, gamma) = (
        pair.signed.alpha as i128,
        pair.signed.beta as i128,
        pair.signed.gamma as i128,
    );
    let (a, b, c) = (
        pair.positive.a as i128,
        pair.positive.b as i128,
        pair.positive.c as i128,
    );
    let slack = gamma - beta - alpha - 1;

    let mut diag = BuildDiagnostics {
        level,
        split,
        sufficient_conditions_met: pair.sufficient_conditions_met,
        direct_polynomiality: true,
        min_exponent_seen: i128::MAX,
        pivot_exponents: Vec::new(),
        h0_values: Vec::new(),
    };
    let mut terms = Vec::with_capacity(prev as usize + 1);
    for k in 0..=prev {
        let ki = k as i128;
        let mut e = vec![0i128; nvars];
        if k <= split {
            e[1] += ki * alpha;
            e[2] += ki * beta;
            let pivot = target - ki * gamma;
            e[level - 1] += pivot;
            e[0] += ki * slack;
            if k > 0 {
                diag.pivot_exponents.push((k, pivot));
            }
        } else {
            let rest = prev_i - ki;
            e[1] += a * rest;
            e[2] += b * rest;
            e[level - 1] += c * rest;
            let h0 = ki * (a + b + c - 1) - b * (prev_i - m2) - a * (prev_i - m1);
            e[0] += h0;
            diag.h0_values.push((k, h0));
        }
        e[level] += ki;
        let low = *e.iter().min().expect("nonempty");
        diag.min_exponent_seen = diag.min_exponent_seen.min(low);
        terms.push(RawTerm {
            coeff: binomial(prev, k) * sign(k),
            exponents: e,
        });
    }
    diag.direct_polynomiality = diag.min_exponent_seen >= 0;
    (terms, diag)
}

/// True when every exponent of `F(i-1)` built from `pair` is nonnegative.
pub fn lemma_exponents_nonnegative(curve: &CurveSpec, pair: &DecompositionPair) -> bool {
    lemma_terms(curve, pair).1.direct_polynomiality
}

pub fn build_f1(curve: &CurveSpec) -> SparsePolynomial {
    let nvars = curve.nvars();
    let (m1, m2) = (curve.m(1), curve.m(2));
    let lead = Monomial::var_power(nvars, 1, m2);
    let mut tail = vec![0; nvars];
    tail[2] = m1;
    tail[0] = m2 - m1;
    SparsePolynomial::from_terms(
        nvars,
        [Term::new(1, lead), Term::new(-1, Monomial::new(tail))],
    )
}

pub fn build_fi(
    curve: &CurveSpec,
    level: usize,
    pair: &DecompositionPair,
) -> Result<(SparsePolynomial, BuildDiagnostics), EquationError> {
    curve
        .check_level(level)
        .and_then(|_| pair.positive.check(curve))
        .and_then(|_| pair.signed.check(curve))
        .map_err(|source| EquationError::Selection { level, source })?;
    if pair.level() != level {
        return Err(EquationError::Selection {
            level,
            source: SemigroupError::InvalidDecomposition {
                level,
                reason: format!("pair belongs to level {}", pair.level()),
            },
        });
    }
    let (raw, diag) = lemma_terms(curve, pair);
    if !diag.direct_polynomiality {
        return Err(EquationError::NotPolynomial {
            level,
            diagnostics: Box::new(diag),
        });
    }
    let count = raw.len();
    let poly = SparsePolynomial::from_terms(
        curve.nvars(),
        raw.into_iter().map(|t| {
            Term::new(
                t.coeff,
                Monomial::new(t.exponents.into_iter().map(|e| e as u64).collect()),
            )
        }),
    );
    // distinct powers of x_i, so nothing merges
    assert_eq!(poly.len(), count, "blocks of F{} collided", level - 1);
    Ok((poly, diag))
}

/// One named inequality from the polynomiality argument, evaluated on a
/// concrete instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityCheck {
    pub name: &'static str,
    pub holds: bool,
}

/// Evaluates the exponent lower bounds used to show `F(i-1)` is a polynomial.
/// Bounds that only apply under `gamma - beta - alpha - 1 >= 0` or in the
/// `c = 0` cases are reported only when their hypotheses hold.
#[allow(clippy::int_plus_one)] // mirrors the stated inequalities
pub fn inequality_chain(curve: &CurveSpec, pair: &DecompositionPair) -> Vec<InequalityCheck> {
    let (_, diag) = lemma_terms(curve, pair);
    let m1 = curve.m(1) as i128;
    let m2 = curve.m(2) as i128;
    let prev = curve.m(pair.level() - 1) as i128;
    let (alpha, beta, gamma) = (
        pair.signed.alpha as i128,
        pair.signed.beta as i128,
        pair.signed.gamma as i128,
    );
    let (a, b, c) = (
        pair.positive.a as i128,
        pair.positive.b as i128,
        pair.positive.c as i128,
    );
    let min_pivot = diag.pivot_exponents.iter().map(|p| p.1).min();
    let min_h0 = diag.h0_values.iter().map(|p| p.1).min();
    let mut checks = Vec::new();
    let mut push = |name, holds| checks.push(InequalityCheck { name, holds });

    let pivot_floor = (gamma - alpha) * m1 - beta * m2;
    let beta_floor = m1 - beta * (m2 - m1);
    if let Some(min_pivot) = min_pivot {
        push(
            "pivot >= (gamma-alpha)m1 - beta*m2",
            min_pivot >= pivot_floor,
        );
        if pair.gamma_condition {
            push(
                "(gamma-alpha)m1 - beta*m2 >= m1 - beta(m2-m1)",
                pivot_floor >= beta_floor,
            );
        }
        if pair.sufficient_conditions_met {
            push("pivot >= 0", min_pivot >= 0);
        }
    }
    if let Some(min_h0) = min_h0 {
        let floor = (prev - m1 + 1) * (c - 1) + b * (m2 - m1 + 1) + a;
        push("h0 >= (m(i-1)-m1+1)(c-1) + b(m2-m1+1) + a", min_h0 >= floor);
        if pair.gamma_condition && c == 0 {
            if a == 0 && b > 0 {
                push("b - 1 >= m(i-1) - m2", b - 1 >= prev - m2);
                push(
                    "h0 >= (m2-m1)(m(i-1)-m2)",
                    min_h0 >= (m2 - m1) * (prev - m2),
                );
            }
            if a > 0 && b == 0 {
                push("a - 1 >= m(i-1) - m1", a - 1 >= prev - m1);
            }
            if a > 0 && b > 0 {
                push(
                    "a + b - 1 >= (m(i-1)-m2) + (m(i-1)-m1)",
                    a + b - 1 >= (prev - m2) + (prev - m1),
                );
            }
        }
        if pair.sufficient_conditions_met {
            push("h0 >= 0", min_h0 >= 0);
        }
    }
    checks
}

/// One level of a built system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelBuild {
    pub level: usize,
    pub selection: Selection,
    pub diagnostics: BuildDiagnostics,
}

/// `F1,...,F(n-1)` for a curve together with the per-level choices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem {
    curve: CurveSpec,
    polys: Vec<SparsePolynomial>,
    levels: Vec<LevelBuild>,
}

impl EquationSystem {
    /// Assembles a system from parts without rebuilding anything. Used to
    /// feed altered systems to the verifiers.
    pub fn from_parts(
        curve: CurveSpec,
        polys: Vec<SparsePolynomial>,
        levels: Vec<LevelBuild>,
    ) -> Self {
        EquationSystem {
            curve,
            polys,
            levels,
        }
    }

    pub fn curve(&self) -> &CurveSpec {
        &self.curve
    }

    /// `F1,...,F(n-1)`; index `j` holds `F(j+1)`.
    pub fn polys(&self) -> &[SparsePolynomial] {
        &self.polys
    }

    /// `F_j`, 1-based.
    pub fn poly(&self, j: usize) -> &SparsePolynomial {
        &self.polys[j - 1]
    }

    pub fn levels(&self) -> &[LevelBuild] {
        &self.levels
    }

    pub fn level(&self, level: usize) -> Option<&LevelBuild> {
        self.levels.iter().find(|l| l.level == level)
    }

    pub fn with_poly_replaced(&self, j: usize, poly: SparsePolynomial) -> Self {
        let mut out = self.clone();
        out.polys[j - 1] = poly;
        out
    }

    /// Levels whose decomposition was not admitted by the sufficient
    /// conditions; their correctness rests on the oracles alone.
    pub fn empirical_levels(&self) -> Vec<usize> {
        self.levels
            .iter()
            .filter(|l| !l.selection.admitted_by.theorem_backed())
            .map(|l| l.level)
            .collect()
    }
}

pub fn build_system(
    curve: &CurveSpec,
    policy: SelectionPolicy,
) -> Result<EquationSystem, EquationError> {
    build_system_with_pins(curve, policy, &BTreeMap::new())
}

/// Like [`build_system`], but levels present in `pins` use the given signed
/// decomposition instead of the automatic choice.
pub fn build_system_with_pins(
    curve: &CurveSpec,
    policy: SelectionPolicy,
    pins: &BTreeMap<usize, SignedDecomposition>,
) -> Result<EquationSystem, EquationError> {
    let mut polys = vec![build_f1(curve)];
    let mut levels = Vec::new();
    for level in curve.levels() {
        let selection = match pins.get(&level) {
            Some(signed) => {
                let pair = DecompositionPair::from_signed(*signed, curve)
                    .map_err(|source| EquationError::Selection { level, source })?;
                Selection {
                    pair,
                    admitted_by: Admission::Pinned,
                }
            }
            None => select_decomposition(curve, level, policy)
                .map_err(|source| EquationError::Selection { level, source })?,
        };
        let (poly, diagnostics) = build_fi(curve, level, &selection.pair)?;
        polys.push(poly);
        levels.push(LevelBuild {
            level,
            selection,
            diagnostics,
        });
    }
    for &level in pins.keys() {
        curve
            .check_level(level)
            .map_err(|source| EquationError::Selection { level, source })?;
    }
    Ok(EquationSystem {
        curve: curve.clone(),
        polys,
        levels,
    })
}

/// Data for the two-binomial splice producing the equation of level `L`:
/// `mL = beta*m(L-1) - sum alpha_j m_j = sum a_j m_j` over `j < L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpliceSpec {
    pub level: usize,
    pub beta: u64,
    /// `alpha_1..alpha_(L-2)`.
    pub alphas: Vec<u64>,
    /// `a_1..a_(L-1)`.
    pub positive: Vec<u64>,
    /// Terms `k <= split` come from the signed binomial.
    pub split: u64,
}

impl SpliceSpec {
    pub fn new(
        curve: &CurveSpec,
        level: usize,
        beta: u64,
        alphas: Vec<u64>,
        positive: Vec<u64>,
        split: u64,
    ) -> Result<Self, EquationError> {
        let spec = SpliceSpec {
            level,
            beta,
            alphas,
            positive,
            split,
        };
        spec.validate(curve)?;
        Ok(spec)
    }

    /// The splice that reproduces [`build_fi`] for `pair`.
    pub fn from_pair(curve: &CurveSpec, pair: &DecompositionPair) -> Result<Self, EquationError> {
        let level = pair.level();
        let mut alphas = vec![0; level - 2];
        alphas[0] += pair.signed.alpha;
        if level > 3 {
            alphas[1] += pair.signed.beta;
        }
        let mut positive = vec![0; level - 1];
        positive[0] += pair.positive.a;
        positive[1] += pair.positive.b;
        positive[level - 2] += pair.positive.c;
        Self::new(
            curve,
            level,
            pair.signed.gamma,
            alphas,
            positive,
            curve.m(level - 1) - curve.m(1),
        )
    }

    fn validate(&self, curve: &CurveSpec) -> Result<(), EquationError> {
        let bad = |s: String| Err(EquationError::InvalidSplice(s));
        let level = self.level;
        if level < 3 || level > curve.n() {
            return bad(format!("level {level} outside 3..={}", curve.n()));
        }
        if self.alphas.len() != level - 2 || self.positive.len() != level - 1 {
            return bad("expected L-2 alphas and L-1 positive coefficients".into());
        }
        let target = BigInt::from(curve.m(level));
        let signed = BigInt::from(self.beta) * curve.m(level - 1)
            - self
                .alphas
                .iter()
                .enumerate()
                .map(|(j, &a)| BigInt::from(a) * curve.m(j + 1))
                .sum::<BigInt>();
        let positive: BigInt = self
            .positive
            .iter()
            .enumerate()
            .map(|(j, &a)| BigInt::from(a) * curve.m(j + 1))
            .sum();
        if signed != target {
            return bad(format!("signed form gives {signed}, not m{level}"));
        }
        if positive != target {
            return bad(format!("positive form gives {positive}, not m{level}"));
        }
        if self.delta_signed() < 0 {
            return bad(format!(
                "negative signed homogenizer {}",
                self.delta_signed()
            ));
        }
        if self.delta_positive() < 0 {
            return bad("positive form is empty".into());
        }
        if self.split > curve.m(level - 1) {
            return bad(format!("split {} exceeds m{}", self.split, level - 1));
        }
        Ok(())
    }

    /// `beta - sum alpha - 1`, the `x0` power in the signed binomial.
    pub fn delta_signed(&self) -> i128 {
        self.beta as i128 - self.alphas.iter().map(|&a| a as i128).sum::<i128>() - 1
    }

    /// `sum a - 1`, the `x0` power in the positive binomial.
    pub fn delta_positive(&self) -> i128 {
        self.positive.iter().map(|&a| a as i128).sum::<i128>() - 1
    }

    pub fn sum_positive(&self) -> u64 {
        self.positive.iter().sum()
    }

    pub fn with_split(&self, split: u64) -> Self {
        SpliceSpec {
            split,
            ..self.clone()
        }
    }
}

/// Whether split `n` keeps both halves polynomial:
/// `m_new >= beta*k` for `1 <= k <= n` and
/// `m_new >= k + sum_a*(m_prev - k)` for `n < k <= m_prev`.
pub fn split_is_valid(m_new: u64, m_prev: u64, beta: u64, sum_a: u64, n: u64) -> bool {
    let m_new = m_new as u128;
    let first = (1..=n.min(m_prev)).all(|k| m_new >= beta as u128 * k as u128);
    let second =
        (n + 1..=m_prev).all(|k| m_new >= k as u128 + sum_a as u128 * (m_prev - k) as u128);
    first && second
}

/// Largest `N` with `1 < N < m_prev` passing [`split_is_valid`].
pub fn largest_valid_split(m_new: u64, m_prev: u64, beta: u64, sum_a: u64) -> Option<u64> {
    (2..m_prev)
        .rev()
        .find(|&n| split_is_valid(m_new, m_prev, beta, sum_a, n))
}

pub fn find_valid_split(spec: &SpliceSpec, curve: &CurveSpec) -> Option<u64> {
    largest_valid_split(
        curve.m(spec.level),
        curve.m(spec.level - 1),
        spec.beta,
        spec.sum_positive(),
    )
}

/// The two binomials of the splice after their monomial divisions.
pub fn splice_expansions(
    spec: &SpliceSpec,
    curve: &CurveSpec,
) -> (
    crate::polyring::LaurentPolynomial,
    crate::polyring::LaurentPolynomial,
) {
    let nvars = curve.nvars();
    let level = spec.level;
    let prev = curve.m(level - 1);

    let lead = Term::new(1, Monomial::var_power(nvars, level - 1, spec.beta));
    let mut tail = vec![0; nvars];
    tail[0] = spec.delta_signed() as u64;
    for (j, &a) in spec.alphas.iter().enumerate() {
        tail[j + 1] += a;
    }
    tail[level] = 1;
    let first = SparsePolynomial::binomial_power(&lead, &Term::new(1, Monomial::new(tail)), prev);
    let shift: u64 = spec
        .alphas
        .iter()
        .enumerate()
        .map(|(j, &a)| a * curve.m(j + 1))
        .sum();
    let first = first.div_monomial_laurent(&Monomial::var_power(nvars, level - 1, shift));

    let mut lead = vec![0; nvars];
    for (j, &a) in spec.positive.iter().enumerate() {
        lead[j + 1] = a;
    }
    let tail = {
        let mut e = vec![0; nvars];
        e[0] = spec.delta_positive() as u64;
        e[level] = 1;
        Monomial::new(e)
    };
    let second = SparsePolynomial::binomial_power(
        &Term::new(1, Monomial::new(lead)),
        &Term::new(1, tail),
        prev,
    );
    let shift: u64 = spec
        .positive
        .iter()
        .enumerate()
        .map(|(j, &a)| a * (prev - curve.m(j + 1)))
        .sum();
    let second = second.div_monomial_laurent(&Monomial::var_power(nvars, 0, shift));
    (first, second)
}

/// Terms `k = 0..=N` of the divided signed binomial followed by terms
/// `k = N+1..=m(L-1)` of the divided positive binomial.
pub fn build_general_splice(
    spec: &SpliceSpec,
    curve: &CurveSpec,
) -> Result<SparsePolynomial, EquationError> {
    spec.validate(curve)?;
    let level = spec.level;
    let (first, second) = splice_expansions(spec, curve);
    let pick = |poly: &crate::polyring::LaurentPolynomial, keep: &dyn Fn(u64) -> bool| {
        poly.terms()
            .iter()
            .filter(|t| keep(t.exponents[level] as u64))
            .cloned()
            .collect::<Vec<_>>()
    };
    let split = spec.split;
    let mut chosen = pick(&first, &|k| k <= split);
    chosen.extend(pick(&second, &|k| k > split));
    if let Some(bad) = chosen.iter().find(|t| !t.is_monomial()) {
        return Err(EquationError::SpliceNotPolynomial {
            split,
            reason: format!("term with k = {} is {bad}", bad.exponents[level]),
        });
    }
    Ok(SparsePolynomial::from_terms(
        curve.nvars(),
        chosen.into_iter().map(|t| {
            Term::new(
                t.coeff,
                Monomial::new(t.exponents.into_iter().map(|e| e as u64).collect()),
            )
        }),
    ))
}
