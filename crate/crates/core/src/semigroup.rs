//! Curve validation and the integer decompositions behind the construction.
//!
//! For a recursive extension `C(m1,...,mn)` and a level `3 <= i <= n`, the
//! exponent `mi` admits a *positive* form `mi = c*m(i-1) + b*m2 + a*m1` with
//! `a, b < m(i-1)` and a *signed* form `mi = gamma*m(i-1) - beta*m2 - alpha*m1`
//! with `alpha, beta < m(i-1)`. Both forms are linked by a fixed conversion
//! table (see [`to_signed`] and [`to_positive`]). At level 3 the `m2` slot is
//! the same generator as `m(i-1)`, so `b = beta = 0` there.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use thiserror::Error;

use crate::equations;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("empty exponent list")]
    Empty,
    #[error("a curve needs at least two exponents, got {count}")]
    TooFewExponents { count: usize },
    #[error("exponents must be positive")]
    NonPositive,
    #[error("exponents are not strictly increasing at position {position}")]
    NotIncreasing { position: usize },
    #[error("gcd is not 1 (gcd = {gcd})")]
    GcdNotOne { gcd: u64 },
    #[error("not a recursive extension: m{level} = {exponent} is not in the semigroup generated by the smaller exponents")]
    NotRecursiveExtension { level: usize, exponent: u64 },
    #[error("level {level} is outside 3..={n}")]
    LevelOutOfRange { level: usize, n: usize },
    #[error("({a}, {b}, {c}) does not represent m{level} as c*m(i-1) + b*m2 + a*m1")]
    InputNotARepresentation {
        level: usize,
        a: u64,
        b: u64,
        c: u64,
    },
    #[error("invalid decomposition at level {level}: {reason}")]
    InvalidDecomposition { level: usize, reason: String },
    #[error("no admissible decomposition at level {level}")]
    NoAdmissibleDecomposition { level: usize },
    #[error("hypotheses not met at level {level}: {reason}")]
    HypothesesNotMet { level: usize, reason: String },
}

/// Exponent sequence `m1 < ... < mn` of a monomial curve in `P^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveSpec {
    exponents: Vec<u64>,
}

impl CurveSpec {
    /// Validates `exponents` as a recursive extension.
    pub fn new(exponents: &[u64]) -> Result<Self, SemigroupError> {
        validate_curve(exponents)
    }

    /// Wraps `exponents` without any semigroup or gcd checks.
    ///
    /// Useful for diagnostics on curves that are *not* recursive extensions.
    /// Operations on such a curve may return meaningless results.
    pub fn from_raw(exponents: Vec<u64>) -> Self {
        Self { exponents }
    }

    /// `n`, the dimension of the ambient projective space.
    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    /// Number of homogeneous coordinates `x0..xn`.
    pub fn nvars(&self) -> usize {
        self.exponents.len() + 1
    }

    /// `m_j` with the convention `m_0 = 0`.
    pub fn m(&self, j: usize) -> u64 {
        if j == 0 {
            0
        } else {
            self.exponents[j - 1]
        }
    }

    /// Largest exponent `m_n`.
    pub fn top(&self) -> u64 {
        *self.exponents.last().expect("curve has exponents")
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// Levels `3..=n` that carry a decomposition.
    pub fn levels(&self) -> std::ops::RangeInclusive<usize> {
        3..=self.n()
    }

    pub fn check_level(&self, level: usize) -> Result<(), SemigroupError> {
        if level < 3 || level > self.n() {
            return Err(SemigroupError::LevelOutOfRange { level, n: self.n() });
        }
        Ok(())
    }

    /// Comma separated exponents, the CLI input syntax.
    pub fn to_csv(&self) -> String {
        self.exponents
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C({})", self.to_csv())
    }
}

/// Nonnegative coefficients of `target` over `generators`, if any exist.
///
/// Reachability table over `0..=target`; each entry remembers the generator
/// that reached it so a witness can be read back.
pub fn semigroup_witness(target: u64, generators: &[u64]) -> Option<Vec<u64>> {
    let size = usize::try_from(target).ok()?.checked_add(1)?;
    let mut via: Vec<Option<usize>> = vec![None; size];
    let mut reached = vec![false; size];
    reached[0] = true;
    for v in 1..size {
        for (idx, &g) in generators.iter().enumerate() {
            let g = g as usize;
            if g != 0 && g <= v && reached[v - g] {
                reached[v] = true;
                via[v] = Some(idx);
                break;
            }
        }
    }
    if !reached[size - 1] {
        return None;
    }
    let mut coeffs = vec![0u64; generators.len()];
    let mut v = size - 1;
    while v > 0 {
        let idx = via[v].expect("reachable value has a predecessor");
        coeffs[idx] += 1;
        v -= generators[idx] as usize;
    }
    Some(coeffs)
}

pub fn validate_curve(exponents: &[u64]) -> Result<CurveSpec, SemigroupError> {
    if exponents.is_empty() {
        return Err(SemigroupError::Empty);
    }
    if exponents.contains(&0) {
        return Err(SemigroupError::NonPositive);
    }
    if let Some(pos) = exponents.windows(2).position(|w| w[0] >= w[1]) {
        return Err(SemigroupError::NotIncreasing { position: pos + 2 });
    }
    let gcd = exponents.iter().fold(0u64, |g, &m| g.gcd(&m));
    if gcd != 1 {
        return Err(SemigroupError::GcdNotOne { gcd });
    }
    if exponents.len() < 2 {
        return Err(SemigroupError::TooFewExponents {
            count: exponents.len(),
        });
    }
    for level in 3..=exponents.len() {
        let target = exponents[level - 1];
        if semigroup_witness(target, &exponents[..level - 1]).is_none() {
            return Err(SemigroupError::NotRecursiveExtension {
                level,
                exponent: target,
            });
        }
    }
    Ok(CurveSpec {
        exponents: exponents.to_vec(),
    })
}

/// `mi = c*m(i-1) + b*m2 + a*m1` with `a, b < m(i-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PositiveDecomposition {
    pub level: usize,
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

/// `mi = gamma*m(i-1) - beta*m2 - alpha*m1` with `alpha, beta < m(i-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedDecomposition {
    pub level: usize,
    pub alpha: u64,
    pub beta: u64,
    pub gamma: u64,
}

impl PositiveDecomposition {
    pub fn new(level: usize, a: u64, b: u64, c: u64) -> Self {
        Self { level, a, b, c }
    }

    pub fn value(&self, curve: &CurveSpec) -> BigInt {
        let i = self.level;
        BigInt::from(self.c) * curve.m(i - 1)
            + BigInt::from(self.b) * curve.m(2)
            + BigInt::from(self.a) * curve.m(1)
    }

    pub fn check(&self, curve: &CurveSpec) -> Result<(), SemigroupError> {
        curve.check_level(self.level)?;
        let i = self.level;
        let prev = curve.m(i - 1);
        let reason = if self.value(curve) != BigInt::from(curve.m(i)) {
            "c*m(i-1) + b*m2 + a*m1 != mi"
        } else if self.a >= prev || self.b >= prev {
            "a and b must be below m(i-1)"
        } else if i == 3 && self.b != 0 {
            "b must vanish at level 3"
        } else {
            return Ok(());
        };
        Err(SemigroupError::InvalidDecomposition {
            level: i,
            reason: reason.to_string(),
        })
    }
}

impl SignedDecomposition {
    pub fn new(level: usize, alpha: u64, beta: u64, gamma: u64) -> Self {
        Self {
            level,
            alpha,
            beta,
            gamma,
        }
    }

    pub fn value(&self, curve: &CurveSpec) -> BigInt {
        let i = self.level;
        BigInt::from(self.gamma) * curve.m(i - 1)
            - BigInt::from(self.beta) * curve.m(2)
            - BigInt::from(self.alpha) * curve.m(1)
    }

    /// `gamma - beta - alpha - 1`, the homogenizing `x0` exponent per step.
    pub fn slack(&self) -> i128 {
        self.gamma as i128 - self.beta as i128 - self.alpha as i128 - 1
    }

    pub fn check(&self, curve: &CurveSpec) -> Result<(), SemigroupError> {
        curve.check_level(self.level)?;
        let i = self.level;
        let prev = curve.m(i - 1);
        let reason = if self.value(curve) != BigInt::from(curve.m(i)) {
            "gamma*m(i-1) - beta*m2 - alpha*m1 != mi"
        } else if self.alpha >= prev || self.beta >= prev {
            "alpha and beta must be below m(i-1)"
        } else if i == 3 && self.beta != 0 {
            "beta must vanish at level 3"
        } else {
            return Ok(());
        };
        Err(SemigroupError::InvalidDecomposition {
            level: i,
            reason: reason.to_string(),
        })
    }
}

impl fmt::Display for PositiveDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a,b,c)=({},{},{})", self.a, self.b, self.c)
    }
}

impl fmt::Display for SignedDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(alpha,beta,gamma)=({},{},{})",
            self.alpha, self.beta, self.gamma
        )
    }
}

/// Reduces an arbitrary representation `mi = C*m(i-1) + B*m2 + A*m1` so that
/// `a, b < m(i-1)`.
///
/// At level 3 the `m2` generator coincides with `m(i-1)` and any `B` is folded
/// into `c`, which keeps `b = 0`.
pub fn normalize_decomposition(
    big_a: u64,
    big_b: u64,
    big_c: u64,
    curve: &CurveSpec,
    level: usize,
) -> Result<PositiveDecomposition, SemigroupError> {
    curve.check_level(level)?;
    let raw = PositiveDecomposition::new(level, big_a, big_b, big_c);
    if raw.value(curve) != BigInt::from(curve.m(level)) {
        return Err(SemigroupError::InputNotARepresentation {
            level,
            a: big_a,
            b: big_b,
            c: big_c,
        });
    }
    let prev = curve.m(level - 1);
    let (big_b, big_c) = if level == 3 {
        (0, big_c + big_b)
    } else {
        (big_b, big_c)
    };
    let normalized = PositiveDecomposition::new(
        level,
        big_a % prev,
        big_b % prev,
        big_c + (big_b / prev) * curve.m(2) + (big_a / prev) * curve.m(1),
    );
    debug_assert!(normalized.check(curve).is_ok());
    Ok(normalized)
}

pub fn to_signed(p: &PositiveDecomposition, curve: &CurveSpec) -> SignedDecomposition {
    let prev = curve.m(p.level - 1);
    let alpha = if p.a == 0 { 0 } else { prev - p.a };
    let beta = if p.b == 0 { 0 } else { prev - p.b };
    let mut gamma = p.c;
    if p.b > 0 {
        gamma += curve.m(2);
    }
    if p.a > 0 {
        gamma += curve.m(1);
    }
    SignedDecomposition::new(p.level, alpha, beta, gamma)
}

/// Inverse of [`to_signed`].
pub fn to_positive(
    s: &SignedDecomposition,
    curve: &CurveSpec,
) -> Result<PositiveDecomposition, SemigroupError> {
    s.check(curve)?;
    let prev = curve.m(s.level - 1);
    let a = if s.alpha == 0 { 0 } else { prev - s.alpha };
    let b = if s.beta == 0 { 0 } else { prev - s.beta };
    let mut shift = 0;
    if b > 0 {
        shift += curve.m(2);
    }
    if a > 0 {
        shift += curve.m(1);
    }
    let c = s
        .gamma
        .checked_sub(shift)
        .ok_or_else(|| SemigroupError::InvalidDecomposition {
            level: s.level,
            reason: "signed form has no positive counterpart (c < 0)".to_string(),
        })?;
    let p = PositiveDecomposition::new(s.level, a, b, c);
    p.check(curve)?;
    Ok(p)
}

/// Linked positive and signed forms of `mi` at one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DecompositionPair {
    pub positive: PositiveDecomposition,
    pub signed: SignedDecomposition,
    /// `gamma - beta - alpha - 1 >= 0` and `m1 >= beta*(m2 - m1)`.
    pub sufficient_conditions_met: bool,
    /// `gamma - beta - alpha - 1 >= 0`.
    pub gamma_condition: bool,
}

impl DecompositionPair {
    pub fn from_positive(
        positive: PositiveDecomposition,
        curve: &CurveSpec,
    ) -> Result<Self, SemigroupError> {
        positive.check(curve)?;
        let signed = to_signed(&positive, curve);
        Ok(Self::assemble(positive, signed, curve))
    }

    pub fn from_signed(
        signed: SignedDecomposition,
        curve: &CurveSpec,
    ) -> Result<Self, SemigroupError> {
        let positive = to_positive(&signed, curve)?;
        Ok(Self::assemble(positive, signed, curve))
    }

    fn assemble(
        positive: PositiveDecomposition,
        signed: SignedDecomposition,
        curve: &CurveSpec,
    ) -> Self {
        let gamma_condition = signed.slack() >= 0;
        let m1 = curve.m(1) as u128;
        let m2 = curve.m(2) as u128;
        let beta_ok = m1 >= signed.beta as u128 * (m2 - m1);
        Self {
            positive,
            signed,
            sufficient_conditions_met: gamma_condition && beta_ok,
            gamma_condition,
        }
    }

    pub fn level(&self) -> usize {
        self.positive.level
    }

    fn order_key(&self) -> (u64, u64, u64) {
        (self.signed.beta, self.signed.alpha, self.signed.gamma)
    }
}

/// Every decomposition of `m_level`, ordered by `(beta, alpha, gamma)`.
pub fn enumerate_decompositions(
    curve: &CurveSpec,
    level: usize,
) -> Result<Vec<DecompositionPair>, SemigroupError> {
    curve.check_level(level)?;
    let target = curve.m(level);
    let prev = curve.m(level - 1);
    let m1 = curve.m(1);
    let m2 = curve.m(2);
    let b_bound = if level == 3 { 1 } else { prev };
    let mut pairs = Vec::new();
    for c in 0..=target / prev {
        let after_c = target - c * prev;
        for b in 0..b_bound {
            let Some(rest) = b.checked_mul(m2).and_then(|bm| after_c.checked_sub(bm)) else {
                break;
            };
            if rest % m1 != 0 {
                continue;
            }
            let a = rest / m1;
            if a >= prev {
                continue;
            }
            let positive = PositiveDecomposition::new(level, a, b, c);
            pairs.push(DecompositionPair::assemble(
                positive,
                to_signed(&positive, curve),
                curve,
            ));
        }
    }
    pairs.sort_by_key(|x| x.order_key());
    Ok(pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SelectionPolicy {
    /// Only decompositions meeting both sufficient conditions.
    #[default]
    Strict,
    /// Also admit decompositions with `gamma - beta - alpha - 1 >= 0` whose
    /// polynomial turns out to have nonnegative exponents.
    AllowDirectPolynomiality,
}

/// Which criterion admitted a selected decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Admission {
    SufficientConditions,
    DirectPolynomiality,
    /// Supplied explicitly by the caller.
    Pinned,
}

impl Admission {
    /// True when the set-theoretic result is backed by the sufficient
    /// conditions rather than only checked empirically.
    pub fn theorem_backed(self) -> bool {
        matches!(self, Admission::SufficientConditions)
    }
}

impl fmt::Display for Admission {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Admission::SufficientConditions => "sufficient-conditions",
            Admission::DirectPolynomiality => "direct-polynomiality",
            Admission::Pinned => "pinned",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selection {
    pub pair: DecompositionPair,
    pub admitted_by: Admission,
}

pub fn select_decomposition(
    curve: &CurveSpec,
    level: usize,
    policy: SelectionPolicy,
) -> Result<Selection, SemigroupError> {
    let pairs = enumerate_decompositions(curve, level)?;
    if let Some(pair) = pairs.iter().find(|p| p.sufficient_conditions_met) {
        return Ok(Selection {
            pair: *pair,
            admitted_by: Admission::SufficientConditions,
        });
    }
    if policy == SelectionPolicy::AllowDirectPolynomiality {
        if let Some(pair) = pairs
            .iter()
            .find(|p| p.gamma_condition && equations::lemma_exponents_nonnegative(curve, p))
        {
            return Ok(Selection {
                pair: *pair,
                admitted_by: Admission::DirectPolynomiality,
            });
        }
    }
    Err(SemigroupError::NoAdmissibleDecomposition { level })
}

/// `(alpha, gamma)` from one solution `mi = A*m(i-1) - B*m1`, shifting by
/// `theta = ceil(-B / m(i-1))`.
pub fn theta_shift(m_prev: u64, m1: u64, big_a: i128, big_b: i128) -> (i128, i128, i128) {
    let prev = m_prev as i128;
    let theta = -Integer::div_floor(&big_b, &prev);
    (big_b + prev * theta, big_a + m1 as i128 * theta, theta)
}

/// Signed decomposition with `beta = 0` for curves with
/// `gcd(m(i-1), m1) = 1` and `mi >= max{m(i-1)*m1, m(i-1)*(m(i-1) - m1)}`.
pub fn proposition_theta(
    curve: &CurveSpec,
    level: usize,
) -> Result<SignedDecomposition, SemigroupError> {
    curve.check_level(level)?;
    let prev = curve.m(level - 1);
    let m1 = curve.m(1);
    let target = curve.m(level);
    let not_met = |reason: String| SemigroupError::HypothesesNotMet { level, reason };
    let g = prev.gcd(&m1);
    if g != 1 {
        return Err(not_met(format!("gcd(m{}, m1) = {g}", level - 1)));
    }
    let lower_1 = prev as u128 * m1 as u128;
    let lower_2 = prev as u128 * (prev - m1) as u128;
    if (target as u128) < lower_1.max(lower_2) {
        return Err(not_met(format!(
            "m{level} = {target} < max{{{lower_1}, {lower_2}}}"
        )));
    }
    // B*m1 = A*m(i-1) - mi, so B is -mi/m1 modulo m(i-1); take the
    // representative in 1..=m(i-1).
    let prev_i = prev as i128;
    let inv_m1 = (m1 as i128).extended_gcd(&prev_i).x.mod_floor(&prev_i);
    let residue = ((target as i128).mod_floor(&prev_i) * inv_m1).mod_floor(&prev_i);
    let mut big_b = (-residue).mod_floor(&prev_i);
    if big_b == 0 {
        big_b = prev_i;
    }
    let big_a = (target as i128 + big_b * m1 as i128) / prev_i;
    let (alpha, gamma, _) = theta_shift(prev, m1, big_a, big_b);
    let signed = SignedDecomposition::new(level, alpha as u64, 0, gamma as u64);
    debug_assert!(signed.check(curve).is_ok());
    Ok(signed)
}

impl PartialOrd for DecompositionPair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DecompositionPair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}
