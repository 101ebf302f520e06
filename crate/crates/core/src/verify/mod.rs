//! Oracles for a built [`EquationSystem`].
//!
//! * graded membership: every graded piece has coefficient sum zero, checked
//!   again by exact evaluation at parametrized integer points;
//! * the substitution identity `F(i-1)(1, t^m1, ..., t^m(i-1), x_i) =
//!   (t^mi - x_i)^m(i-1)`;
//! * the zero locus at `x0 = 0` and the full zero locus over small prime
//!   fields, compared point by point with the curve.
//!
//! Prime-field enumeration is evidence only; it sees `F_p`-rational points
//! and nothing over extensions.

mod points;
mod report;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::equations::EquationSystem;
use crate::polyring::{
    binomial, BiDegree, ModPolynomial, Monomial, PrimeField, SparsePolynomial, Term,
};
use crate::semigroup::{Admission, CurveSpec};

pub use points::{
    parametrized_points, point_on_curve, projective_point_count, scan_points, BezoutWitness,
    Enumeration, MismatchKind, ProjectivePoint, ScanTally,
};
pub use report::ReportNode;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("level {level} is outside 3..={n}")]
    LevelOutOfRange { level: usize, n: usize },
    #[error("P^{n}(F_{p}) has {points} points, above the budget of {budget}")]
    BudgetExceeded {
        n: usize,
        p: u64,
        points: u64,
        budget: u64,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("trial count must be at least 1")]
    NoTrials,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    /// Failed only at a prime dividing some binomial coefficient of the
    /// construction.
    CharacteristicSuspect,
    Fail,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Worst of two verdicts.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (CharacteristicSuspect, _) | (_, CharacteristicSuspect) => CharacteristicSuspect,
            _ => Pass,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::CharacteristicSuspect => "CHARACTERISTIC-SUSPECT",
            Verdict::Fail => "FAIL",
        })
    }
}

/// Primes, evaluation trials and the point budget for [`full_verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFieldConfig {
    primes: Vec<PrimeField>,
    pub trials: usize,
    pub budget: u64,
}

impl FiniteFieldConfig {
    pub const DEFAULT_PRIMES: [u64; 4] = [5, 7, 11, 13];
    pub const DEFAULT_TRIALS: usize = 8;
    pub const DEFAULT_BUDGET: u64 = 1_000_000;

    pub fn new(primes: &[u64], trials: usize, budget: u64) -> Result<Self, VerifyError> {
        if trials == 0 {
            return Err(VerifyError::NoTrials);
        }
        let primes = primes
            .iter()
            .map(|&p| PrimeField::new(p).map_err(|_| VerifyError::NotPrime(p)))
            .collect::<Result<_, _>>()?;
        Ok(FiniteFieldConfig {
            primes,
            trials,
            budget,
        })
    }

    pub fn primes(&self) -> &[PrimeField] {
        &self.primes
    }
}

impl Default for FiniteFieldConfig {
    fn default() -> Self {
        Self::new(
            &Self::DEFAULT_PRIMES,
            Self::DEFAULT_TRIALS,
            Self::DEFAULT_BUDGET,
        )
        .expect("defaults are valid")
    }
}

/// Seed for the parametric trials of polynomial `index` on `curve`.
pub fn trial_seed(curve: &CurveSpec, index: usize) -> u64 {
    // FNV-1a over the exponents and the index
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &word in curve
        .exponents()
        .iter()
        .chain(std::iter::once(&(index as u64)))
    {
        for byte in word.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

/// `(u^(mn-m_j) v^(m_j))_j`, the curve point with parameters `(u, v)`.
pub fn parametrized_integer_point(curve: &CurveSpec, u: i64, v: i64) -> Vec<BigInt> {
    let top = curve.top();
    (0..=curve.n())
        .map(|j| {
            let mj = curve.m(j);
            num_traits::pow(BigInt::from(u), (top - mj) as usize)
                * num_traits::pow(BigInt::from(v), mj as usize)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub u: i64,
    pub v: i64,
    pub vanished: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipVerdict {
    pub pieces: Vec<(BiDegree, BigInt)>,
    /// Every graded piece sums to zero.
    pub criterion_holds: bool,
    pub trials: Vec<TrialOutcome>,
    pub verdict: Verdict,
}

impl MembershipVerdict {
    pub fn trials_vanished(&self) -> usize {
        self.trials.iter().filter(|t| t.vanished).count()
    }
}

/// Graded coefficient-sum criterion plus exact evaluation at `trials`
/// pseudo-random parametrized points seeded from `(curve, index)`.
pub fn check_ideal_membership(
    poly: &SparsePolynomial,
    curve: &CurveSpec,
    trials: usize,
    index: usize,
) -> MembershipVerdict {
    let pieces: Vec<(BiDegree, BigInt)> = poly
        .graded_pieces(curve)
        .into_iter()
        .map(|(d, piece)| (d, piece.coefficient_sum()))
        .collect();
    let criterion_holds = pieces.iter().all(|(_, s)| s.is_zero());
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(curve, index));
    let trials: Vec<TrialOutcome> = (0..trials)
        .map(|_| {
            let mut draw = || loop {
                let x: i64 = rng.gen_range(-9..=9);
                if x != 0 {
                    break x;
                }
            };
            let (u, v) = (draw(), draw());
            let point = parametrized_integer_point(curve, u, v);
            TrialOutcome {
                u,
                v,
                vanished: poly.eval_integer(&point).is_zero(),
            }
        })
        .collect();
    let ok = criterion_holds && trials.iter().all(|t| t.vanished);
    MembershipVerdict {
        pieces,
        criterion_holds,
        trials,
        verdict: Verdict::from_bool(ok),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionVerdict {
    pub level: usize,
    pub substituted: SparsePolynomial,
    pub expected: SparsePolynomial,
    pub verdict: Verdict,
}

/// `(t^a - x)^m` in the ring `(t, x)`.
pub fn parametric_binomial(a: u64, m: u64) -> SparsePolynomial {
    SparsePolynomial::binomial_power(
        &Term::new(1, Monomial::new(vec![a, 0])),
        &Term::new(1, Monomial::new(vec![0, 1])),
        m,
    )
}

pub fn check_substitution_identity(
    poly: &SparsePolynomial,
    curve: &CurveSpec,
    level: usize,
) -> Result<SubstitutionVerdict, VerifyError> {
    if level < 3 || level > curve.n() {
        return Err(VerifyError::LevelOutOfRange {
            level,
            n: curve.n(),
        });
    }
    let expected = parametric_binomial(curve.m(level), curve.m(level - 1));
    let substituted = match poly.substitute_parametric(curve, level) {
        Ok(s) => s,
        // a stray higher variable can never match
        Err(_) => SparsePolynomial::zero(2),
    };
    let verdict = Verdict::from_bool(substituted == expected);
    Ok(SubstitutionVerdict {
        level,
        substituted,
        expected,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseCaseVerdict {
    pub identity_holds: bool,
    pub gcd_m1_m2: u64,
    pub verdict: Verdict,
}

impl BaseCaseVerdict {
    /// Whether `l1*m2 + l2*m1 = 1` is solvable.
    pub fn bezout_available(&self) -> bool {
        self.gcd_m1_m2 == 1
    }
}

/// `F1(1, t^m1, x2) = t^(m1 m2) - x2^m1` and `gcd(m1, m2) = 1`.
pub fn check_base_case(f1: &SparsePolynomial, curve: &CurveSpec) -> BaseCaseVerdict {
    let (m1, m2) = (curve.m(1), curve.m(2));
    let expected = SparsePolynomial::from_pairs(2, [(1, vec![m1 * m2, 0]), (-1, vec![0, m1])]);
    let identity_holds = f1
        .substitute_parametric(curve, 2)
        .map(|s| s == expected)
        .unwrap_or(false);
    let gcd_m1_m2 = m1.gcd(&m2);
    BaseCaseVerdict {
        identity_holds,
        gcd_m1_m2,
        verdict: Verdict::from_bool(identity_holds && gcd_m1_m2 == 1),
    }
}

/// `(level, k)` with `C(m(level-1), k) = 0 mod p`, `0 < k < m(level-1)`.
pub fn vanishing_binomials(curve: &CurveSpec, p: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::new();
    let modulus = BigInt::from(p);
    for level in curve.levels() {
        let prev = curve.m(level - 1);
        for k in 1..prev {
            if (binomial(prev, k) % &modulus).is_zero() {
                out.push((level, k));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfinityVerdict {
    pub prime: u64,
    /// Common zeros with `x0 = 0`, in canonical order (at most 16 kept).
    pub zeros: Vec<ProjectivePoint>,
    pub zero_count: u64,
    pub verdict: Verdict,
}

fn mod_polys(system: &EquationSystem, field: &PrimeField) -> Vec<ModPolynomial> {
    system
        .polys()
        .iter()
        .map(|f| ModPolynomial::new(f, *field))
        .collect()
}

fn suspect_or_fail(system: &EquationSystem, field: &PrimeField) -> Verdict {
    if vanishing_binomials(system.curve(), field.modulus()).is_empty() {
        Verdict::Fail
    } else {
        Verdict::CharacteristicSuspect
    }
}

/// Common zeros on the hyperplane `x0 = 0` must be exactly `(0:...:0:1)`.
pub fn check_infinity_locus(
    system: &EquationSystem,
    field: &PrimeField,
    budget: u64,
) -> Result<InfinityVerdict, VerifyError> {
    let curve = system.curve();
    let n = curve.n();
    let p = field.modulus();
    let hyperplane = projective_point_count(n - 1, p);
    if hyperplane > budget {
        return Err(VerifyError::BudgetExceeded {
            n: n - 1,
            p,
            points: hyperplane,
            budget,
        });
    }
    let polys = mod_polys(system, field);
    let enumeration = Enumeration::new(n, p);
    let start = enumeration.chart_range(1).start;
    let mut coords = vec![0; curve.nvars()];
    let mut zeros = Vec::new();
    let mut zero_count = 0;
    for index in start..enumeration.len() {
        enumeration.point(index, &mut coords);
        if polys.iter().all(|f| f.eval(&coords) == 0) {
            zero_count += 1;
            if zeros.len() < 16 {
                zeros.push(ProjectivePoint::new(field, &coords).expect("nonzero"));
            }
        }
    }
    let mut apex = vec![0; curve.nvars()];
    apex[n] = 1;
    let ok = zero_count == 1 && zeros[0].coords() == &apex[..];
    let verdict = if ok {
        Verdict::Pass
    } else {
        suspect_or_fail(system, field)
    };
    Ok(InfinityVerdict {
        prime: p,
        zeros,
        zero_count,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocusVerdict {
    pub prime: u64,
    pub points: u64,
    pub zero_count: u64,
    pub curve_count: u64,
    /// Every curve point is a common zero.
    pub containment_holds: bool,
    pub counterexample: Option<(ProjectivePoint, MismatchKind)>,
    /// Binomial coefficients of the construction that vanish mod `p`.
    pub vanishing_binomials: Vec<(usize, u64)>,
    pub verdict: Verdict,
}

/// Chunk size for the parallel point scan.
pub const SCAN_CHUNK: u64 = 4096;

/// Compares the common zero set with the curve on all of `P^n(F_p)`.
pub fn brute_force_locus_equality(
    system: &EquationSystem,
    field: &PrimeField,
    budget: u64,
) -> Result<LocusVerdict, VerifyError> {
    brute_force_locus_equality_chunked(system, field, budget, SCAN_CHUNK)
}

/// [`brute_force_locus_equality`] with an explicit work-chunk size.
pub fn brute_force_locus_equality_chunked(
    system: &EquationSystem,
    field: &PrimeField,
    budget: u64,
    chunk: u64,
) -> Result<LocusVerdict, VerifyError> {
    let curve = system.curve();
    let p = field.modulus();
    let total = projective_point_count(curve.n(), p);
    if total > budget {
        return Err(VerifyError::BudgetExceeded {
            n: curve.n(),
            p,
            points: total,
            budget,
        });
    }
    let witness = BezoutWitness::for_curve(curve).expect("gcd of a curve is 1");
    let polys = mod_polys(system, field);
    let tally = scan_points(&polys, curve, &witness, field, 0..total, chunk);
    let enumeration = Enumeration::new(curve.n(), p);
    let counterexample = tally.first_mismatch.map(|(index, kind)| {
        let mut coords = vec![0; curve.nvars()];
        enumeration.point(index, &mut coords);
        (ProjectivePoint::new(field, &coords).expect("nonzero"), kind)
    });
    let vanishing = vanishing_binomials(curve, p);
    let verdict = if counterexample.is_none() {
        Verdict::Pass
    } else if vanishing.is_empty() {
        Verdict::Fail
    } else {
        Verdict::CharacteristicSuspect
    };
    Ok(LocusVerdict {
        prime: p,
        points: tally.points,
        zero_count: tally.zeros,
        curve_count: tally.curve_points,
        containment_holds: tally.first_containment_failure.is_none(),
        counterexample,
        vanishing_binomials: vanishing,
        verdict,
    })
}

/// Per-level provenance: how the decomposition was admitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelProvenance {
    pub level: usize,
    pub admitted_by: Admission,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub curve: CurveSpec,
    pub membership: Vec<MembershipVerdict>,
    pub base_case: BaseCaseVerdict,
    pub substitution: Vec<SubstitutionVerdict>,
    pub infinity: Vec<InfinityVerdict>,
    pub locus: Vec<LocusVerdict>,
    pub provenance: Vec<LevelProvenance>,
    /// Checks skipped for budget reasons.
    pub skipped: Vec<String>,
    pub overall: Verdict,
}

impl VerificationReport {
    pub fn empirical_levels(&self) -> Vec<usize> {
        self.provenance
            .iter()
            .filter(|p| !p.admitted_by.theorem_backed())
            .map(|p| p.level)
            .collect()
    }
}

pub fn full_verify(system: &EquationSystem, config: &FiniteFieldConfig) -> VerificationReport {
    let curve = system.curve();
    let membership: Vec<_> = system
        .polys()
        .iter()
        .enumerate()
        .map(|(idx, f)| check_ideal_membership(f, curve, config.trials, idx + 1))
        .collect();
    let base_case = check_base_case(system.poly(1), curve);
    let substitution: Vec<_> = curve
        .levels()
        .map(|level| {
            check_substitution_identity(system.poly(level - 1), curve, level)
                .expect("levels come from the curve")
        })
        .collect();
    let mut skipped = Vec::new();
    let mut infinity = Vec::new();
    let mut locus = Vec::new();
    for field in config.primes() {
        match check_infinity_locus(system, field, config.budget) {
            Ok(v) => infinity.push(v),
            Err(e) => skipped.push(format!("infinity locus: {e}")),
        }
        match brute_force_locus_equality(system, field, config.budget) {
            Ok(v) => locus.push(v),
            Err(e) => skipped.push(format!("locus equality: {e}")),
        }
    }
    let provenance = system
        .levels()
        .iter()
        .map(|l| LevelProvenance {
            level: l.level,
            admitted_by: l.selection.admitted_by,
        })
        .collect();
    let overall = membership
        .iter()
        .map(|m| m.verdict)
        .chain(std::iter::once(base_case.verdict))
        .chain(substitution.iter().map(|s| s.verdict))
        .chain(infinity.iter().map(|v| v.verdict))
        .chain(locus.iter().map(|v| v.verdict))
        .fold(Verdict::Pass, Verdict::and);
    VerificationReport {
        curve: curve.clone(),
        membership,
        base_case,
        substitution,
        infinity,
        locus,
        provenance,
        skipped,
        overall,
    }
}
