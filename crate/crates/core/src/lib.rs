//! Explicit equations for recursive extensions of monomial curves.
//!
//! A monomial curve `C(m1,...,mn)` in projective `n`-space is a recursive
//! extension when every `mi` with `i >= 3` lies in the numerical semigroup
//! generated by the smaller exponents. For such curves this crate builds one
//! binomial `F1` and `n - 2` further polynomials `F2,...,F(n-1)` whose common
//! zero set is the curve, and checks the construction with independent
//! oracles:
//!
//! * [`semigroup`] validates curves and produces the integer decompositions
//!   that drive the construction.
//! * [`polyring`] is a small exact sparse polynomial ring over `Z` and `F_p`.
//! * [`equations`] builds `F1,...,F(n-1)` and the general two-binomial splice.
//! * [`verify`] checks ideal membership, the substitution identity and the
//!   zero locus over prime fields by brute force.

pub mod equations;
pub mod polyring;
pub mod semigroup;
pub mod verify;

pub use equations::{
    build_f1, build_fi, build_general_splice, build_system, build_system_with_pins,
    find_valid_split, BuildDiagnostics, EquationError, EquationSystem, SpliceSpec,
};
pub use polyring::{BiDegree, Monomial, PolyError, PrimeField, SparsePolynomial, Term};
pub use semigroup::{
    enumerate_decompositions, normalize_decomposition, proposition_theta, select_decomposition,
    to_signed, validate_curve, Admission, CurveSpec, DecompositionPair, PositiveDecomposition,
    SelectionPolicy, SemigroupError, SignedDecomposition,
};
pub use verify::{full_verify, FiniteFieldConfig, Verdict, VerificationReport, VerifyError};
