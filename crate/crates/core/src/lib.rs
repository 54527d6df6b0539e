//! Exact linear-algebraic invariants of Hermitian symmetric polynomials.
//!
//! A Hermitian symmetric polynomial `r(z, zbar) = sum c_{ab} z^a zbar^b`
//! (with `c_{ab} = conj(c_{ba})`) is real-valued on the diagonal and has a
//! well-defined signature pair `s(r) = (A, B)`: the numbers of positive and
//! negative eigenvalues of its coefficient matrix. This crate computes such
//! invariants exactly and provides:
//!
//! * [`scalar`]: arithmetic in Q and in real quadratic towers of depth at
//!   most two (for example `Q(sqrt(2))(sqrt(4 + 2 sqrt(2)))`), plus certified
//!   rational interval scalars with precision-doubling refinement for values
//!   outside those towers.
//! * [`polyring`]: sparse multivariate real and Hermitian polynomials with
//!   the structural conversions between them (realification, moment lift,
//!   bihomogenization, evaluation).
//! * [`hermitian_form`]: coefficient matrices over a chosen monomial basis,
//!   exact inertia triples via congruence diagonalization, and a floating
//!   point eigenvalue oracle used for cross-checking.
//! * [`quotient`]: exact division by the hyperquadric form
//!   `|z_1|^2 + ... + |z_n|^2 - |z_{n+1}|^2`, holomorphic content extraction,
//!   projective degree, and stabilization search.
//! * [`constructions`]: generators for families of polynomials with
//!   prescribed signature behaviour. Every generator re-verifies its claims
//!   and returns a [`constructions::Certificate`].
//!
//! All arithmetic on the exact paths is exact; no floating point enters any
//! certificate. Floating point appears only in the optional eigenvalue
//! oracle and in numeric cross-checks inside tests.

pub mod constructions;
pub mod hermitian_form;
pub mod polyring;
pub mod quotient;
pub mod scalar;

use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Arithmetic between elements of distinct quadratic towers.
    #[error("incompatible scalar towers: {0}")]
    IncompatibleTowers(String),
    /// A square root would need a tower of depth greater than two.
    #[error("tower depth exceeded: {0}")]
    DepthExceeded(String),
    /// Square root of a value that is not certified nonnegative.
    #[error("square root of a negative value: {0}")]
    NegativeRadicand(String),
    /// Division by an exact zero, or by an interval not certified nonzero.
    #[error("division by zero")]
    DivisionByZero,
    /// An interval straddles zero at the configured precision cap.
    /// Raising the cap (see `HERMSIG_INTERVAL_MAX_LEVEL`) may resolve it.
    #[error("indeterminate sign at precision level {level}: width {width}")]
    IndeterminateSign { level: u32, width: String },
    /// Mismatched variable counts between polynomial operands.
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    /// Input breaks Hermitian symmetry `c_{ab} = conj(c_{ba})`.
    #[error("not Hermitian symmetric: {0}")]
    NotHermitian(String),
    /// A polynomial is not bihomogeneous of the degree an operation needs.
    #[error("not bihomogeneous of degree ({0}, {0})")]
    NotBihomogeneous(u32),
    /// The declared ambient space cannot contain the polynomial.
    #[error("ambient too small: {0}")]
    AmbientTooSmall(String),
    /// An operation needs rational or Gaussian-rational coefficients.
    #[error("unsupported coefficients: {0}")]
    UnsupportedCoefficients(String),
    /// Evaluation of a Hermitian polynomial returned a non-real value,
    /// which signals a corrupted symmetry invariant.
    #[error("internal invariant violated: {0}")]
    Internal(String),
    /// A construction refuses its parameters, with the mathematical reason.
    #[error("refused: {0}")]
    Refused(String),
    /// Combined supports collide where a construction needs them disjoint.
    #[error("support collision: {0}")]
    SupportCollision(String),
    /// A generic precondition failure (bad parameter, wrong shape).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A generator's claimed invariant failed re-verification.
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
