//! Integer matrices in `GL_2^+(Q)`, the weight-k slash action, and the chain of constants
//! `C_χ → Ĉ_q → S_q` built from recovered root numbers.

use num_complex::Complex64;
use thiserror::Error;

use crate::chargroup::CharError;
use crate::coeffs::CoeffError;
use crate::lfun::LfunError;

mod forms;
mod matrix;
mod sq;

pub use forms::{
    balanced_points, check_slash_coefficients, evaluate_fourier, modularity_check,
    modularity_check_with_constant, required_fourier_terms, slash, slash_fourier_coefficients,
    Evaluated, FourierSeries, ModularFunction, ModularityReport, SlashCoefficientReport, Slashed,
};
pub use matrix::{
    admissible_primes, complete_bottom_row, gamma_qa, primes_one_mod, verify_matrix_identities,
    IdentityCheck, IntegerMatrix2x2, MatrixReport, RationalMatrix2x2, UpperHalfPoint,
};
pub use sq::{
    c_hat, compute_c_chi, s_q, solve_root_numbers, sq_from_root_numbers, verify_sq_equals_one,
    RootNumbers, SolverConfig, SqReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModularError {
    #[error("malformed matrix literal {0:?}, expected \"a,b;c,d\"")]
    BadMatrix(String),
    #[error("{0} is not in the upper half-plane")]
    NotInUpperHalfPlane(Complex64),
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("gcd({q}, {na}) != 1")]
    NotCoprime { q: u64, na: i64 },
    #[error("q = {q} is not an admissible prime for level {level}")]
    NotAdmissible { q: u64, level: u64 },
    #[error("insufficient coefficients: need {required}, have {available}")]
    InsufficientCoefficients { required: usize, available: usize },
    #[error("matrix {0} does not have positive determinant")]
    NonPositiveDeterminant(IntegerMatrix2x2),
    #[error("matrix {gamma} is not in Gamma0({level})")]
    NotInGamma0 { gamma: IntegerMatrix2x2, level: u64 },
    #[error("no evaluation points")]
    EmptyPoints,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("q = {q} divides the level {level}")]
    DividesLevel { q: u64, level: u64 },
    #[error("expected one C value for each of the {expected} characters, got {got}")]
    IncompleteCValues { expected: usize, got: usize },
    #[error("root number for {label} is not unimodular: |eps| = {modulus}")]
    NotUnimodular { label: String, modulus: f64 },
    #[error("root number solve for {character} failed: {source}")]
    Solver {
        character: String,
        #[source]
        source: LfunError,
    },
    #[error(transparent)]
    Lfun(#[from] LfunError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Character(#[from] CharError),
}
