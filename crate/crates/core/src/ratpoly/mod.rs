//! Exact computer-algebra substrate.
//!
//! Everything symbolic in the crate is built from the types in this module:
//!
//! * [`Rational`]: arbitrary-precision rationals, always reduced.
//! * [`BiPoly`]: sparse bivariate polynomials over the rationals in either
//!   the physical pair `(ξ, σ)` or the Madelung pair `(u, v)`.
//! * [`LaurentSeries`] and [`sqrt_series`]: truncated expansions of the square
//!   root of a quadratic in the spectral parameter, at `λ = ∞` or `λ = 0`.
//! * [`GenExpr`]: polynomial combinations of half-integer powers and logarithm
//!   powers of one fixed generator polynomial (radical and log-bearing densities).
//! * [`JetExpr`] and [`JetFrac`]: differential polynomials in two fields and their
//!   x-derivatives, with the total derivative and the Euler operator.
//! * [`RSeries`]: polynomials truncated in the inertia parameter `r`.
//!
//! Coefficients are exact; floating point only appears in explicit evaluators.

mod bipoly;
mod genexpr;
mod jet;
mod json;
mod parse;
mod rseries;
mod series;

pub use bipoly::{poly_arith, BiPoly, Exponent, PolyEval, PolyOp};
pub use genexpr::GenExpr;
pub use jet::{JetExpr, JetFrac, JetMonomial};
pub use json::{genexpr_to_json, jet_to_json, poly_from_json, poly_to_json};
pub use parse::parse_poly;
pub use rseries::RSeries;
pub use series::{sqrt_series, ExpansionPoint, LaurentSeries, RadicalSeries, SqrtExpansion};
pub(crate) use series::dnls_radicand;

use num::{BigInt, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = num::BigRational;

/// Builds the rational `n / d`.
///
/// # Panics
/// Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Lossy conversion of a rational to `f64`.
pub fn rat_to_f64(q: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    // Very large numerators or denominators: scale both down by a common power of two.
    let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
    let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Exact conversion of a finite `f64` to a rational.
pub fn rat_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Returns the square root of a rational when it is a perfect square.
pub fn rat_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(Rational::zero());
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// The ordered pair of symbols a polynomial or jet expression is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VarPair {
    /// Interface displacement `ξ` and momentum shear `σ`.
    #[serde(rename = "xs")]
    XiSigma,
    /// Madelung variables `u` and `v`.
    #[serde(rename = "uv")]
    UV,
}

impl VarPair {
    /// ASCII names of the two variables.
    pub fn names(self) -> [&'static str; 2] {
        match self {
            VarPair::XiSigma => ["xi", "sigma"],
            VarPair::UV => ["u", "v"],
        }
    }

    /// Resolves a variable name (ASCII or Greek) to its index.
    pub fn index_of(self, name: &str) -> Result<usize, AlgebraError> {
        let aliases: [&[&str]; 2] = match self {
            VarPair::XiSigma => [&["xi", "ξ", "x"], &["sigma", "σ", "s"]],
            VarPair::UV => [&["u"], &["v"]],
        };
        aliases
            .iter()
            .position(|names| names.contains(&name))
            .ok_or_else(|| AlgebraError::UnknownVariable {
                name: name.to_string(),
                vars: self,
            })
    }
}

/// Errors raised by exact-algebra operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// Two operands are written in different variable pairs.
    #[error("variable-pair mismatch: {left:?} vs {right:?}")]
    VarMismatch { left: VarPair, right: VarPair },
    /// A variable name is not part of the operand's variable pair.
    #[error("unknown variable `{name}` for variable pair {vars:?}")]
    UnknownVariable { name: String, vars: VarPair },
    /// A series was requested with a truncation order below one.
    #[error("truncation order {0} is below the minimum of 1")]
    TruncationOrder(i32),
    /// The leading coefficient at the expansion point is not a perfect square.
    #[error("leading coefficient is not a perfect square: {0}")]
    NotPerfectSquare(String),
    /// A jet expression exceeds the jet order an operation accepts.
    #[error("jet order {found} exceeds the supported maximum {max}")]
    JetOrderExceeded { found: usize, max: usize },
    /// A substitution cannot be applied to the given expression.
    #[error("unsupported substitution: {0}")]
    UnsupportedSubstitution(&'static str),
    /// Polynomial text could not be parsed.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// JSON input does not describe a polynomial.
    #[error("malformed polynomial JSON: {0}")]
    Json(String),
    /// An exact division left a remainder.
    #[error("polynomial division is not exact")]
    NotDivisible,
    /// Two truncated series have incompatible truncation orders.
    #[error("truncation mismatch: {0}")]
    Truncation(String),
}
