use thiserror::Error;

/// Why a deformation cannot be used on a truncated space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InvalidReason {
    /// `|L⁰_n(ξ²)|` fell below the zero-denominator threshold.
    ZeroDenominator,
    /// `f(n) <= 0`, so `√f(n)` is not real.
    NonPositive,
    /// `f(n)` evaluated to NaN or infinity.
    NonFinite,
}

impl std::fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            InvalidReason::ZeroDenominator => "zero denominator",
            InvalidReason::NonPositive => "non-positive f(n)",
            InvalidReason::NonFinite => "non-finite f(n)",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("L⁰_{n}(ξ²) vanishes (|value| < 1e-14), f({n}) undefined")]
    ZeroDenominator { n: usize },

    #[error("deformation f({n}) = {value} is not positive")]
    NonPositive { n: usize, value: f64 },

    #[error("deformation invalid on space: first failing n = {n} ({reason})")]
    InvalidDeformation { n: usize, reason: InvalidReason },

    #[error("tail mass {tail:e} at n_max = {n_max} exceeds 1e-12; increase n_max")]
    TailTooHeavy { tail: f64, n_max: usize },

    #[error("deformed exponential did not converge within {n_terms} terms")]
    NonConvergence { n_terms: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state is not normalized (norm² = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("trace product has imaginary residue {imag:e}")]
    NonRealTrace { imag: f64 },

    #[error("{what}: discrepancy {discrepancy:e} exceeds {tolerance:e}")]
    CrossCheck {
        what: &'static str,
        discrepancy: f64,
        tolerance: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// True for failures of a numerical invariant (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::TailTooHeavy { .. } | Error::NonConvergence { .. } | Error::CrossCheck { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
