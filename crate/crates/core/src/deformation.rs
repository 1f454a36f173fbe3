//! Deformation functions `f(n)` and the f-deformed oscillator built on them.
//!
//! The deformed annihilation operator is `A = a√f(a†a)`, with
//! `⟨n−1|A|n⟩ = √(n f(n))`. Its eigenstates are the f-coherent states
//!
//! ```text
//! |ζ, f⟩ ∝ Σ ζⁿ / √([n]_f!) |n⟩,    [n]_f! = n f(n) · (n−1) f(n−1) ⋯ 1·f(1) · f(0)
//! ```
//!
//! Factorials are kept as logarithms and state coefficients are built from
//! term ratios, so nothing overflows for large `n`.

use crate::error::{Error, InvalidReason, Result};
use crate::fock::{CMatrix, FockSpace, FockVector, C64, TAIL_TOL};

/// Below this `|L⁰_n(ξ²)|` the L-deformation is treated as undefined.
pub const ZERO_DENOMINATOR_TOL: f64 = 1e-14;

/// Relative size of the last kept term in [`exp_f`].
const EXP_F_REL_TOL: f64 = 1e-16;

/// The deformation function `f(n)` of the oscillator algebra.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeformationSpec {
    /// `f ≡ 1`: the ordinary boson.
    Identity,
    /// `f(n) = L¹_n(ξ²) / ((n+1) L⁰_n(ξ²))`.
    Laguerre { xi: f64 },
}

impl DeformationSpec {
    pub fn laguerre(xi: f64) -> Result<Self> {
        if !xi.is_finite() || xi < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "deformation parameter xi must be finite and >= 0, got {xi}"
            )));
        }
        Ok(DeformationSpec::Laguerre { xi })
    }

    /// `ξ` for the Laguerre family, `None` for the identity.
    pub fn xi(&self) -> Option<f64> {
        match *self {
            DeformationSpec::Identity => None,
            DeformationSpec::Laguerre { xi } => Some(xi),
        }
    }
}

impl std::fmt::Display for DeformationSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DeformationSpec::Identity => f.write_str("identity"),
            DeformationSpec::Laguerre { xi } => write!(f, "laguerre(xi={xi})"),
        }
    }
}

/// Associated Laguerre polynomial `L^m_n(x)` by upward recurrence in `n`.
pub fn laguerre(n: usize, m: usize, x: f64) -> f64 {
    let m = m as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + m - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + m - x) * cur - (k + m) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Evaluates `f(n)` for `spec`.
pub fn f_value(spec: &DeformationSpec, n: usize) -> Result<f64> {
    match *spec {
        DeformationSpec::Identity => Ok(1.0),
        DeformationSpec::Laguerre { xi } => {
            let x = xi * xi;
            let den = laguerre(n, 0, x);
            if den.abs() < ZERO_DENOMINATOR_TOL {
                return Err(Error::ZeroDenominator { n });
            }
            let value = laguerre(n, 1, x) / ((n as f64 + 1.0) * den);
            if value <= 0.0 {
                return Err(Error::NonPositive { n, value });
            }
            Ok(value)
        }
    }
}

/// Outcome of checking a deformation against a truncated space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Validity {
    Valid,
    /// `n` is the smallest level at which `f` fails.
    Invalid {
        n: usize,
        reason: InvalidReason,
    },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }

    pub fn into_result(self) -> Result<()> {
        match self {
            Validity::Valid => Ok(()),
            Validity::Invalid { n, reason } => Err(Error::InvalidDeformation { n, reason }),
        }
    }
}

/// Scans `0..=n_max` for the first level where `f(n)` is unusable.
pub fn validate_on_space(spec: &DeformationSpec, space: FockSpace) -> Validity {
    for n in 0..=space.n_max() {
        let reason = match f_value(spec, n) {
            Ok(v) if v.is_finite() => continue,
            Ok(_) => InvalidReason::NonFinite,
            Err(Error::ZeroDenominator { .. }) => InvalidReason::ZeroDenominator,
            Err(_) => InvalidReason::NonPositive,
        };
        return Validity::Invalid { n, reason };
    }
    Validity::Valid
}

fn f_table(spec: &DeformationSpec, space: FockSpace) -> Result<Vec<f64>> {
    validate_on_space(spec, space).into_result()?;
    (0..space.dim()).map(|n| f_value(spec, n)).collect()
}

/// `ln([n]_f!)` for `n = 0..=n_max`, with `[0]_f! = f(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformedFactorialTable {
    ln_fact: Vec<f64>,
}

impl DeformedFactorialTable {
    pub fn ln(&self, n: usize) -> f64 {
        self.ln_fact[n]
    }

    pub fn len(&self) -> usize {
        self.ln_fact.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_fact.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.ln_fact
    }
}

pub fn deformed_factorial_log(
    spec: &DeformationSpec,
    space: FockSpace,
) -> Result<DeformedFactorialTable> {
    let f = f_table(spec, space)?;
    let mut ln_fact = Vec::with_capacity(f.len());
    ln_fact.push(f[0].ln());
    for n in 1..f.len() {
        ln_fact.push(ln_fact[n - 1] + (n as f64 * f[n]).ln());
    }
    Ok(DeformedFactorialTable { ln_fact })
}

/// Deformed exponential `Σ xⁿ / [n]_f!`, summed over at most `n_terms` terms.
///
/// Stops as soon as a term drops below `1e-16` of the running sum.
pub fn exp_f(x: f64, spec: &DeformationSpec, n_terms: usize) -> Result<f64> {
    if n_terms == 0 {
        return Err(Error::NonConvergence { n_terms });
    }
    let mut term = 1.0 / f_value(spec, 0)?;
    let mut sum = term;
    for n in 1..n_terms {
        term *= x / (n as f64 * f_value(spec, n)?);
        sum += term;
        if term.abs() < EXP_F_REL_TOL * sum.abs() || term == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence { n_terms })
}

/// Unnormalized `ζⁿ / √([n]_f!)` by the ratio `c_n = c_{n−1} ζ / √(n f(n))`.
pub(crate) fn raw_coherent_coefficients(zeta: f64, f: &[f64]) -> Vec<f64> {
    let mut c = Vec::with_capacity(f.len());
    c.push(1.0 / f[0].sqrt());
    for n in 1..f.len() {
        c.push(c[n - 1] * zeta / (n as f64 * f[n]).sqrt());
    }
    c
}

/// Normalized f-coherent state `|ζ, f⟩` for real `ζ`.
pub fn coherent_coefficients(
    zeta: f64,
    spec: &DeformationSpec,
    space: FockSpace,
) -> Result<FockVector> {
    if !zeta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "zeta must be finite, got {zeta}"
        )));
    }
    let f = f_table(spec, space)?;
    let raw = raw_coherent_coefficients(zeta, &f);
    let state = FockVector::from_real(space, &raw)?.normalized()?;
    let tail = state.tail_mass();
    if tail >= TAIL_TOL {
        return Err(Error::TailTooHeavy {
            tail,
            n_max: space.n_max(),
        });
    }
    Ok(state)
}

/// Matrix of `A = a√f(a†a)`: `⟨n−1|A|n⟩ = √(n f(n))`.
pub fn deformed_annihilation(spec: &DeformationSpec, space: FockSpace) -> Result<CMatrix> {
    let f = f_table(spec, space)?;
    let dim = space.dim();
    let mut a = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64 * f[n]).sqrt(), 0.0);
    }
    Ok(a)
}

/// `[f(0), …, f(n_max)]` after validating the whole space.
pub fn f_values(spec: &DeformationSpec, space: FockSpace) -> Result<Vec<f64>> {
    f_table(spec, space)
}
