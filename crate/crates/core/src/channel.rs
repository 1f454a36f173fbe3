//! Zero-temperature amplitude damping.
//!
//! The master equation `ρ̇ = γ aρa† − (γ/2){a†a, ρ}` is solved exactly by the
//! Kraus family
//!
//! ```text
//! Υ_k = Σ_{n≥k} √C(n,k) η^{(n−k)/2} (1−η)^{k/2} |n−k⟩⟨n|,    η = e^{−γt}
//! ```
//!
//! Fidelity `F = Tr{ρ(t)ρ(0)}` of an encoded cat is computed both by applying
//! the channel to `|Φ±⟩⟨Φ±|` and by the closed triple series over `k, n, m`.

use rayon::prelude::*;

use crate::cat::{analytic_norms, cat_factor, CatParity, LogicalBasis};
use crate::deformation::{deformed_factorial_log, DeformationSpec};
use crate::error::{Error, Result};
use crate::fock::{max_abs, outer, trace_product, CMatrix, DensityMatrix, FockSpace, C64};

/// Maximum allowed gap between the two fidelity routes.
pub const SERIES_CHECK_TOL: f64 = 1e-8;

/// Dimensionless time `γt` and its survival factor `η = e^{−γt}`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DampingPoint {
    pub gamma_t: f64,
    pub eta: f64,
}

impl DampingPoint {
    pub fn new(gamma_t: f64) -> Result<Self> {
        if gamma_t.is_nan() || gamma_t < 0.0 || gamma_t.is_infinite() {
            return Err(Error::InvalidParameter(format!(
                "gamma_t must be finite and >= 0, got {gamma_t}"
            )));
        }
        Ok(Self {
            gamma_t,
            eta: (-gamma_t).exp(),
        })
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidParameter(format!(
            "eta must lie in [0, 1], got {eta}"
        )));
    }
    Ok(())
}

/// `ln k!` for `k = 0..=n`.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(0.0);
    for k in 1..=n {
        out.push(out[k - 1] + (k as f64).ln());
    }
    out
}

/// `p · ln x`, with `0 · ln 0 = 0`.
fn xlogy(p: f64, x: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * x.ln()
    }
}

/// Damping operators `Υ_0 … Υ_{n_max}` for one `η`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    eta: f64,
    space: FockSpace,
    operators: Vec<CMatrix>,
}

impl KrausSet {
    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// `‖Σ_k Υ_k†Υ_k − I‖_max`.
    pub fn completeness_defect(&self) -> f64 {
        let dim = self.space.dim();
        let mut sum = CMatrix::zeros(dim, dim);
        for op in &self.operators {
            sum += op.adjoint() * op;
        }
        max_abs((sum - CMatrix::identity(dim, dim)).iter())
    }
}

pub fn kraus_set(eta: f64, space: FockSpace) -> Result<KrausSet> {
    check_eta(eta)?;
    let dim = space.dim();
    let ln_fact = ln_factorials(space.n_max());
    let operators = (0..dim)
        .map(|k| {
            let mut op = CMatrix::zeros(dim, dim);
            for n in k..dim {
                let ln_binom = ln_fact[n] - ln_fact[k] - ln_fact[n - k];
                let ln_amp =
                    0.5 * (ln_binom + xlogy((n - k) as f64, eta) + xlogy(k as f64, 1.0 - eta));
                op[(n - k, n)] = C64::new(ln_amp.exp(), 0.0);
            }
            op
        })
        .collect();
    Ok(KrausSet {
        eta,
        space,
        operators,
    })
}

/// `Σ_k Υ_k ρ Υ_k†`.
///
/// `Υ_k` only has entries on its `k`-th superdiagonal, so each term is
/// `(Υ_k ρ Υ_k†)_{ij} = u_k(i) ρ_{i+k, j+k} u_k(j)*` with `u_k(i) = ⟨i|Υ_k|i+k⟩`.
pub fn apply_channel(rho: &DensityMatrix, kraus: &KrausSet) -> Result<DensityMatrix> {
    if rho.space() != kraus.space {
        return Err(Error::DimensionMismatch {
            left: rho.space().dim(),
            right: kraus.space.dim(),
        });
    }
    let dim = rho.space().dim();
    let src = rho.matrix();
    let mut out = CMatrix::zeros(dim, dim);
    for (k, op) in kraus.operators.iter().enumerate() {
        let band: Vec<C64> = (0..dim - k).map(|i| op[(i, i + k)]).collect();
        for j in 0..dim - k {
            let uj = band[j].conj();
            if uj == C64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..dim - k {
                out[(i, j)] += band[i] * src[(i + k, j + k)] * uj;
            }
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(rho.space(), out))
}

/// `Tr{ρ(t)ρ(0)}` with `ρ(0) = |Φ±⟩⟨Φ±|`, via the Kraus map.
pub fn fidelity_direct(basis: &LogicalBasis, which: CatParity, eta: f64) -> Result<f64> {
    let kraus = kraus_set(eta, basis.space())?;
    fidelity_with(basis, which, &kraus)
}

fn fidelity_with(basis: &LogicalBasis, which: CatParity, kraus: &KrausSet) -> Result<f64> {
    let rho0 = outer(basis.ket(which))?;
    let rho_t = apply_channel(&rho0, kraus)?;
    trace_product(&rho_t, &rho0)
}

/// Fidelity from the closed series
///
/// ```text
/// F± = N⁴N±⁴ Σ_k Σ_{n,m≥k} √(C(n,k)C(m,k)) η^{(n+m)/2−k} (1−η)^k
///        × c±(n) c±(m) c±(n−k) c±(m−k),    c±(n) = (ζⁿ ± (−ζ)ⁿ)/√[n]_f!
/// ```
///
/// with every sum truncated at the space's `n_max`.
pub fn fidelity_series(
    zeta: f64,
    spec: &DeformationSpec,
    which: CatParity,
    eta: f64,
    space: FockSpace,
) -> Result<f64> {
    check_eta(eta)?;
    if zeta == 0.0 {
        return Err(Error::InvalidParameter("zeta must be nonzero".into()));
    }
    let norms = analytic_norms(zeta, spec, space)?;
    let table = deformed_factorial_log(spec, space)?;
    let ln_fact = ln_factorials(space.n_max());
    let dim = space.dim();

    // c±(n) as (sign, ln|c±(n)|).
    let coeff: Vec<Option<(f64, f64)>> = (0..dim)
        .map(|n| cat_factor(zeta, n, which).map(|(s, ln)| (s, ln - 0.5 * table.ln(n))))
        .collect();
    let ln_prefactor = 4.0 * (norms.single.ln() + norms.get(which).ln());

    let mut total = 0.0;
    for k in 0..dim {
        let ln_k = xlogy(k as f64, 1.0 - eta);
        for n in k..dim {
            let (Some(cn), Some(cnk)) = (coeff[n], coeff[n - k]) else {
                continue;
            };
            let ln_n = 0.5 * (ln_fact[n] - ln_fact[k] - ln_fact[n - k]) + cn.1 + cnk.1;
            for m in k..dim {
                let (Some(cm), Some(cmk)) = (coeff[m], coeff[m - k]) else {
                    continue;
                };
                let ln_m = 0.5 * (ln_fact[m] - ln_fact[k] - ln_fact[m - k]) + cm.1 + cmk.1;
                let ln_eta = xlogy(((n + m) as f64) / 2.0 - k as f64, eta);
                let sign = cn.0 * cnk.0 * cm.0 * cmk.0;
                total += sign * (ln_prefactor + ln_n + ln_m + ln_eta + ln_k).exp();
            }
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FidelityRow {
    pub gamma_t: f64,
    pub eta: f64,
    pub f_plus: f64,
    pub f_minus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CheckPoint {
    pub gamma_t: f64,
    pub which: CatParity,
    pub direct: f64,
    pub series: f64,
}

/// Series-vs-channel spot check attached to a fidelity curve.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SeriesCheck {
    pub max_abs_discrepancy: f64,
    pub points: Vec<CheckPoint>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FidelityCurve {
    pub rows: Vec<FidelityRow>,
    pub check: SeriesCheck,
}

/// 61 uniform points on `γt ∈ [0, 3]`.
pub fn default_t_grid() -> Vec<f64> {
    (0..61).map(|i| 3.0 * i as f64 / 60.0).collect()
}

/// Indices of the first, middle and last grid points.
fn spot_check_indices(len: usize) -> Vec<usize> {
    let mut idx = vec![0, len / 2, len.saturating_sub(1)];
    idx.dedup();
    idx
}

/// `F₊` and `F₋` over `t_grid`, with the series route checked at three points.
pub fn fidelity_curve(
    zeta: f64,
    spec: &DeformationSpec,
    space: FockSpace,
    t_grid: &[f64],
) -> Result<FidelityCurve> {
    if t_grid.is_empty() {
        return Err(Error::InvalidParameter("empty time grid".into()));
    }
    let basis = crate::cat::build_logical_basis(zeta, spec, space)?;
    let rows = t_grid
        .par_iter()
        .map(|&gamma_t| {
            let point = DampingPoint::new(gamma_t)?;
            let kraus = kraus_set(point.eta, space)?;
            Ok(FidelityRow {
                gamma_t,
                eta: point.eta,
                f_plus: fidelity_with(&basis, CatParity::Plus, &kraus)?,
                f_minus: fidelity_with(&basis, CatParity::Minus, &kraus)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut points = Vec::new();
    for i in spot_check_indices(rows.len()) {
        let row = rows[i];
        for which in CatParity::BOTH {
            let direct = match which {
                CatParity::Plus => row.f_plus,
                CatParity::Minus => row.f_minus,
            };
            let series = fidelity_series(zeta, spec, which, row.eta, space)?;
            points.push(CheckPoint {
                gamma_t: row.gamma_t,
                which,
                direct,
                series,
            });
        }
    }
    let max_abs_discrepancy = points
        .iter()
        .map(|p| (p.direct - p.series).abs())
        .fold(0.0, f64::max);
    if max_abs_discrepancy.is_nan() || max_abs_discrepancy > SERIES_CHECK_TOL {
        return Err(Error::CrossCheck {
            what: "fidelity series vs channel",
            discrepancy: max_abs_discrepancy,
            tolerance: SERIES_CHECK_TOL,
        });
    }
    Ok(FidelityCurve {
        rows,
        check: SeriesCheck {
            max_abs_discrepancy,
            points,
        },
    })
}
