//! Even/odd (deformed) cat states and the logical qubit they encode.
//!
//! `|0̄⟩ = |Φ₊⟩ = N₊(|ζ,f⟩ + |−ζ,f⟩)` and `|1̄⟩ = |Φ₋⟩ = N₋(|ζ,f⟩ − |−ζ,f⟩)`.
//! The sum keeps only even number states and the difference only odd ones, so
//! both kets are built by masking the parity of `|ζ,f⟩` and renormalizing.

use crate::deformation::{coherent_coefficients, deformed_factorial_log, exp_f, DeformationSpec};
use crate::error::{Error, Result};
use crate::fock::{ladder_matrices, CVector, FockSpace, FockVector, C64};

/// Agreement required between analytic and numerical normalizations.
pub const CROSS_CHECK_TOL: f64 = 1e-10;

/// Which cat: even (`+`, logical zero) or odd (`−`, logical one).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CatParity {
    Plus,
    Minus,
}

impl CatParity {
    pub const BOTH: [CatParity; 2] = [CatParity::Plus, CatParity::Minus];

    /// Whether level `n` belongs to this cat's support.
    pub fn contains(self, n: usize) -> bool {
        match self {
            CatParity::Plus => n & 1 == 0,
            CatParity::Minus => n % 2 == 1,
        }
    }
}

/// Normalization constants `N`, `N₊`, `N₋`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CatNorms {
    pub single: f64,
    pub plus: f64,
    pub minus: f64,
}

impl CatNorms {
    pub fn get(&self, which: CatParity) -> f64 {
        match which {
            CatParity::Plus => self.plus,
            CatParity::Minus => self.minus,
        }
    }
}

/// `N = exp_f(ζ²)^{-1/2}` and `N± = [2 ± 2N² exp_f(−ζ²)]^{-1/2}`.
pub fn analytic_norms(zeta: f64, spec: &DeformationSpec, space: FockSpace) -> Result<CatNorms> {
    let z2 = zeta * zeta;
    let n_terms = space.dim();
    let single_sq = 1.0 / exp_f(z2, spec, n_terms)?;
    let overlap = single_sq * exp_f(-z2, spec, n_terms)?;
    Ok(CatNorms {
        single: single_sq.sqrt(),
        plus: (2.0 + 2.0 * overlap).powf(-0.5),
        minus: (2.0 - 2.0 * overlap).powf(-0.5),
    })
}

/// The encoded qubit `(|0̄⟩, |1̄⟩)` for one `(ζ, f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalBasis {
    pub zeta: f64,
    pub spec: DeformationSpec,
    pub ket0: FockVector,
    pub ket1: FockVector,
    pub norms: CatNorms,
}

impl LogicalBasis {
    pub fn space(&self) -> FockSpace {
        self.ket0.space()
    }

    pub fn ket(&self, which: CatParity) -> &FockVector {
        match which {
            CatParity::Plus => &self.ket0,
            CatParity::Minus => &self.ket1,
        }
    }

    pub fn norm_plus(&self) -> f64 {
        self.norms.plus
    }

    pub fn norm_minus(&self) -> f64 {
        self.norms.minus
    }

    pub fn norm_single(&self) -> f64 {
        self.norms.single
    }
}

fn parity_projection(psi: &FockVector, which: CatParity) -> Result<FockVector> {
    let amps = CVector::from_iterator(
        psi.space().dim(),
        psi.amplitudes().iter().enumerate().map(|(n, &c)| {
            if which.contains(n) {
                c
            } else {
                C64::new(0.0, 0.0)
            }
        }),
    );
    FockVector::from_amplitudes(psi.space(), amps)
}

fn cross_check(what: &'static str, a: f64, b: f64) -> Result<()> {
    let discrepancy = (a - b).abs();
    if discrepancy.is_nan() || discrepancy > CROSS_CHECK_TOL {
        return Err(Error::CrossCheck {
            what,
            discrepancy,
            tolerance: CROSS_CHECK_TOL,
        });
    }
    Ok(())
}

pub fn build_logical_basis(
    zeta: f64,
    spec: &DeformationSpec,
    space: FockSpace,
) -> Result<LogicalBasis> {
    if zeta == 0.0 {
        return Err(Error::InvalidParameter(
            "zeta = 0 leaves no odd cat (N₋ diverges)".into(),
        ));
    }
    let coherent = coherent_coefficients(zeta, spec, space)?;
    let even = parity_projection(&coherent, CatParity::Plus)?;
    let odd = parity_projection(&coherent, CatParity::Minus)?;

    // |ζ⟩ ± |−ζ⟩ is twice the even/odd part of |ζ⟩.
    let numeric_plus = 1.0 / (2.0 * even.norm_sq().sqrt());
    let numeric_minus = 1.0 / (2.0 * odd.norm_sq().sqrt());
    let norms = analytic_norms(zeta, spec, space)?;
    cross_check("N₊ analytic vs numerical", norms.plus, numeric_plus)?;
    cross_check("N₋ analytic vs numerical", norms.minus, numeric_minus)?;

    let table = deformed_factorial_log(spec, space)?;
    let raw_norm_sq: f64 = (0..space.dim())
        .map(|n| (2.0 * n as f64 * zeta.abs().ln() - table.ln(n)).exp())
        .sum();
    cross_check(
        "N analytic vs numerical",
        norms.single,
        raw_norm_sq.powf(-0.5),
    )?;

    Ok(LogicalBasis {
        zeta,
        spec: *spec,
        ket0: even.normalized()?,
        ket1: odd.normalized()?,
        norms,
    })
}

/// Relative normalization mismatch `|N₊ − N₋| / min(N₊, N₋)`.
pub fn delta(basis: &LogicalBasis) -> f64 {
    let (p, m) = (basis.norms.plus, basis.norms.minus);
    (p - m).abs() / p.min(m)
}

/// `⟨ζ,f|(a + a†)|ζ,f⟩` from the undeformed quadrature matrix.
pub fn separation_matrix(zeta: f64, spec: &DeformationSpec, space: FockSpace) -> Result<f64> {
    let psi = coherent_coefficients(zeta, spec, space)?;
    let ops = ladder_matrices(space);
    let quadrature = &ops.annihilation + &ops.creation;
    Ok(psi.expectation(&quadrature)?.re)
}

/// The same expectation as an explicit series over number states,
/// `N² Σ ζⁿ/√[n]! (√n ζⁿ⁻¹/√[n−1]! + √(n+1) ζⁿ⁺¹/√[n+1]!)`, truncated at `n_max`.
pub fn separation_series(zeta: f64, spec: &DeformationSpec, space: FockSpace) -> Result<f64> {
    let norms = analytic_norms(zeta, spec, space)?;
    if zeta == 0.0 {
        return Ok(0.0);
    }
    let table = deformed_factorial_log(spec, space)?;
    let ln_z = zeta.abs().ln();
    let n_max = space.n_max();
    let mut sum = 0.0;
    for n in 0..=n_max {
        if n >= 1 {
            let ln_term = (2 * n - 1) as f64 * ln_z - 0.5 * (table.ln(n) + table.ln(n - 1));
            sum += (n as f64).sqrt() * ln_term.exp();
        }
        if n < n_max {
            let ln_term = (2 * n + 1) as f64 * ln_z - 0.5 * (table.ln(n) + table.ln(n + 1));
            sum += ((n + 1) as f64).sqrt() * ln_term.exp();
        }
    }
    // Every term carries an odd power of ζ.
    Ok(zeta.signum() * norms.single * norms.single * sum)
}

/// Separation `d`, computed by both routes and required to agree within `1e-10`.
pub fn separation_d(zeta: f64, spec: &DeformationSpec, space: FockSpace) -> Result<f64> {
    let direct = separation_matrix(zeta, spec, space)?;
    let series = separation_series(zeta, spec, space)?;
    cross_check("separation d matrix vs series", direct, series)?;
    Ok(direct)
}

/// `Δ` and `d` for one point.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CatDiagnostics {
    pub delta: f64,
    pub separation: f64,
}

pub fn diagnostics(zeta: f64, spec: &DeformationSpec, space: FockSpace) -> Result<CatDiagnostics> {
    let basis = build_logical_basis(zeta, spec, space)?;
    Ok(CatDiagnostics {
        delta: delta(&basis),
        separation: separation_d(zeta, spec, space)?,
    })
}

/// `ζⁿ ± (−ζ)ⁿ` as `(sign, ln|value|)`, or `None` off the cat's parity.
pub(crate) fn cat_factor(zeta: f64, n: usize, which: CatParity) -> Option<(f64, f64)> {
    if !which.contains(n) {
        return None;
    }
    let sign = if zeta < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    // ζⁿ (1 ± (−1)ⁿ): the bracket is 2 on the cat's own parity.
    Some((sign, std::f64::consts::LN_2 + n as f64 * zeta.abs().ln()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_space() -> FockSpace {
        FockSpace::new(64).unwrap()
    }

    fn closed_form_norms(z2: f64) -> (f64, f64) {
        let e = (-2.0 * z2).exp();
        ((2.0 * (1.0 + e)).powf(-0.5), (2.0 * (1.0 - e)).powf(-0.5))
    }

    #[test]
    fn undeformed_plus_normalization() {
        let b =
            build_logical_basis(3f64.sqrt(), &DeformationSpec::Identity, default_space()).unwrap();
        let (p, m) = closed_form_norms(3.0);
        assert!((b.norm_plus() - p).abs() < 1e-12);
        assert!((b.norm_minus() - m).abs() < 1e-12);
        assert!((b.norm_plus() - 0.706232).abs() < 1e-6);
    }

    #[test]
    fn kets_are_orthogonal_and_parity_pure() {
        for spec in [
            DeformationSpec::Identity,
            DeformationSpec::Laguerre { xi: 0.13 },
        ] {
            let b = build_logical_basis(3f64.sqrt(), &spec, default_space()).unwrap();
            assert_eq!(b.ket0.inner(&b.ket1).unwrap(), C64::new(0.0, 0.0));
            for n in 0..=64 {
                if n % 2 == 1 {
                    assert_eq!(b.ket0.amplitudes()[n], C64::new(0.0, 0.0));
                } else {
                    assert_eq!(b.ket1.amplitudes()[n], C64::new(0.0, 0.0));
                }
            }
            assert!((b.ket0.norm_sq() - 1.0).abs() < 1e-10);
            assert!((b.ket1.norm_sq() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_amplitude_rejected() {
        assert!(build_logical_basis(0.0, &DeformationSpec::Identity, default_space()).is_err());
    }

    #[test]
    fn laguerre_at_zero_reproduces_identity_basis() {
        let s = default_space();
        let z = 3f64.sqrt();
        let a = build_logical_basis(z, &DeformationSpec::Identity, s).unwrap();
        let b = build_logical_basis(z, &DeformationSpec::Laguerre { xi: 0.0 }, s).unwrap();
        assert!(a.ket0.distance(&b.ket0).unwrap() < 1e-12);
        assert!(a.ket1.distance(&b.ket1).unwrap() < 1e-12);
        assert!((delta(&a) - delta(&b)).abs() < 1e-12);
    }

    #[test]
    fn delta_closed_forms() {
        let s = default_space();
        let b = build_logical_basis(3f64.sqrt(), &DeformationSpec::Identity, s).unwrap();
        let (p, m) = closed_form_norms(3.0);
        let want = (p - m).abs() / p.min(m);
        assert!((delta(&b) - want).abs() < 1e-12);
        assert!((delta(&b) - 2.48e-3).abs() < 1e-5);

        let b = build_logical_basis(10f64.sqrt(), &DeformationSpec::Identity, s).unwrap();
        assert!(delta(&b) < 1e-8);
    }

    #[test]
    fn undeformed_separation_is_twice_zeta() {
        let s = default_space();
        let z = 3f64.sqrt();
        let d = separation_d(z, &DeformationSpec::Identity, s).unwrap();
        assert!((d - 2.0 * z).abs() < 1e-10);
        let d0 = separation_d(z, &DeformationSpec::Laguerre { xi: 0.0 }, s).unwrap();
        assert!((d0 - 2.0 * z).abs() < 1e-10);
    }

    #[test]
    fn separation_paths_agree_for_negative_zeta() {
        let s = default_space();
        let spec = DeformationSpec::Laguerre { xi: 0.1 };
        let a = separation_matrix(-1.5, &spec, s).unwrap();
        let b = separation_series(-1.5, &spec, s).unwrap();
        assert!((a - b).abs() < 1e-10);
        assert!(a < 0.0);
    }
}
