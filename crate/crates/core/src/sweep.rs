//! Grids over the L-deformation parameter `ξ` at fixed `ζ`.

use rayon::prelude::*;

use crate::cat::{diagnostics, CatDiagnostics};
use crate::deformation::{validate_on_space, DeformationSpec, Validity};
use crate::error::{Error, InvalidReason, Result};
use crate::fock::FockSpace;

/// `Δ` bound used when picking the deformation with the smallest separation.
pub const XI_STAR_DELTA_MAX: f64 = 0.01;

/// Uniform grid `min..=max` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        let g = Self { min, max, count };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 || self.max <= self.min || !self.min.is_finite() || !self.max.is_finite()
        {
            return Err(Error::InvalidParameter(format!(
                "grid must be strictly increasing with at least 2 points (min={}, max={}, count={})",
                self.min, self.max, self.count
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PointOutcome {
    Valid(CatDiagnostics),
    /// Deformation rejected on the space; `n` is the first failing level.
    Invalid {
        n: usize,
        reason: InvalidReason,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SweepPoint {
    pub spec: DeformationSpec,
    pub outcome: PointOutcome,
}

impl SweepPoint {
    pub fn diagnostics(&self) -> Option<CatDiagnostics> {
        match self.outcome {
            PointOutcome::Valid(d) => Some(d),
            PointOutcome::Invalid { .. } => None,
        }
    }
}

/// Smallest-separation deformation with `Δ < XI_STAR_DELTA_MAX`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct XiStar {
    pub xi: f64,
    pub delta: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SweepResult {
    pub zeta: f64,
    /// Undeformed reference point.
    pub baseline: SweepPoint,
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn xi_star(&self) -> Option<XiStar> {
        self.points
            .iter()
            .filter_map(|p| Some((p.spec.xi()?, p.diagnostics()?)))
            .filter(|(_, d)| d.delta < XI_STAR_DELTA_MAX)
            .min_by(|a, b| a.1.separation.total_cmp(&b.1.separation))
            .map(|(xi, d)| XiStar {
                xi,
                delta: d.delta,
                distance: d.separation,
            })
    }
}

fn evaluate(zeta: f64, spec: DeformationSpec, space: FockSpace) -> Result<SweepPoint> {
    let outcome = match validate_on_space(&spec, space) {
        Validity::Invalid { n, reason } => PointOutcome::Invalid { n, reason },
        Validity::Valid => PointOutcome::Valid(diagnostics(zeta, &spec, space)?),
    };
    Ok(SweepPoint { spec, outcome })
}

/// `Δ(ξ)` and `d(ξ)` for every `ξ` in `xis`, plus the undeformed baseline.
///
/// Deformations that fail on the space are flagged, not fatal; numerical
/// failures on valid points are.
pub fn xi_sweep(zeta: f64, space: FockSpace, xis: &[f64]) -> Result<SweepResult> {
    let baseline = evaluate(zeta, DeformationSpec::Identity, space)?;
    let points = xis
        .par_iter()
        .map(|&xi| evaluate(zeta, DeformationSpec::laguerre(xi)?, space))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        zeta,
        baseline,
        points,
    })
}
