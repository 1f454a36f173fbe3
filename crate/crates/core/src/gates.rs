//! Logical gates on the cat-encoded qubit.
//!
//! Single-qubit rotations come from the driving term `H_R = β(A† + A)` (real β).
//! [`rotation_exact`] diagonalizes `H_R`; [`rotation_split`] is the first-order
//! product `exp(−iβtA†) exp(−iβtA)`, which is not exactly unitary because `A`
//! and `A†` do not commute. The two-qubit gate is the conditional phase shift
//! `exp(−iχt n̂_a n̂_b)`.

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};

use crate::cat::{CatParity, LogicalBasis};
use crate::deformation::{deformed_annihilation, DeformationSpec};
use crate::error::{Error, Result};
use crate::fock::{max_abs, tensor, CMatrix, CVector, FockSpace, FockVector, TwoModeVector, C64};

/// Drive strength, duration and the resulting logical angle `θ = 2ζβt`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RotationParams {
    pub beta: f64,
    pub t: f64,
    pub theta: f64,
}

impl RotationParams {
    pub fn new(beta: f64, t: f64, zeta: f64) -> Result<Self> {
        if !beta.is_finite() || !zeta.is_finite() || t.is_nan() || t < 0.0 || t.is_infinite() {
            return Err(Error::InvalidParameter(format!(
                "rotation needs finite beta, zeta and t >= 0 (beta={beta}, t={t}, zeta={zeta})"
            )));
        }
        Ok(Self {
            beta,
            t,
            theta: 2.0 * zeta * beta * t,
        })
    }

    /// Chooses `|β| = 1` and the time that produces `theta`.
    pub fn from_theta(theta: f64, zeta: f64) -> Result<Self> {
        if zeta == 0.0 || !zeta.is_finite() || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "cannot reach theta={theta} with zeta={zeta}"
            )));
        }
        let beta = if theta < 0.0 {
            -zeta.signum()
        } else {
            zeta.signum()
        };
        let t = theta.abs() / (2.0 * zeta.abs());
        Ok(Self { beta, t, theta })
    }

    pub fn beta_t(&self) -> f64 {
        self.beta * self.t
    }
}

const TAYLOR_TERM_TOL: f64 = 1e-16;
const MAX_TAYLOR_TERMS: usize = 200;

fn one_norm(x: &CMatrix) -> f64 {
    x.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring around a Taylor series.
pub fn expm(x: &CMatrix) -> CMatrix {
    let dim = x.nrows();
    let norm = one_norm(x);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = x * C64::new(0.5f64.powi(squarings), 0.0);
    let mut sum = CMatrix::identity(dim, dim);
    let mut term = CMatrix::identity(dim, dim);
    for k in 1..MAX_TAYLOR_TERMS {
        term = &term * &scaled * C64::new(1.0 / k as f64, 0.0);
        sum += &term;
        if max_abs(term.iter()) < TAYLOR_TERM_TOL {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Real symmetric matrix of `H_R = β(A† + A)`.
pub fn driving_hamiltonian(
    beta: f64,
    spec: &DeformationSpec,
    space: FockSpace,
) -> Result<DMatrix<f64>> {
    let a = deformed_annihilation(spec, space)?;
    let dim = space.dim();
    Ok(DMatrix::from_fn(dim, dim, |i, j| {
        beta * (a[(i, j)].re + a[(j, i)].re)
    }))
}

/// `exp(−iβtA†) · exp(−iβtA)`.
pub fn rotation_split(
    params: &RotationParams,
    spec: &DeformationSpec,
    space: FockSpace,
) -> Result<CMatrix> {
    let a = deformed_annihilation(spec, space)?;
    let factor = C64::new(0.0, -params.beta_t());
    let raise = expm(&(a.adjoint() * factor));
    let lower = expm(&(a * factor));
    Ok(raise * lower)
}

/// `exp(−iH_R t)` from the eigendecomposition of `H_R`.
pub fn rotation_exact(
    params: &RotationParams,
    spec: &DeformationSpec,
    space: FockSpace,
) -> Result<CMatrix> {
    let h = driving_hamiltonian(params.beta, spec, space)?;
    let eig = SymmetricEigen::new(h);
    let dim = space.dim();
    let vecs = eig.eigenvectors.map(|v| C64::new(v, 0.0));
    let phases = CVector::from_iterator(
        dim,
        eig.eigenvalues
            .iter()
            .map(|&l| C64::from_polar(1.0, -l * params.t)),
    );
    Ok(&vecs * CMatrix::from_diagonal(&phases) * vecs.adjoint())
}

/// `‖U†U − I‖_max`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let dim = u.nrows();
    max_abs((u.adjoint() * u - CMatrix::identity(dim, dim)).iter())
}

/// Projection of an operator onto `span{|0̄⟩, |1̄⟩}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogicalAction {
    /// `M_ij = ⟨ī|U|j̄⟩`.
    pub matrix: Matrix2<C64>,
    /// `1 − Σ_ij |M_ij|² / 2`.
    pub leakage: f64,
    /// `‖U|j̄⟩‖` for each logical input.
    pub output_norms: [f64; 2],
}

pub fn logical_action(u: &CMatrix, basis: &LogicalBasis) -> Result<LogicalAction> {
    let kets = [&basis.ket0, &basis.ket1];
    let mut matrix = Matrix2::zeros();
    let mut output_norms = [0.0; 2];
    for (j, ket) in kets.iter().enumerate() {
        let image = ket.apply(u)?;
        output_norms[j] = image.norm_sq().sqrt();
        for (i, bra) in kets.iter().enumerate() {
            matrix[(i, j)] = bra.inner(&image)?;
        }
    }
    let weight: f64 = matrix.iter().map(|z| z.norm_sqr()).sum();
    Ok(LogicalAction {
        matrix,
        leakage: 1.0 - weight / 2.0,
        output_norms,
    })
}

/// `cos θ · I − i sin θ · σ_x`.
pub fn ideal_rotation(theta: f64) -> Matrix2<C64> {
    let c = C64::new(theta.cos(), 0.0);
    let s = C64::new(0.0, -theta.sin());
    Matrix2::new(c, s, s, c)
}

/// Largest `‖(U_a − U_b)|j̄⟩‖` over the two logical states.
pub fn logical_deviation(u_a: &CMatrix, u_b: &CMatrix, basis: &LogicalBasis) -> Result<f64> {
    let diff = u_a - u_b;
    CatParity::BOTH
        .iter()
        .map(|&w| Ok(basis.ket(w).apply(&diff)?.norm_sq().sqrt()))
        .try_fold(0.0, |acc: f64, d: Result<f64>| Ok(acc.max(d?)))
}

/// Interaction strength times duration for `H_CPS = χ a†a b†b`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CpsParams {
    pub chi_t: f64,
}

/// Multiplies the `(n, m)` amplitude by `exp(−iχt·n·m)`.
pub fn cps_apply(state: &TwoModeVector, params: CpsParams) -> TwoModeVector {
    state.map_amplitudes(|n, m, c| c * C64::from_polar(1.0, -params.chi_t * (n * m) as f64))
}

/// `⟨x̄ȳ|CPS|x̄ȳ⟩` for `xy ∈ {00, 01, 10, 11}`, plus how far each output is
/// from `phase · |x̄ȳ⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpsTruthTable {
    pub phases: [C64; 4],
    pub residuals: [f64; 4],
}

pub fn cps_truth_table(basis: &LogicalBasis, params: CpsParams) -> Result<CpsTruthTable> {
    let kets: [&FockVector; 2] = [&basis.ket0, &basis.ket1];
    let mut phases = [C64::new(0.0, 0.0); 4];
    let mut residuals = [0.0; 4];
    for x in 0..2 {
        for y in 0..2 {
            let input = tensor(kets[x], kets[y])?;
            let output = cps_apply(&input, params);
            let phase = input.inner(&output)?;
            let resid = (output.amplitudes() - input.amplitudes() * phase).norm();
            phases[2 * x + y] = phase;
            residuals[2 * x + y] = resid;
        }
    }
    Ok(CpsTruthTable { phases, residuals })
}
