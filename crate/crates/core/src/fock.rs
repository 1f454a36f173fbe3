//! Truncated Fock-space arithmetic.
//!
//! Everything is dense: a single mode has at most a few hundred levels and the
//! two-mode product space is only ever touched through state vectors.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Allowed deviation of `Σ|c_n|²` from one for a normalized state.
pub const NORM_TOL: f64 = 1e-10;
/// Entrywise Hermiticity tolerance for density matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Largest acceptable `|c_{n_max}|²` for a state produced on a truncated space.
pub const TAIL_TOL: f64 = 1e-12;

/// Largest entry modulus, `max |z|`.
pub fn max_abs<'a>(entries: impl IntoIterator<Item = &'a C64>) -> f64 {
    entries.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Number basis `{|0⟩, …, |n_max⟩}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct FockSpace {
    n_max: usize,
}

impl FockSpace {
    pub const DEFAULT_N_MAX: usize = 64;

    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidParameter("n_max must be at least 1".into()));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    fn check_same(&self, other: &FockSpace) -> Result<()> {
        if self != other {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

impl Default for FockSpace {
    fn default() -> Self {
        Self {
            n_max: Self::DEFAULT_N_MAX,
        }
    }
}

/// Complex amplitudes over a single-mode truncated number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    space: FockSpace,
    amps: CVector,
}

impl FockVector {
    pub fn from_amplitudes(space: FockSpace, amps: CVector) -> Result<Self> {
        if amps.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                left: space.dim(),
                right: amps.len(),
            });
        }
        Ok(Self { space, amps })
    }

    pub fn from_real(space: FockSpace, amps: &[f64]) -> Result<Self> {
        let amps = CVector::from_iterator(amps.len(), amps.iter().map(|&a| C64::new(a, 0.0)));
        Self::from_amplitudes(space, amps)
    }

    /// Number state `|n⟩`.
    pub fn basis(space: FockSpace, n: usize) -> Result<Self> {
        if n > space.n_max() {
            return Err(Error::InvalidParameter(format!(
                "number state |{n}⟩ outside space with n_max = {}",
                space.n_max()
            )));
        }
        let mut amps = CVector::zeros(space.dim());
        amps[n] = C64::new(1.0, 0.0);
        Ok(Self { space, amps })
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.norm_squared()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sq() - 1.0).abs() <= NORM_TOL
    }

    /// Population of the highest retained level, `|c_{n_max}|²`.
    pub fn tail_mass(&self) -> f64 {
        self.amps[self.space.n_max()].norm_sqr()
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sq().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm_sq: self.norm_sq(),
            });
        }
        Ok(Self {
            space: self.space,
            amps: &self.amps / C64::new(norm, 0.0),
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockVector) -> Result<C64> {
        self.space.check_same(&other.space)?;
        Ok(self.amps.dotc(&other.amps))
    }

    pub fn apply(&self, op: &CMatrix) -> Result<FockVector> {
        if op.ncols() != self.space.dim() || op.nrows() != self.space.dim() {
            return Err(Error::DimensionMismatch {
                left: self.space.dim(),
                right: op.ncols(),
            });
        }
        Ok(Self {
            space: self.space,
            amps: op * &self.amps,
        })
    }

    /// `⟨self|op|self⟩`.
    pub fn expectation(&self, op: &CMatrix) -> Result<C64> {
        let image = self.apply(op)?;
        Ok(self.amps.dotc(&image.amps))
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &FockVector) -> Result<f64> {
        self.space.check_same(&other.space)?;
        Ok((&self.amps - &other.amps).norm())
    }
}

/// Hermitian, unit-trace operator on a single-mode truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: FockSpace,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Wraps `mat`, checking shape, Hermiticity and unit trace.
    ///
    /// Positivity is not checked here.
    pub fn from_matrix(space: FockSpace, mat: CMatrix) -> Result<Self> {
        if mat.nrows() != space.dim() || mat.ncols() != space.dim() {
            return Err(Error::DimensionMismatch {
                left: space.dim(),
                right: mat.nrows().max(mat.ncols()),
            });
        }
        let dim = space.dim();
        for i in 0..dim {
            for j in 0..=i {
                let d = (mat[(i, j)] - mat[(j, i)].conj()).norm();
                if d > HERMITIAN_TOL {
                    return Err(Error::InvalidParameter(format!(
                        "matrix not Hermitian at ({i}, {j}): defect {d:e}"
                    )));
                }
            }
        }
        let rho = Self { space, mat };
        let tr = rho.trace();
        if (tr - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameter(format!("trace {tr} is not 1")));
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(space: FockSpace, mat: CMatrix) -> Self {
        debug_assert_eq!(mat.nrows(), space.dim());
        Self { space, mat }
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let dim = self.space.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..=i {
                worst = worst.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Undeformed ladder operators on a truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderOps {
    pub annihilation: CMatrix,
    pub creation: CMatrix,
    pub number: CMatrix,
}

/// `a` with `⟨n−1|a|n⟩ = √n`, its adjoint, and the diagonal number operator.
pub fn ladder_matrices(space: FockSpace) -> LadderOps {
    let dim = space.dim();
    let mut annihilation = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        annihilation[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    let creation = annihilation.adjoint();
    let number = CMatrix::from_diagonal(&CVector::from_iterator(
        dim,
        (0..dim).map(|n| C64::new(n as f64, 0.0)),
    ));
    LadderOps {
        annihilation,
        creation,
        number,
    }
}

/// `|ψ⟩⟨ψ|` for a normalized `ψ`.
pub fn outer(psi: &FockVector) -> Result<DensityMatrix> {
    if !psi.is_normalized() {
        return Err(Error::NotNormalized {
            norm_sq: psi.norm_sq(),
        });
    }
    let mat = &psi.amps * psi.amps.adjoint();
    Ok(DensityMatrix::from_matrix_unchecked(psi.space, mat))
}

/// `Re Tr(ρσ)`; the imaginary part must vanish to within `1e-10`.
pub fn trace_product(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.space.check_same(&sigma.space)?;
    let dim = rho.space.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..dim {
        for j in 0..dim {
            acc += rho.mat[(i, j)] * sigma.mat[(j, i)];
        }
    }
    if acc.im.abs() >= 1e-10 {
        return Err(Error::NonRealTrace { imag: acc.im });
    }
    Ok(acc.re)
}

/// Flat indexing `(n, m) ↔ n·(n_max+1) + m` of the two-mode product basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoModeIndex {
    dim: usize,
}

impl TwoModeIndex {
    pub fn new(space: FockSpace) -> Self {
        Self { dim: space.dim() }
    }

    pub fn len(&self) -> usize {
        self.dim * self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.dim == 0
    }

    pub fn flat(&self, n: usize, m: usize) -> usize {
        debug_assert!(n < self.dim && m < self.dim);
        n * self.dim + m
    }

    pub fn split(&self, index: usize) -> (usize, usize) {
        (index / self.dim, index % self.dim)
    }
}

/// State of two modes, each truncated at the same `n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeVector {
    mode_space: FockSpace,
    amps: CVector,
}

impl TwoModeVector {
    pub fn mode_space(&self) -> FockSpace {
        self.mode_space
    }

    pub fn index(&self) -> TwoModeIndex {
        TwoModeIndex::new(self.mode_space)
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn amplitude(&self, n: usize, m: usize) -> C64 {
        self.amps[self.index().flat(n, m)]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.norm_squared()
    }

    pub fn inner(&self, other: &TwoModeVector) -> Result<C64> {
        self.mode_space.check_same(&other.mode_space)?;
        Ok(self.amps.dotc(&other.amps))
    }

    pub(crate) fn map_amplitudes(&self, f: impl Fn(usize, usize, C64) -> C64) -> Self {
        let index = self.index();
        let amps = CVector::from_iterator(
            self.amps.len(),
            self.amps.iter().enumerate().map(|(i, &c)| {
                let (n, m) = index.split(i);
                f(n, m, c)
            }),
        );
        Self {
            mode_space: self.mode_space,
            amps,
        }
    }
}

/// `|ψ_A⟩ ⊗ |ψ_B⟩` with `c_{nm} = a_n b_m`.
pub fn tensor(a: &FockVector, b: &FockVector) -> Result<TwoModeVector> {
    a.space.check_same(&b.space)?;
    let index = TwoModeIndex::new(a.space);
    let amps = CVector::from_iterator(
        index.len(),
        (0..index.len()).map(|i| {
            let (n, m) = index.split(i);
            a.amps[n] * b.amps[m]
        }),
    );
    Ok(TwoModeVector {
        mode_space: a.space,
        amps,
    })
}
