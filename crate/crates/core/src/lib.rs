//! Qubits encoded in even/odd cat states of an f-deformed boson, their decay
//! under zero-temperature amplitude damping, and the logical gates acting on
//! them.
//!
//! All numerics happen on a truncated Fock space `{|0⟩, …, |n_max⟩}` with dense
//! complex matrices.

pub mod cat;
pub mod channel;
pub mod deformation;
pub mod error;
pub mod fock;
pub mod gates;
pub mod sweep;

pub use cat::{build_logical_basis, delta, separation_d, CatDiagnostics, CatParity, LogicalBasis};
pub use channel::{
    apply_channel, fidelity_curve, fidelity_direct, fidelity_series, kraus_set, DampingPoint,
    FidelityCurve, FidelityRow, KrausSet,
};
pub use deformation::{DeformationSpec, Validity};
pub use error::{Error, InvalidReason, Result};
pub use fock::{DensityMatrix, FockSpace, FockVector, TwoModeVector, C64};
pub use gates::{CpsParams, LogicalAction, RotationParams};
pub use sweep::{xi_sweep, SweepPoint, SweepResult};
