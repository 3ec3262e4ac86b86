//! Thermodynamics and quantum phase transitions of the Plastino-Moszkowski
//! two-level SU(2) model.
//!
//! The Hamiltonian `H = E·J_z − λ(J² − J_z² − N/2)` is diagonal in the Dicke
//! basis, so every eigenenergy is an affine function of the coupling λ and
//! level crossings produce sharp ground-state changes. The crate locates those
//! crossings three ways: from the closed-form critical couplings, from the
//! finite-temperature peaks of `∂⟨E⟩/∂β`, and from the jumps of the
//! zero-temperature ground-state slope `dE_gs/dλ`.

pub mod cli;
pub mod eigensolver;
pub mod error;
pub mod model;
pub mod optimize;
pub mod spin_algebra;
pub mod thermo;
pub mod transitions;
pub mod validate;

pub use error::{Error, Result};
pub use model::{AffineLevel, CriticalPoint, ModelParams, Spectrum};
pub use spin_algebra::{Multiplet, OperatorMatrix};
pub use thermo::ThermalObservables;
