//! Jaynes–Cummings model with generalized-uncertainty-principle corrections
//! to the field operators.
//!
//! Units: H/ħ in rad/s, time in seconds, γ in J^{-1/2}. The field space is
//! truncated at `ncut`; atom⊗field vectors are laid out as the ground block
//! (indices 0..=ncut) followed by the excited block.
//!
//! - [`fock`]: truncated Fock space, ladder operators, coherent and
//!   photon-added coherent states.
//! - [`gup`]: GUP coefficients and the modified Hamiltonians.
//! - [`dynamics`]: resonant solution and corrected Rabi frequency.
//! - [`dispersive`]: large-detuning effective dynamics.
//! - [`wigner`]: Wigner functions and difference maps.
//! - [`rwa`]: first-order amplitudes and RWA-validity ratios.

pub mod constants;
pub mod dispersive;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod gup;
pub mod integrate;
pub mod linalg;
pub mod rwa;
pub mod wigner;

pub use error::{Error, Result};
pub use fock::{Atom, AtomFieldState, FockVector, OperatorMatrix, C64};
pub use gup::{derive_coefficients, GupCoefficients, GupParams, InteractionConfig};

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
