//! Photon statistics of a weakly driven cavity-QED system, with and without
//! quantized center-of-mass (COM) motion of the trapped atom.
//!
//! The library computes the mean intracavity photon number and the
//! second-order correlation function g²(0) / g²(τ) for two models:
//!
//! * the driven Jaynes–Cummings (JC) model — a two-level atom coupled to a
//!   single damped cavity mode, and
//! * the same system with the atom's COM motion quantized in a harmonic trap
//!   (phonon mode `b`, trap frequency ν), where the photon–atom exchange is
//!   mediated by a phonon and the blockade/tunneling structure moves from the
//!   cavity detuning axis onto the trap-frequency axis.
//!
//! Every observable is available through two independent routes that serve as
//! cross-checks on each other:
//!
//! 1. full Lindblad master-equation numerics (superoperator construction,
//!    steady states, time propagation, quantum regression), and
//! 2. weak-drive amplitude closed forms (few-excitation ansatz under the
//!    non-Hermitian damped Hamiltonian), valid for Ω ≪ κ.
//!
//! All rates and detunings are dimensionless, in units of the cavity
//! half-width κ (κ = 1 internally). The dissipator convention is
//! L[d]ρ = 2dρd† − d†dρ − ρd†d with the rate multiplying the whole
//! expression, so a bare cavity loses energy at rate 2κ.

extern crate blas_src;

pub mod analytic;
pub mod cli;
pub mod correlations;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod liouville;
pub mod models;
pub mod ode;
pub mod sweep;

/// Dense complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;

pub use error::Error;
pub use hilbert::{SpaceSpec, Subsystem};
pub use models::ModelParams;
