//! Open-system dynamics of a qutrit-qubit pair whose qubit couples to a
//! massless, conformally coupled scalar field in de Sitter alpha-vacua.
//!
//! The crate provides:
//!
//! - dense complex linear algebra and entropy primitives for small Hermitian
//!   matrices ([`matrix`], [`density`]);
//! - the alpha-vacuum field power spectrum and the induced dissipator
//!   coefficients `A`, `B`, with the Bunch-Davies limit as an exact variant
//!   ([`bath`]);
//! - the lifted Lindblad generator, a fixed-step RK4 and adaptive RK45
//!   integrator, the closed-form trajectory of the one-parameter initial
//!   family, equilibrium states, and the weak-measurement-reversal filter
//!   ([`dynamics`]);
//! - quantum-memory-assisted entropic uncertainty (`L` and its bound `R`),
//!   negativity, and mixedness ([`measures`]).
//!
//! Everything is a pure function of its inputs; values are freely copyable
//! and safe to use from multiple threads.

pub mod bath;
pub mod density;
pub mod dynamics;
pub mod error;
pub mod matrix;
pub mod measures;

/// The complex scalar used throughout the public API.
pub use num_complex::Complex64;

pub use bath::{
    bath_coefficients, gibbons_hawking_temperature, power_spectrum, BathCoefficients, BathParams,
    Vacuum,
};
pub use density::{BipartiteDims, DensityMatrix};
pub use dynamics::{
    equilibrium_reduced_v, equilibrium_state, equilibrium_tau, evolve_closed_form, evolve_numeric,
    initial_state, lindblad_rhs, rk4_policy_steps, thermal_state_v, weak_measurement_reversal,
    EvolutionConfig, InitialFamily, Integrator, KossakowskiMatrix, LindbladGenerator, Trajectory,
};
pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, DEFAULT_TOLERANCE};
pub use measures::{
    conditional_entropy, entropic_bound_r, entropic_uncertainty_l, mixedness,
    mixedness_closed_form, negativity, overlap_c, post_measurement_state, qutrit_sigma_x,
    qutrit_sigma_z, Observable, UncertaintyReport,
};
