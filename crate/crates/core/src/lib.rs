//! Numerical model of a single ion held in a finite-range trap.
//!
//! The trap is a modified Pöschl–Teller well whose bound spectrum is that of an
//! f-deformed oscillator with `f²(n) = sqrt(1 + 1/N²) − n/N`. Under bichromatic
//! driving (carrier plus lower sideband) the motional steady state is a
//! nonlinear coherent state; this crate builds that state and the observables
//! used to characterise it (number distribution, quadrature squeezing, Husimi
//! and Wigner functions).
//!
//! Units: `ħ = ω = 1` throughout, the laser wave number is set to one, and the
//! interaction Hamiltonian is expressed in units of `ħΩ₁`.
//!
//! The crate is `no_std` (it needs `alloc`). IO, the command line and parallel
//! grid evaluation live in the `finitetrap` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod coupling;
pub mod error;
pub mod laguerre;
pub mod observables;
pub mod operator;
pub mod steady_state;
pub mod sum;
pub mod trap;
pub mod vibronic;

pub use num_complex::Complex64;

pub use coupling::{f_j, g_eta, h_n, laguerre_h, m_factor, DriveParams, SidebandSum};
pub use error::{Error, Result};
pub use observables::{
    number_distribution, q_function, quadrature_variance, squeezing_parameter, squeezing_scan, wigner_function,
    GridKind, GridSpec, PhaseSpaceGrid, Quadrature, SqueezeScan,
};
pub use operator::{build_ladder, build_position, OperatorMatrix};
pub use steady_state::{
    build_nlcs, chi_of, solve_steady_state, solve_steady_state_with, MotionalState, SteadyStateOptions,
};
pub use trap::{
    deformation_f2, energy_deformed, energy_mpt, transition_frequency, truncation_level, PhysicalTrap, TrapParams,
};
pub use vibronic::{
    build_interaction_hamiltonian, build_interaction_hamiltonian_dim, commutator_norm, stationarity_residual,
    stationarity_residual_with, Internal, VibronicState,
};
