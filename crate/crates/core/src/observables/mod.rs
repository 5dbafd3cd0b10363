//! Diagnostics of the motional state: number statistics, quadrature
//! squeezing and phase-space quasiprobabilities.

mod distribution;
mod phase_space;
mod quadrature;

pub use distribution::{mean_number, number_distribution, parity_at_origin};
pub use phase_space::{
    default_workspace, displace, q_function, q_row, q_value, wigner_function, wigner_function_with, wigner_row,
    wigner_value, workspace_for_grid, GridKind, GridSpec, PhaseSpaceGrid, DEFAULT_POINTS, LEAKAGE_TOLERANCE,
};
pub use quadrature::{
    ground_variance, quadrature_variance, squeezing_parameter, squeezing_scan, Quadrature, SqueezeScan,
};
