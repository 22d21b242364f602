//! Noisy qubit channels as affine maps of the Bloch ball, and the optimal
//! one-classical-bit-assisted recovery of a depolarized qubit.
//!
//! Alice knows the pure state she sends through a depolarizing channel and
//! may add one noiseless classical bit: which of two caps of the Bloch
//! sphere the state lies in. Bob then applies an amplitude-damping recovery
//! that pulls toward that cap's pole. The crate evaluates such schemes
//! exactly and by Monte Carlo, optimizes the cap angle and damping strengths,
//! and locates the jump in the optimal cap angle as the noise varies.
//!
//! ```
//! use cbit_recovery::{optimize_at_alpha, analytic_low_alpha_fidelity, DEFAULT_BETA_GRID};
//!
//! let best = optimize_at_alpha(0.5, DEFAULT_BETA_GRID).unwrap();
//! assert!((best.f_bar - analytic_low_alpha_fidelity(0.5).unwrap()).abs() < 1e-12);
//! assert!((best.k_opt - 0.75).abs() < 1e-12);
//! ```

pub mod bloch;
pub mod channel;
pub mod eigen;
pub mod error;
pub mod experiment;
pub mod fidelity;
pub mod numerics;
pub mod optimizer;

pub use bloch::{
    bloch_to_density, density_to_bloch, fidelity_pure_vs_mixed, sample_uniform_sphere,
    BlochVector, DensityMatrix,
};
pub use channel::{
    amplitude_damping_channel, apply, check_necessary_conditions, choi_eigenvalues, choi_matrix,
    compose, contracts_ball, depolarizing_channel, is_completely_positive, max_output_norm,
    AffineQubitChannel, DiagonalChannelParams, Pole, PSD_TOLERANCE,
};
pub use error::{Error, Result};
pub use fidelity::{
    average_fidelity_closed_form, average_fidelity_monte_carlo, average_fidelity_quadrature,
    classical_only_fidelity, gisin_reference_fidelity, no_op_fidelity, Cap, CapPartition,
    GeneralScheme, McEstimate, SchemeConfig,
};
pub use optimizer::{
    analytic_low_alpha_fidelity, locate_kink, optimal_k_cap, optimize_at_alpha, sweep_alpha,
    Branch, Kink, OptimizationResult, SweepRow, DEFAULT_BETA_GRID,
};
