//! Normal modes, Gaussian initial states and exact covariance propagation.
//!
//! Covariances live in mass-weighted coordinates `q = √m x`, `π = p/√m`,
//! ordered as all positions followed by all momenta. In natural units these
//! coincide with the dimensionless variables `X' = X/α`, `P' = Pα/ħ` for the
//! oscillators, and with the analogous scaling for each chain particle.

mod evolve;
mod modes;
mod reduced;
mod state;

pub use evolve::{mean_energy, propagate, reduced_propagator_rows, symplectic_matrix};
pub use modes::{diagonalize, NormalModes};
pub use reduced::{SystemEvolution, TimeKernel};
pub use state::{
    initial_covariance, reduced_system_covariance, thermal_covariance, CovarianceMatrix,
    InitialState, ThermalBath,
};
