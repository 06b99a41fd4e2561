//! Exact Gaussian dynamics of two harmonic oscillators that interact only
//! through a finite, edge-pinned harmonic chain.
//!
//! The crate is `no_std` + `alloc`. It builds the quadratic Hamiltonians for
//! the supported attachment geometries, diagonalizes them once, and evolves
//! covariance matrices with the closed-form normal-mode propagator. On top of
//! that sit the two-mode entanglement measures and the spectral-density tools
//! used to tune the oscillators onto a zero of the bath spectrum.
//!
//! Units are natural throughout: `ħ = k_B = M = Ω₀ = a = 1` after scaling, so
//! frequencies are in units of `Ω₀`, times in `1/Ω₀`, temperatures in
//! `ħΩ₀/k_B` and stiffnesses in `MΩ₀²`.
#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod entanglement;
pub mod error;
pub mod gaussian;
mod math;
pub mod model;
pub mod spectral;

pub use entanglement::{
    analyze_window, classify_extrema, classify_phase, log_negativity, sample_times,
    squeezing_witness, symplectic_eigenvalues, CollectiveMoments, EntanglementTrace,
    LogNegativity, PhaseLabel, TwoModeCovariance, Witness,
};
pub use error::{Error, Result};
pub use gaussian::{
    diagonalize, initial_covariance, mean_energy, propagate, reduced_propagator_rows,
    reduced_system_covariance, CovarianceMatrix, InitialState, NormalModes, SystemEvolution,
    ThermalBath, TimeKernel,
};
pub use model::{
    build_bath, build_coupled, build_uncoupled, derived_quantities, pm_transform, Attachment,
    Coord, DerivedQuantities, ModelParams, PmSplit, QuadraticModel,
};
pub use spectral::{
    calibrate_site, closed_form_zeros, effective_bath, effective_bath_modes,
    epsilon_for_frequency, locate_zeros_numeric, locate_zeros_with_floor, ohmic_fit,
    spectral_density, tune_epsilon, Branch, EffectiveBath, OhmicFit, SiteCalibration,
    SpectralDensity, SpectralLine, ZeroSearch, ZeroSet, OHMIC_MIN_MODES, ZERO_FLOOR,
};
