//! Two-mode symplectic spectra, logarithmic negativity and the SD / SDR / NSD
//! taxonomy of the long-time entanglement.

use alloc::vec::Vec;
use core::fmt;

use nalgebra::{Matrix2, Matrix4};

use crate::error::{Error, Result};
use crate::gaussian::{reduced_propagator_rows, CovarianceMatrix, NormalModes};
use crate::math;
use crate::model::DerivedQuantities;

/// `4 × 4` covariance of two modes, ordered `(X'₁, P'₁, X'₂, P'₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCovariance(Matrix4<f64>);

impl TwoModeCovariance {
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        if !m.iter().all(|x| x.is_finite()) {
            return Err(Error::NonPhysical {
                detail: "covariance has non-finite entries".into(),
            });
        }
        let scale = m.amax().max(1.0);
        if (m - m.transpose()).amax() > 1e-9 * scale {
            return Err(Error::NonPhysical {
                detail: "two-mode covariance is not symmetric".into(),
            });
        }
        Ok(TwoModeCovariance((m + m.transpose()) * 0.5))
    }

    /// Builds from a dynamically sized `4 × 4` matrix.
    pub fn from_slice(data: &nalgebra::DMatrix<f64>) -> Result<Self> {
        if data.nrows() != 4 || data.ncols() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: data.nrows(),
            });
        }
        Self::new(Matrix4::from_fn(|i, j| data[(i, j)]))
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn block_a(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn block_b(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn block_c(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 2).into_owned()
    }

    /// `ΛVΛ` with `Λ = diag(1, 1, 1, -1)`.
    pub fn partial_transpose(&self) -> Self {
        let lambda = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
        TwoModeCovariance(lambda * self.0 * lambda)
    }

    /// Second moments of `X'± = (X'₁ ± X'₂)/√2` and `P'±`.
    pub fn collective(&self) -> CollectiveMoments {
        let v = &self.0;
        CollectiveMoments {
            dx_plus_sq: 0.5 * (v[(0, 0)] + v[(2, 2)] + 2.0 * v[(0, 2)]),
            dp_plus_sq: 0.5 * (v[(1, 1)] + v[(3, 3)] + 2.0 * v[(1, 3)]),
            dx_minus_sq: 0.5 * (v[(0, 0)] + v[(2, 2)] - 2.0 * v[(0, 2)]),
            dp_minus_sq: 0.5 * (v[(1, 1)] + v[(3, 3)] - 2.0 * v[(1, 3)]),
            xp_plus: 0.5 * (v[(0, 1)] + v[(0, 3)] + v[(2, 1)] + v[(2, 3)]),
            xp_minus: 0.5 * (v[(0, 1)] - v[(0, 3)] - v[(2, 1)] + v[(2, 3)]),
            cross: [
                0.5 * (v[(0, 0)] - v[(2, 2)]),
                0.5 * (v[(1, 1)] - v[(3, 3)]),
                0.5 * (v[(0, 1)] - v[(0, 3)] + v[(2, 1)] - v[(2, 3)]),
                0.5 * (v[(0, 1)] + v[(0, 3)] - v[(2, 1)] - v[(2, 3)]),
            ],
        }
    }
}

/// Centre-of-mass and relative second moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveMoments {
    pub dx_plus_sq: f64,
    pub dp_plus_sq: f64,
    pub dx_minus_sq: f64,
    pub dp_minus_sq: f64,
    /// `½⟨X₊P₊ + P₊X₊⟩`.
    pub xp_plus: f64,
    /// `½⟨X₋P₋ + P₋X₋⟩`.
    pub xp_minus: f64,
    /// Covariances between COM and relative variables:
    /// `(X₊,X₋)`, `(P₊,P₋)`, `(X₊,P₋)`, `(X₋,P₊)`.
    pub cross: [f64; 4],
}

impl CollectiveMoments {
    pub fn max_cross(&self) -> f64 {
        self.cross.iter().fold(0.0, |m, &c| m.max(math::abs(c)))
    }
}

/// Rounding allowance below `1/2` for the smallest symplectic eigenvalue. A
/// pure state has a double root, where `√(Δ² - 4 det V)` turns `1e-16`
/// noise into `1e-8`.
const PHYSICAL_SLACK: f64 = 1e-6;

fn det2(m: &Matrix2<f64>) -> f64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// `(ν₋, ν₊)` from the seralian `Δ = det A + det B + 2 det C`.
fn symplectic_pair(delta: f64, det: f64) -> Result<(f64, f64)> {
    if !(det > 0.0) {
        return Err(Error::NonPhysical {
            detail: alloc::format!("determinant {det:e} is not positive"),
        });
    }
    let mut disc = delta * delta - 4.0 * det;
    if disc < 0.0 {
        if disc < -1e-10 * (delta * delta).max(1.0) {
            return Err(Error::NonPhysical {
                detail: alloc::format!("Δ² - 4 det V = {disc:e}"),
            });
        }
        disc = 0.0;
    }
    let big = 0.5 * (delta + math::sqrt(disc));
    if !(big > 0.0) {
        return Err(Error::NonPhysical {
            detail: alloc::format!("Δ = {delta:e} is not positive"),
        });
    }
    // ν₋² ν₊² = det V avoids the cancellation in (Δ - √disc)/2.
    let small = det / big;
    Ok((math::sqrt(small), math::sqrt(big)))
}

/// Symplectic eigenvalues `ν₋ <= ν₊` of a two-mode covariance.
pub fn symplectic_eigenvalues(v: &TwoModeCovariance) -> Result<(f64, f64)> {
    let delta = det2(&v.block_a()) + det2(&v.block_b()) + 2.0 * det2(&v.block_c());
    symplectic_pair(delta, v.0.determinant())
}

/// Logarithmic negativity, clamped and signed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogNegativity {
    /// `E_N = max(0, -ln 2ν̃₋)`.
    pub value: f64,
    /// `ℰ_N = -ln 2ν̃₋`; its sign drives the phase classification.
    pub unclamped: f64,
    /// Smallest symplectic eigenvalue of the partial transpose.
    pub nu_tilde: f64,
}

/// `E_N` from the smallest symplectic eigenvalue of `ΛVΛ`.
///
/// Returns [`Error::NonPhysical`] if `V` itself violates the uncertainty
/// relation by more than `1e-9`.
pub fn log_negativity(v: &TwoModeCovariance) -> Result<LogNegativity> {
    let (nu_minus, _) = symplectic_eigenvalues(v)?;
    if nu_minus < 0.5 - PHYSICAL_SLACK {
        return Err(Error::NonPhysical {
            detail: alloc::format!("smallest symplectic eigenvalue {nu_minus} < 1/2"),
        });
    }
    let delta_pt = det2(&v.block_a()) + det2(&v.block_b()) - 2.0 * det2(&v.block_c());
    let (nu_tilde, _) = symplectic_pair(delta_pt, v.0.determinant())?;
    let unclamped = -math::ln(2.0 * nu_tilde);
    Ok(LogNegativity {
        value: unclamped.max(0.0),
        unclamped,
        nu_tilde,
    })
}

/// `ℰ_N(t)` sampled over an analysis window.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementTrace {
    times: Vec<f64>,
    values: Vec<f64>,
    min: f64,
    max: f64,
}

impl EntanglementTrace {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.is_empty() || times.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: times.len().max(1),
                found: values.len(),
            });
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(EntanglementTrace {
            times,
            values,
            min,
            max,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Unclamped `ℰ_N` at each sample.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    /// Window mean of the clamped `E_N`.
    pub fn mean_clamped(&self) -> f64 {
        self.values.iter().map(|v| v.max(0.0)).sum::<f64>() / self.values.len() as f64
    }
}

/// Uniform grid of `samples` instants covering `[start, end]`.
pub fn sample_times(start: f64, end: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => alloc::vec![start],
        _ => (0..samples)
            .map(|i| start + (end - start) * i as f64 / (samples - 1) as f64)
            .collect(),
    }
}

/// Samples `ℰ_N` of the two oscillators on `[window.0, window.1]`.
///
/// Rejects windows that reach `t_rev`, where the finite chain stops behaving
/// like an infinite reservoir.
pub fn analyze_window(
    modes: &NormalModes,
    v0: &CovarianceMatrix,
    window: (f64, f64),
    samples: usize,
    t_rev: f64,
) -> Result<EntanglementTrace> {
    let (start, end) = window;
    if !(start >= 0.0 && end >= start) {
        return Err(Error::invalid("window", "need 0 <= start <= end"));
    }
    if end >= t_rev {
        return Err(Error::WindowBeyondRevival { end, t_rev });
    }
    if samples == 0 {
        return Err(Error::invalid("samples", "need at least one sample"));
    }
    if modes.dim() != v0.dim() {
        return Err(Error::DimensionMismatch {
            expected: modes.dim(),
            found: v0.dim(),
        });
    }
    let times = sample_times(start, end, samples);
    let mut values = Vec::with_capacity(samples);
    for &t in &times {
        let rows = reduced_propagator_rows(modes, t)?;
        let sys = &rows * v0.data() * rows.transpose();
        let v = TwoModeCovariance::from_slice(&sys)?;
        values.push(log_negativity(&v)?.unclamped);
    }
    EntanglementTrace::new(times, values)
}

/// Long-time entanglement phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PhaseLabel {
    /// Sudden death: `ℰ_N^max < 0`.
    SD,
    /// Sudden death and revival: `ℰ_N^min < 0 < ℰ_N^max`.
    SDR,
    /// No sudden death: `ℰ_N^min > 0`.
    NSD,
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseLabel::SD => "SD",
            PhaseLabel::SDR => "SDR",
            PhaseLabel::NSD => "NSD",
        })
    }
}

/// SD if `max < -tol`, NSD if `min > tol`, SDR otherwise.
pub fn classify_phase(trace: &EntanglementTrace, tol: f64) -> PhaseLabel {
    classify_extrema(trace.min, trace.max, tol)
}

pub fn classify_extrema(min: f64, max: f64, tol: f64) -> PhaseLabel {
    if max < -tol {
        PhaseLabel::SD
    } else if min > tol {
        PhaseLabel::NSD
    } else {
        PhaseLabel::SDR
    }
}

/// Outcome of the two long-time two-mode-squeezing inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    /// `ΔX'₊² < e^{2|r - r_S|} / (2η)`.
    pub ineq_i: bool,
    /// `ΔP'₊² < (η/2) e^{-2|r - r_S|}`.
    pub ineq_ii: bool,
}

impl Witness {
    pub fn entangled(&self) -> bool {
        self.ineq_i || self.ineq_ii
    }
}

/// Evaluates both inequalities with the stationary centre-of-mass widths.
pub fn squeezing_witness(
    dx_plus_sq: f64,
    dp_plus_sq: f64,
    r: f64,
    derived: &DerivedQuantities,
) -> Witness {
    let eta = derived.eta;
    let g = math::exp(2.0 * math::abs(r - derived.r_s));
    Witness {
        ineq_i: dx_plus_sq < g / (2.0 * eta),
        ineq_ii: dp_plus_sq < 0.5 * eta / g,
    }
}
