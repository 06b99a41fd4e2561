use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use super::modes::NormalModes;
use crate::entanglement::TwoModeCovariance;
use crate::error::{Error, Result};
use crate::math;
use crate::model::{Coord, QuadraticModel};

/// Squeezing of both oscillators and temperature of the chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    /// Real squeezing parameter, identical for both oscillators.
    pub r: f64,
    /// Chain temperature in units of `ħΩ₀/k_B`.
    pub temperature: f64,
}

impl InitialState {
    pub fn new(r: f64, temperature: f64) -> Result<Self> {
        let state = InitialState { r, temperature };
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.r.is_finite() {
            return Err(Error::invalid("r", "must be finite"));
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::invalid(
                "T",
                alloc::format!("must be >= 0, got {}", self.temperature),
            ));
        }
        Ok(())
    }

    /// Dimensionless `(⟨X'²⟩, ⟨P'²⟩)` of one squeezed oscillator.
    pub fn system_variances(&self) -> (f64, f64) {
        (
            0.5 * math::exp(-2.0 * self.r),
            0.5 * math::exp(2.0 * self.r),
        )
    }
}

/// Thermal second moments of a set of normal modes:
/// `⟨Q²⟩ = coth(ω/2T)/(2ω)` and `⟨Π²⟩ = ω·coth(ω/2T)/2`.
#[derive(Debug, Clone)]
pub struct ThermalBath {
    temperature: f64,
    position: Vec<f64>,
    momentum: Vec<f64>,
}

impl ThermalBath {
    pub fn new(frequencies: &[f64], temperature: f64) -> Result<Self> {
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(Error::invalid(
                "T",
                alloc::format!("must be >= 0, got {temperature}"),
            ));
        }
        let occupation = |w: f64| {
            if temperature == 0.0 {
                1.0
            } else {
                math::coth(w / (2.0 * temperature))
            }
        };
        let position = frequencies
            .iter()
            .map(|&w| occupation(w) / (2.0 * w))
            .collect();
        let momentum = frequencies
            .iter()
            .map(|&w| 0.5 * w * occupation(w))
            .collect();
        Ok(ThermalBath {
            temperature,
            position,
            momentum,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn position(&self) -> &[f64] {
        &self.position
    }

    pub fn momentum(&self) -> &[f64] {
        &self.momentum
    }
}

/// Symmetric second-moment matrix of a zero-mean Gaussian state.
///
/// Ordering is `(q_1..q_n, π_1..π_n)` with `labels` naming the `n`
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    data: DMatrix<f64>,
    labels: Vec<Coord>,
}

impl CovarianceMatrix {
    pub fn new(data: DMatrix<f64>, labels: Vec<Coord>) -> Result<Self> {
        let n = labels.len();
        if data.nrows() != 2 * n || data.ncols() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                found: data.nrows(),
            });
        }
        let scale = data.amax().max(1.0);
        if (&data - data.transpose()).amax() > 1e-12 * scale {
            return Err(Error::NonPhysical {
                detail: "covariance is not symmetric".into(),
            });
        }
        Ok(CovarianceMatrix { data, labels })
    }

    pub(crate) fn from_raw(data: DMatrix<f64>, labels: Vec<Coord>) -> Self {
        CovarianceMatrix { data, labels }
    }

    /// Number of coordinates (half the matrix size).
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_data(self) -> DMatrix<f64> {
        self.data
    }

    pub fn labels(&self) -> &[Coord] {
        &self.labels
    }

    pub fn index_of(&self, coord: Coord) -> Option<usize> {
        self.labels.iter().position(|&c| c == coord)
    }

    /// Symplectic eigenvalues in ascending order.
    ///
    /// Uses that `V^{1/2} Ωᵀ V Ω V^{1/2}` is symmetric with eigenvalues `ν_k²`,
    /// each appearing twice. Requires `V` positive definite.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.dim();
        let eig = SymmetricEigen::new(self.data.clone());
        if let Some(bad) = eig.eigenvalues.iter().find(|&&l| !(l > 0.0)) {
            return Err(Error::NonPhysical {
                detail: alloc::format!("covariance has eigenvalue {bad:e}"),
            });
        }
        let mut root = eig.eigenvectors.clone();
        for (k, mut col) in root.column_iter_mut().enumerate() {
            col *= math::sqrt(math::sqrt(eig.eigenvalues[k]));
        }
        let sqrt_v = &root * root.transpose();
        // Ωᵀ V Ω for Ω = [[0, I], [-I, 0]] swaps and negates blocks.
        let v = &self.data;
        let w = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            let (bi, ii) = (i / n, i % n);
            let (bj, jj) = (j / n, j % n);
            let src_i = (1 - bi) * n + ii;
            let src_j = (1 - bj) * n + jj;
            let sign = if bi == bj { 1.0 } else { -1.0 };
            sign * v[(src_i, src_j)]
        });
        let m = &sqrt_v * w * &sqrt_v;
        let m = (&m + m.transpose()) * 0.5;
        let mut nu2: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        nu2.sort_by(f64::total_cmp);
        Ok(nu2
            .chunks(2)
            .map(|pair| math::sqrt(0.5 * (pair[0] + pair[1]).max(0.0)))
            .collect())
    }
}

/// Thermal covariance of the modes' Hamiltonian at temperature `T`, rotated
/// back to site coordinates.
pub fn thermal_covariance(modes: &NormalModes, temperature: f64) -> Result<CovarianceMatrix> {
    let thermal = ThermalBath::new(modes.frequencies(), temperature)?;
    let n = modes.dim();
    let o = modes.modes();
    let block = |weights: &[f64]| {
        let mut scaled = o.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= weights[k];
        }
        let b = scaled * o.transpose();
        (&b + b.transpose()) * 0.5
    };
    let qq = block(thermal.position());
    let pp = block(thermal.momentum());
    let mut data = DMatrix::zeros(2 * n, 2 * n);
    data.view_mut((0, 0), (n, n)).copy_from(&qq);
    data.view_mut((n, n), (n, n)).copy_from(&pp);
    Ok(CovarianceMatrix::from_raw(data, modes.labels().to_vec()))
}

/// Covariance at `t = 0`: squeezed vacua on the oscillators, a thermal state of
/// the uncoupled chain, no correlations between them.
///
/// `bath_modes` must diagonalize the chain block of `model_uncoupled` with
/// the same coordinate order.
pub fn initial_covariance(
    model_uncoupled: &QuadraticModel,
    state: &InitialState,
    bath_modes: &NormalModes,
) -> Result<CovarianceMatrix> {
    state.validate()?;
    let system = model_uncoupled.system_indices();
    let chain = model_uncoupled.chain_indices();
    if chain.len() != bath_modes.dim() {
        return Err(Error::DimensionMismatch {
            expected: chain.len(),
            found: bath_modes.dim(),
        });
    }
    if chain
        .iter()
        .zip(bath_modes.labels())
        .any(|(&i, &l)| model_uncoupled.labels()[i] != l)
    {
        return Err(Error::invalid(
            "bath_modes",
            "coordinate labels do not match the model's chain block",
        ));
    }
    let n = model_uncoupled.dim();
    let nb = chain.len();
    let mut data = DMatrix::zeros(2 * n, 2 * n);
    let (sq, sp) = state.system_variances();
    for &i in &system {
        data[(i, i)] = sq;
        data[(n + i, n + i)] = sp;
    }
    let thermal = thermal_covariance(bath_modes, state.temperature)?;
    let th = thermal.data();
    for (a, &i) in chain.iter().enumerate() {
        for (b, &j) in chain.iter().enumerate() {
            data[(i, j)] = th[(a, b)];
            data[(n + i, n + j)] = th[(nb + a, nb + b)];
        }
    }
    Ok(CovarianceMatrix::from_raw(
        data,
        model_uncoupled.labels().to_vec(),
    ))
}

/// Extracts the two oscillators in the interleaved order `(X₁, P₁, X₂, P₂)`.
pub fn reduced_system_covariance(v: &CovarianceMatrix) -> Result<TwoModeCovariance> {
    let i1 = v
        .index_of(Coord::System1)
        .ok_or(Error::UnsupportedGeometry("state has no oscillator 1"))?;
    let i2 = v
        .index_of(Coord::System2)
        .ok_or(Error::UnsupportedGeometry("state has no oscillator 2"))?;
    let n = v.dim();
    let idx = [i1, n + i1, i2, n + i2];
    let d = v.data();
    let m = nalgebra::Matrix4::from_fn(|a, b| d[(idx[a], idx[b])]);
    TwoModeCovariance::new(m)
}
