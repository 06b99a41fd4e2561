use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::math;
use crate::model::{Coord, QuadraticModel};

/// Eigen-decomposition of a mass-weighted stiffness matrix.
///
/// Columns of `modes` are orthonormal eigenvectors of `K̃ = M^{-1/2} K M^{-1/2}`
/// sorted by ascending frequency. Degenerate frequencies need no special
/// treatment since the propagator only depends on `ω`.
#[derive(Debug, Clone)]
pub struct NormalModes {
    frequencies: Vec<f64>,
    modes: DMatrix<f64>,
    mass_sqrt: Vec<f64>,
    labels: Vec<Coord>,
}

impl NormalModes {
    pub fn dim(&self) -> usize {
        self.frequencies.len()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn modes(&self) -> &DMatrix<f64> {
        &self.modes
    }

    pub fn mass_sqrt(&self) -> &[f64] {
        &self.mass_sqrt
    }

    pub fn labels(&self) -> &[Coord] {
        &self.labels
    }

    pub fn index_of(&self, coord: Coord) -> Option<usize> {
        self.labels.iter().position(|&c| c == coord)
    }

    /// Mean spacing between adjacent frequencies.
    pub fn mean_spacing(&self) -> f64 {
        let n = self.dim();
        if n < 2 {
            return 0.0;
        }
        (self.frequencies[n - 1] - self.frequencies[0]) / (n - 1) as f64
    }

    /// `O · diag(ω²) · Oᵀ`, i.e. the mass-weighted stiffness rebuilt from the
    /// decomposition.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut scaled = self.modes.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= self.frequencies[k] * self.frequencies[k];
        }
        scaled * self.modes.transpose()
    }
}

/// Diagonalizes the mass-weighted stiffness of `model`.
///
/// Fails with [`Error::NotPositiveDefinite`] if any squared frequency is not
/// strictly positive.
pub fn diagonalize(model: &QuadraticModel) -> Result<NormalModes> {
    let eigen = SymmetricEigen::new(model.mass_weighted_stiffness());
    let n = model.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[a].total_cmp(&eigen.eigenvalues[b]));
    if let Some(&lowest) = order.first() {
        let w2 = eigen.eigenvalues[lowest];
        if !(w2 > 0.0) {
            return Err(Error::NotPositiveDefinite { eigenvalue: w2 });
        }
    }
    let frequencies = order
        .iter()
        .map(|&k| math::sqrt(eigen.eigenvalues[k]))
        .collect();
    let modes = DMatrix::from_fn(n, n, |i, k| eigen.eigenvectors[(i, order[k])]);
    Ok(NormalModes {
        frequencies,
        modes,
        mass_sqrt: model.masses().iter().map(|&m| math::sqrt(m)).collect(),
        labels: model.labels().to_vec(),
    })
}
