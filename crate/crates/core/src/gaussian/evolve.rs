use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::modes::NormalModes;
use super::state::CovarianceMatrix;
use crate::error::{Error, Result};
use crate::math;
use crate::model::{Coord, QuadraticModel};

/// Per-mode propagator coefficients at time `t`: `cos(ωt) - 1`,
/// `sin(ωt)/ω` and `-ω sin(ωt)`.
///
/// `cos - 1` is written as `-2 sin²(ωt/2)` so that `S(0)` is exactly the
/// identity.
pub(crate) fn mode_coefficients(frequencies: &[f64], t: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut cm1 = Vec::with_capacity(frequencies.len());
    let mut sw = Vec::with_capacity(frequencies.len());
    let mut ws = Vec::with_capacity(frequencies.len());
    for &w in frequencies {
        let half = math::sin(0.5 * w * t);
        cm1.push(-2.0 * half * half);
        sw.push(t * math::sinc(w * t));
        ws.push(-w * math::sin(w * t));
    }
    (cm1, sw, ws)
}

fn conjugate_diag(o: &DMatrix<f64>, weights: &[f64]) -> DMatrix<f64> {
    let mut scaled = o.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col *= weights[k];
    }
    scaled * o.transpose()
}

/// Symplectic propagator `S(t)` in mass-weighted site coordinates, ordered
/// positions then momenta.
pub fn symplectic_matrix(modes: &NormalModes, t: f64) -> DMatrix<f64> {
    let n = modes.dim();
    let o = modes.modes();
    let (cm1, sw, ws) = mode_coefficients(modes.frequencies(), t);
    let a = conjugate_diag(o, &cm1) + DMatrix::<f64>::identity(n, n);
    let b = conjugate_diag(o, &sw);
    let c = conjugate_diag(o, &ws);
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    s.view_mut((0, 0), (n, n)).copy_from(&a);
    s.view_mut((0, n), (n, n)).copy_from(&b);
    s.view_mut((n, 0), (n, n)).copy_from(&c);
    s.view_mut((n, n), (n, n)).copy_from(&a);
    s
}

fn check_labels(modes: &NormalModes, v: &CovarianceMatrix) -> Result<()> {
    if modes.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: modes.dim(),
            found: v.dim(),
        });
    }
    if modes.labels() != v.labels() {
        return Err(Error::invalid(
            "V0",
            "coordinate labels differ from the model's",
        ));
    }
    Ok(())
}

/// `V(t) = S(t) V₀ S(t)ᵀ` under the Hamiltonian that `modes` diagonalizes.
pub fn propagate(modes: &NormalModes, v0: &CovarianceMatrix, t: f64) -> Result<CovarianceMatrix> {
    check_labels(modes, v0)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::invalid("t", "time must be finite and >= 0"));
    }
    let s = symplectic_matrix(modes, t);
    let v = &s * v0.data() * s.transpose();
    let v = (&v + v.transpose()) * 0.5;
    Ok(CovarianceMatrix::from_raw(v, v0.labels().to_vec()))
}

/// Rows of `S(t)` for `(q₁, π₁, q₂, π₂)` of the two oscillators, so that the
/// reduced covariance is `R V₀ Rᵀ`. Costs `O(n²)` instead of the `O(n³)` of a
/// full propagation.
pub fn reduced_propagator_rows(modes: &NormalModes, t: f64) -> Result<DMatrix<f64>> {
    let n = modes.dim();
    let sys = [Coord::System1, Coord::System2].map(|c| modes.index_of(c));
    let [Some(i1), Some(i2)] = sys else {
        return Err(Error::UnsupportedGeometry(
            "reduced rows need two oscillators",
        ));
    };
    let o = modes.modes();
    let (cm1, sw, ws) = mode_coefficients(modes.frequencies(), t);
    let mut rows = DMatrix::zeros(4, 2 * n);
    for (slot, &j) in [i1, i2].iter().enumerate() {
        let row_of = |weights: &[f64]| -> Vec<f64> {
            let w: Vec<f64> = (0..n).map(|k| o[(j, k)] * weights[k]).collect();
            (0..n)
                .map(|l| (0..n).map(|k| w[k] * o[(l, k)]).sum())
                .collect()
        };
        let mut a = row_of(&cm1);
        a[j] += 1.0;
        let b = row_of(&sw);
        let c = row_of(&ws);
        for l in 0..n {
            rows[(2 * slot, l)] = a[l];
            rows[(2 * slot, n + l)] = b[l];
            rows[(2 * slot + 1, l)] = c[l];
            rows[(2 * slot + 1, n + l)] = a[l];
        }
    }
    Ok(rows)
}

/// `⟨H⟩ = ½ tr(H V)` for a zero-mean state, with `H = diag(K̃, I)` in
/// mass-weighted coordinates. Units of `ħΩ₀`.
pub fn mean_energy(model: &QuadraticModel, v: &CovarianceMatrix) -> Result<f64> {
    let n = model.dim();
    if v.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.dim(),
        });
    }
    let kt = model.mass_weighted_stiffness();
    let d = v.data();
    let mut potential = 0.0;
    for i in 0..n {
        for j in 0..n {
            potential += kt[(i, j)] * d[(j, i)];
        }
    }
    let kinetic: f64 = (0..n).map(|i| d[(n + i, n + i)]).sum();
    Ok(0.5 * (potential + kinetic))
}
