//! Oscillator-only covariance evolution for sweeps over `(r, T)`.
//!
//! The initial state is a product of squeezed oscillators and a chain that is
//! thermal in its own normal modes. Expressing the oscillator rows of `S(t)`
//! in that bath eigenbasis makes the bath covariance diagonal, so one time
//! sample costs `O(n·n_B)` once and then `O(n_B)` per temperature and `O(1)`
//! per squeezing value.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::evolve::mode_coefficients;
use super::modes::NormalModes;
use super::state::{InitialState, ThermalBath};
use crate::error::{Error, Result};
use crate::model::Coord;

/// Precomputed projections shared read-only by all time samples.
#[derive(Debug, Clone)]
pub struct SystemEvolution {
    system: Vec<Coord>,
    frequencies: Vec<f64>,
    /// `O[sys, :]`, one row per oscillator.
    sys_rows: DMatrix<f64>,
    /// `O[chain, :]ᵀ · O_B`.
    bath_overlap: DMatrix<f64>,
    bath_frequencies: Vec<f64>,
}

/// Oscillator rows of `S(t)` at one instant, independent of `r` and `T`.
#[derive(Debug, Clone)]
pub struct TimeKernel {
    t: f64,
    k: usize,
    /// Coefficient matrices of `sq = ⟨X'²⟩₀` and `sp = ⟨P'²⟩₀`, interleaved
    /// `2k × 2k`.
    squeeze_q: DMatrix<f64>,
    squeeze_p: DMatrix<f64>,
    /// `A`, `B`, `C` rows projected on the bath eigenbasis (`k × n_B` each).
    bath_a: DMatrix<f64>,
    bath_b: DMatrix<f64>,
    bath_c: DMatrix<f64>,
}

impl SystemEvolution {
    /// `coupled` diagonalizes the interacting model; `bath` diagonalizes its
    /// chain block before the interaction is switched on.
    pub fn new(coupled: &NormalModes, bath: &NormalModes) -> Result<Self> {
        let labels = coupled.labels();
        let system: Vec<usize> = (0..labels.len())
            .filter(|&i| labels[i].is_system())
            .collect();
        let chain: Vec<usize> = (0..labels.len())
            .filter(|&i| !labels[i].is_system())
            .collect();
        if system.is_empty() {
            return Err(Error::UnsupportedGeometry("model has no oscillators"));
        }
        if chain.len() != bath.dim() {
            return Err(Error::DimensionMismatch {
                expected: chain.len(),
                found: bath.dim(),
            });
        }
        if chain
            .iter()
            .zip(bath.labels())
            .any(|(&i, &l)| labels[i] != l)
        {
            return Err(Error::invalid(
                "bath",
                "bath modes do not match the chain coordinates",
            ));
        }
        let o = coupled.modes();
        let n = coupled.dim();
        let sys_rows = DMatrix::from_fn(system.len(), n, |j, k| o[(system[j], k)]);
        let chain_rows = DMatrix::from_fn(n, chain.len(), |k, a| o[(chain[a], k)]);
        let bath_overlap = chain_rows * bath.modes();
        Ok(SystemEvolution {
            system: system.iter().map(|&i| labels[i]).collect(),
            frequencies: coupled.frequencies().to_vec(),
            sys_rows,
            bath_overlap,
            bath_frequencies: bath.frequencies().to_vec(),
        })
    }

    pub fn oscillators(&self) -> &[Coord] {
        &self.system
    }

    pub fn bath_frequencies(&self) -> &[f64] {
        &self.bath_frequencies
    }

    pub fn thermal(&self, temperature: f64) -> Result<ThermalBath> {
        ThermalBath::new(&self.bath_frequencies, temperature)
    }

    pub fn kernel(&self, t: f64) -> TimeKernel {
        self.kernels(&[t]).pop().unwrap()
    }

    /// Kernels for a batch of times, evaluated with one matrix product.
    pub fn kernels(&self, times: &[f64]) -> Vec<TimeKernel> {
        let k = self.system.len();
        let n = self.frequencies.len();
        let rows_per_t = 3 * k;
        let mut stacked = DMatrix::zeros(rows_per_t * times.len(), n);
        for (ti, &t) in times.iter().enumerate() {
            let (cm1, sw, ws) = mode_coefficients(&self.frequencies, t);
            for j in 0..k {
                for m in 0..n {
                    let o = self.sys_rows[(j, m)];
                    let base = ti * rows_per_t;
                    stacked[(base + j, m)] = o * (1.0 + cm1[m]);
                    stacked[(base + k + j, m)] = o * sw[m];
                    stacked[(base + 2 * k + j, m)] = o * ws[m];
                }
            }
        }
        let bath = &stacked * &self.bath_overlap;
        let sys = &stacked * self.sys_rows.transpose();
        times
            .iter()
            .enumerate()
            .map(|(ti, &t)| {
                let base = ti * rows_per_t;
                let block = |m: &DMatrix<f64>, off: usize| m.rows(base + off * k, k).into_owned();
                let (sa, sb, sc) = (block(&sys, 0), block(&sys, 1), block(&sys, 2));
                let mut squeeze_q = DMatrix::zeros(2 * k, 2 * k);
                let mut squeeze_p = DMatrix::zeros(2 * k, 2 * k);
                for j in 0..k {
                    for l in 0..k {
                        let dot = |x: &DMatrix<f64>, y: &DMatrix<f64>| {
                            (0..k).map(|s| x[(j, s)] * y[(l, s)]).sum::<f64>()
                        };
                        squeeze_q[(2 * j, 2 * l)] = dot(&sa, &sa);
                        squeeze_p[(2 * j, 2 * l)] = dot(&sb, &sb);
                        squeeze_q[(2 * j, 2 * l + 1)] = dot(&sa, &sc);
                        squeeze_p[(2 * j, 2 * l + 1)] = dot(&sb, &sa);
                        squeeze_q[(2 * j + 1, 2 * l + 1)] = dot(&sc, &sc);
                        squeeze_p[(2 * j + 1, 2 * l + 1)] = dot(&sa, &sa);
                    }
                }
                symmetrize_from_upper_pairs(&mut squeeze_q, k);
                symmetrize_from_upper_pairs(&mut squeeze_p, k);
                TimeKernel {
                    t,
                    k,
                    squeeze_q,
                    squeeze_p,
                    bath_a: block(&bath, 0),
                    bath_b: block(&bath, 1),
                    bath_c: block(&bath, 2),
                }
            })
            .collect()
    }

    /// `⟨H⟩` of the coupled Hamiltonian for the given initial state, from the
    /// conserved normal-mode energies `½(ω²⟨Q²⟩ + ⟨Π²⟩)`.
    pub fn mean_energy(&self, state: &InitialState, thermal: &ThermalBath) -> f64 {
        let (sq, sp) = state.system_variances();
        let mut total = 0.0;
        for (m, &w) in self.frequencies.iter().enumerate() {
            let sys: f64 = (0..self.system.len())
                .map(|j| self.sys_rows[(j, m)] * self.sys_rows[(j, m)])
                .sum();
            let (mut q2, mut p2) = (sys * sq, sys * sp);
            for (b, (&dq, &dp)) in thermal
                .position()
                .iter()
                .zip(thermal.momentum())
                .enumerate()
            {
                let g = self.bath_overlap[(m, b)];
                q2 += g * g * dq;
                p2 += g * g * dp;
            }
            total += 0.5 * (w * w * q2 + p2);
        }
        total
    }
}

/// Copies each `(q_l, π_j)` entry into `(π_j, q_l)`. The `qq` and `ππ`
/// entries are expected to be filled already.
fn symmetrize_from_upper_pairs(m: &mut DMatrix<f64>, k: usize) {
    for j in 0..k {
        for l in 0..k {
            m[(2 * j + 1, 2 * l)] = m[(2 * l, 2 * j + 1)];
        }
    }
}

impl TimeKernel {
    pub fn time(&self) -> f64 {
        self.t
    }

    /// Contribution of the thermal chain to the oscillator covariance
    /// (interleaved `2k × 2k`).
    pub fn bath_part(&self, thermal: &ThermalBath) -> DMatrix<f64> {
        let k = self.k;
        let dq = thermal.position();
        let dp = thermal.momentum();
        let nb = dq.len();
        let mut out = DMatrix::zeros(2 * k, 2 * k);
        for j in 0..k {
            for l in 0..k {
                let (mut qq, mut qp, mut pp) = (0.0, 0.0, 0.0);
                for b in 0..nb {
                    let (aj, bj, cj) = (self.bath_a[(j, b)], self.bath_b[(j, b)], self.bath_c[(j, b)]);
                    let (al, bl, cl) = (self.bath_a[(l, b)], self.bath_b[(l, b)], self.bath_c[(l, b)]);
                    qq += aj * al * dq[b] + bj * bl * dp[b];
                    qp += aj * cl * dq[b] + bj * al * dp[b];
                    pp += cj * cl * dq[b] + aj * al * dp[b];
                }
                out[(2 * j, 2 * l)] = qq;
                out[(2 * j, 2 * l + 1)] = qp;
                out[(2 * l + 1, 2 * j)] = qp;
                out[(2 * j + 1, 2 * l + 1)] = pp;
            }
        }
        out
    }

    /// Adds the squeezed-oscillator contribution to a precomputed
    /// [`bath_part`](Self::bath_part).
    pub fn with_squeezing(&self, bath_part: &DMatrix<f64>, state: &InitialState) -> DMatrix<f64> {
        let (sq, sp) = state.system_variances();
        let v = &self.squeeze_q * sq + &self.squeeze_p * sp + bath_part;
        (&v + v.transpose()) * 0.5
    }

    /// Interleaved oscillator covariance `(X'₁, P'₁, …)` at this instant.
    pub fn covariance(&self, state: &InitialState, thermal: &ThermalBath) -> DMatrix<f64> {
        self.with_squeezing(&self.bath_part(thermal), state)
    }
}
