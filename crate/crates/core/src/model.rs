//! Quadratic Hamiltonians for two oscillators coupled through a pinned chain.
//!
//! The chain has `2N` sites labelled `-N..=-1, 1..=N`; there is no site 0 and
//! the central bond joins `-1` and `1`. The edge sites `±N` carry a harmonic
//! pinning of stiffness `m·ω_B²`. Each oscillator `σ` couples to its site `j`
//! through `γ/2 (X_σ - x_j)²`.
//!
//! Every model is stored in natural units: masses in units of `M`, stiffnesses
//! in units of `MΩ₀²`. With the default `M = Ω₀ = 1` that is the identity.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::math;

/// Where the two system oscillators attach to the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind"))]
pub enum Attachment {
    /// Both oscillators couple to the edge site `N`.
    EdgePair,
    /// Oscillator 1 couples to site `-s`, oscillator 2 to site `+s`.
    SymmetricPair { s: usize },
    /// A single oscillator at site `N` (the one-defect reference case).
    SingleEdge,
}

impl Attachment {
    /// Symmetric attachment whose separation is `d` lattice spacings.
    ///
    /// Sites `±s` sit at `±(s - 1/2)a` when there is no site 0, so the
    /// separation is `d = (2s - 1)a`. The spectral-zero calibration in
    /// [`crate::spectral::calibrate_site`] confirms this mapping numerically.
    pub fn symmetric_for_distance(d: usize) -> Result<Self> {
        if d < 1 || d % 2 == 0 {
            return Err(Error::invalid(
                "d",
                "separation must be an odd number of lattice spacings",
            ));
        }
        Ok(Attachment::SymmetricPair { s: d.div_ceil(2) })
    }

    pub fn oscillator_count(&self) -> usize {
        match self {
            Attachment::SingleEdge => 1,
            _ => 2,
        }
    }
}

/// Physical constants, chain size and attachment geometry.
///
/// Serialized field names are `M, m, omega0, epsilon, kappa, gamma, omegaB,
/// N, a, attachment`; omitted fields take the defaults, which are the Ohmic
/// edge configuration (`2N = 2500`).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct ModelParams {
    #[cfg_attr(feature = "serde", serde(rename = "M"))]
    pub system_mass: f64,
    #[cfg_attr(feature = "serde", serde(rename = "m"))]
    pub chain_mass: f64,
    pub omega0: f64,
    /// Detuning: `Ω = (1 + ε) Ω₀`.
    pub epsilon: f64,
    pub kappa: f64,
    pub gamma: f64,
    #[cfg_attr(feature = "serde", serde(rename = "omegaB"))]
    pub omega_b: f64,
    /// Half the number of chain particles.
    #[cfg_attr(feature = "serde", serde(rename = "N"))]
    pub half_size: usize,
    #[cfg_attr(feature = "serde", serde(rename = "a"))]
    pub spacing: f64,
    pub attachment: Attachment,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            system_mass: 1.0,
            chain_mass: 0.5,
            omega0: 1.0,
            epsilon: 0.0,
            kappa: 1.0,
            gamma: 0.1,
            omega_b: core::f64::consts::SQRT_2,
            half_size: 1250,
            spacing: 1.0,
            attachment: Attachment::EdgePair,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        fn positive(field: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(field, alloc::format!("must be > 0, got {v}")))
            }
        }
        positive("M", self.system_mass)?;
        positive("m", self.chain_mass)?;
        positive("omega0", self.omega0)?;
        positive("kappa", self.kappa)?;
        positive("omegaB", self.omega_b)?;
        positive("a", self.spacing)?;
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::invalid(
                "gamma",
                alloc::format!("must be >= 0, got {}", self.gamma),
            ));
        }
        if !(self.epsilon.is_finite() && self.epsilon > -1.0) {
            return Err(Error::invalid(
                "epsilon",
                alloc::format!("must be > -1, got {}", self.epsilon),
            ));
        }
        if self.half_size < 2 {
            return Err(Error::invalid(
                "N",
                alloc::format!("must be >= 2, got {}", self.half_size),
            ));
        }
        if let Attachment::SymmetricPair { s } = self.attachment {
            if s < 1 || s > self.half_size {
                return Err(Error::invalid(
                    "attachment.s",
                    alloc::format!("must lie in 1..={}, got {s}", self.half_size),
                ));
            }
        }
        Ok(())
    }

    fn stiffness_unit(&self) -> f64 {
        self.system_mass * self.omega0 * self.omega0
    }

    fn reduced_chain_mass(&self) -> f64 {
        self.chain_mass / self.system_mass
    }

    fn reduced_kappa(&self) -> f64 {
        self.kappa / self.stiffness_unit()
    }

    pub(crate) fn reduced_gamma(&self) -> f64 {
        self.gamma / self.stiffness_unit()
    }

    fn reduced_pinning(&self) -> f64 {
        self.chain_mass * self.omega_b * self.omega_b / self.stiffness_unit()
    }

    /// `Ω/Ω₀`.
    pub(crate) fn reduced_omega(&self) -> f64 {
        1.0 + self.epsilon
    }
}

/// Role of one coordinate of a [`QuadraticModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coord {
    System1,
    System2,
    /// `X₊ = (X₁ + X₂)/√2`.
    SystemPlus,
    /// `X₋ = (X₁ - X₂)/√2`.
    SystemMinus,
    /// Chain site `i ∈ {-N..=-1, 1..=N}`.
    Chain(i32),
    /// `x_i⁺ = (x_i + x_{-i})/√2`, `i ∈ 1..=N`.
    ChainPlus(u32),
    /// `x_i⁻ = (x_i - x_{-i})/√2`, `i ∈ 1..=N`.
    ChainMinus(u32),
}

impl Coord {
    pub fn is_system(&self) -> bool {
        matches!(
            self,
            Coord::System1 | Coord::System2 | Coord::SystemPlus | Coord::SystemMinus
        )
    }
}

/// `H = Σ p²/(2mᵢ) + ½ xᵀ K x` in natural units.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticModel {
    masses: Vec<f64>,
    stiffness: DMatrix<f64>,
    labels: Vec<Coord>,
    coupled: bool,
    attachment: Option<Attachment>,
}

impl QuadraticModel {
    /// Builds a model from raw parts. `stiffness` must be square, exactly
    /// symmetric and match `masses` and `labels` in length.
    pub fn from_parts(
        masses: Vec<f64>,
        stiffness: DMatrix<f64>,
        labels: Vec<Coord>,
        coupled: bool,
    ) -> Result<Self> {
        let n = masses.len();
        if stiffness.nrows() != n || stiffness.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: stiffness.nrows(),
            });
        }
        if labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: labels.len(),
            });
        }
        if masses.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
            return Err(Error::invalid("masses", "all masses must be positive"));
        }
        if stiffness != stiffness.transpose() {
            return Err(Error::invalid("stiffness", "matrix is not symmetric"));
        }
        Ok(QuadraticModel {
            masses,
            stiffness,
            labels,
            coupled,
            attachment: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn stiffness(&self) -> &DMatrix<f64> {
        &self.stiffness
    }

    pub fn labels(&self) -> &[Coord] {
        &self.labels
    }

    /// Whether the system-chain interaction is switched on.
    pub fn is_coupled(&self) -> bool {
        self.coupled
    }

    pub fn attachment(&self) -> Option<Attachment> {
        self.attachment
    }

    pub fn index_of(&self, coord: Coord) -> Option<usize> {
        self.labels.iter().position(|&c| c == coord)
    }

    pub fn system_indices(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.labels[i].is_system())
            .collect()
    }

    pub fn chain_indices(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| !self.labels[i].is_system())
            .collect()
    }

    /// `K̃ = M^{-1/2} K M^{-1/2}`.
    pub fn mass_weighted_stiffness(&self) -> DMatrix<f64> {
        let inv_sqrt: Vec<f64> = self.masses.iter().map(|&m| 1.0 / math::sqrt(m)).collect();
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            self.stiffness[(i, j)] * inv_sqrt[i] * inv_sqrt[j]
        })
    }

    /// Restriction to a subset of coordinates (kept in the given order).
    pub fn restrict(&self, indices: &[usize]) -> QuadraticModel {
        let k = indices.len();
        QuadraticModel {
            masses: indices.iter().map(|&i| self.masses[i]).collect(),
            stiffness: DMatrix::from_fn(k, k, |a, b| self.stiffness[(indices[a], indices[b])]),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            coupled: false,
            attachment: None,
        }
    }

    /// The chain coordinates only, including any self-shift the coupling put
    /// on the attachment sites.
    pub fn bath_block(&self) -> QuadraticModel {
        self.restrict(&self.chain_indices())
    }

    /// Rotates `(System1, System2)` into `(SystemPlus, SystemMinus)` and
    /// leaves the chain untouched.
    pub fn rotate_system_pair(&self) -> Result<QuadraticModel> {
        let i1 = self
            .index_of(Coord::System1)
            .ok_or(Error::UnsupportedGeometry("model has no oscillator 1"))?;
        let i2 = self
            .index_of(Coord::System2)
            .ok_or(Error::UnsupportedGeometry("model has no oscillator 2"))?;
        if self.masses[i1] != self.masses[i2] {
            return Err(Error::UnsupportedGeometry("oscillator masses differ"));
        }
        let n = self.dim();
        let mut rot = DMatrix::<f64>::identity(n, n);
        rot[(i1, i1)] = FRAC_1_SQRT_2;
        rot[(i1, i2)] = FRAC_1_SQRT_2;
        rot[(i2, i1)] = FRAC_1_SQRT_2;
        rot[(i2, i2)] = -FRAC_1_SQRT_2;
        let k = &rot * &self.stiffness * rot.transpose();
        let mut labels = self.labels.clone();
        labels[i1] = Coord::SystemPlus;
        labels[i2] = Coord::SystemMinus;
        Ok(QuadraticModel {
            masses: self.masses.clone(),
            stiffness: symmetrized(k),
            labels,
            coupled: self.coupled,
            attachment: self.attachment,
        })
    }
}

fn symmetrized(k: DMatrix<f64>) -> DMatrix<f64> {
    let n = k.nrows();
    DMatrix::from_fn(n, n, |i, j| if i <= j { k[(i, j)] } else { k[(j, i)] })
}

fn add_bond(k: &mut DMatrix<f64>, i: usize, j: usize, stiffness: f64) {
    k[(i, i)] += stiffness;
    k[(j, j)] += stiffness;
    k[(i, j)] -= stiffness;
    k[(j, i)] -= stiffness;
}

/// Position of chain site `site` in the chain block (`-N..=-1, 1..=N`).
pub fn site_offset(site: i32, half_size: usize) -> usize {
    debug_assert!(site != 0 && site.unsigned_abs() as usize <= half_size);
    if site < 0 {
        (site + half_size as i32) as usize
    } else {
        site as usize + half_size - 1
    }
}

fn chain_labels(half_size: usize) -> impl Iterator<Item = Coord> {
    let n = half_size as i32;
    (-n..=-1).chain(1..=n).map(Coord::Chain)
}

fn assemble_chain(params: &ModelParams, k: &mut DMatrix<f64>, offset: usize) {
    let sites = 2 * params.half_size;
    let kappa = params.reduced_kappa();
    for i in 0..sites - 1 {
        add_bond(k, offset + i, offset + i + 1, kappa);
    }
    let pin = params.reduced_pinning();
    k[(offset, offset)] += pin;
    k[(offset + sites - 1, offset + sites - 1)] += pin;
}

/// Chain Hamiltonian `H_B` alone: `2N` coordinates.
pub fn build_bath(params: &ModelParams) -> Result<QuadraticModel> {
    params.validate()?;
    let sites = 2 * params.half_size;
    let mut k = DMatrix::zeros(sites, sites);
    assemble_chain(params, &mut k, 0);
    Ok(QuadraticModel {
        masses: alloc::vec![params.reduced_chain_mass(); sites],
        stiffness: k,
        labels: chain_labels(params.half_size).collect(),
        coupled: false,
        attachment: None,
    })
}

fn build_system_chain(params: &ModelParams, coupled: bool) -> Result<QuadraticModel> {
    params.validate()?;
    let oscillators = params.attachment.oscillator_count();
    let sites = 2 * params.half_size;
    let n = oscillators + sites;
    let mut k = DMatrix::zeros(n, n);
    let omega = params.reduced_omega();
    for sigma in 0..oscillators {
        k[(sigma, sigma)] = omega * omega;
    }
    assemble_chain(params, &mut k, oscillators);
    if coupled {
        let gamma = params.reduced_gamma();
        let n_edge = params.half_size as i32;
        let targets: &[i32] = match params.attachment {
            Attachment::EdgePair => &[n_edge, n_edge],
            Attachment::SingleEdge => &[n_edge],
            Attachment::SymmetricPair { s } => &[-(s as i32), s as i32],
        };
        for (sigma, &site) in targets.iter().enumerate() {
            add_bond(
                &mut k,
                sigma,
                oscillators + site_offset(site, params.half_size),
                gamma,
            );
        }
    }
    let mut labels = Vec::with_capacity(n);
    labels.push(Coord::System1);
    if oscillators == 2 {
        labels.push(Coord::System2);
    }
    labels.extend(chain_labels(params.half_size));
    let mut masses = alloc::vec![1.0; oscillators];
    masses.extend(core::iter::repeat(params.reduced_chain_mass()).take(sites));
    Ok(QuadraticModel {
        masses,
        stiffness: k,
        labels,
        coupled,
        attachment: Some(params.attachment),
    })
}

/// Oscillators plus chain with the interaction switched on (`t >= 0`).
pub fn build_coupled(params: &ModelParams) -> Result<QuadraticModel> {
    build_system_chain(params, true)
}

/// Oscillators plus chain before the interaction is switched on: the chain
/// block equals [`build_bath`] and each oscillator is free at `Ω`.
pub fn build_uncoupled(params: &ModelParams) -> Result<QuadraticModel> {
    build_system_chain(params, false)
}

/// Scalar quantities derived from [`ModelParams`], in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DerivedQuantities {
    /// Top of the chain band, `√(4κ/m)`.
    pub omega_cut: f64,
    /// Bare oscillator frequency `(1 + ε)Ω₀`.
    pub omega: f64,
    /// `√(1 + γ/(MΩ²))`.
    pub eta: f64,
    /// Shifted frequency `ηΩ` of a decoupled collective coordinate.
    pub omega_gamma: f64,
    /// Squeezing of the ground state at `Ω_γ`: `½ ln η`.
    pub r_s: f64,
    pub sound_velocity: f64,
    pub chain_length: f64,
    pub t_rev: f64,
    /// Oscillator length `√(ħ/(MΩ₀))` in the input units.
    pub alpha: f64,
    /// Separation of the attachment sites in units of `a`, when defined.
    pub separation: Option<f64>,
}

pub fn derived_quantities(params: &ModelParams) -> Result<DerivedQuantities> {
    params.validate()?;
    let omega_cut = math::sqrt(4.0 * params.reduced_kappa() / params.reduced_chain_mass());
    let omega = params.reduced_omega();
    let eta = math::sqrt(1.0 + params.reduced_gamma() / (omega * omega));
    let sound_velocity = omega_cut / 2.0;
    let chain_length = 2.0 * params.half_size as f64;
    let separation = match params.attachment {
        Attachment::EdgePair => Some(0.0),
        Attachment::SymmetricPair { s } => Some((2 * s - 1) as f64),
        Attachment::SingleEdge => None,
    };
    Ok(DerivedQuantities {
        omega_cut,
        omega,
        eta,
        omega_gamma: eta * omega,
        r_s: 0.5 * math::ln(eta),
        sound_velocity,
        chain_length,
        t_rev: chain_length / sound_velocity,
        alpha: 1.0 / math::sqrt(params.system_mass * params.omega0),
        separation,
    })
}

/// Result of [`pm_transform`].
#[derive(Debug, Clone)]
pub struct PmSplit {
    /// `X₊` followed by `x_1⁺..x_N⁺`.
    pub plus: QuadraticModel,
    /// `X₋` followed by `x_1⁻..x_N⁻`.
    pub minus: QuadraticModel,
    /// Orthogonal map from the input coordinates to `plus ⊕ minus`.
    pub transform: DMatrix<f64>,
}

/// Splits a mirror-symmetric model into two independent half-chain models.
///
/// Pairs `(X₁, X₂)` and `(x_i, x_{-i})` go to `(X₊, X₋)` and `(x_i⁺, x_i⁻)`.
/// The central bond turns into a pinning of stiffness `2κ` on `x_1⁻` and
/// vanishes from the plus branch.
pub fn pm_transform(model: &QuadraticModel) -> Result<PmSplit> {
    match model.attachment {
        Some(Attachment::SymmetricPair { .. }) => {}
        _ => {
            return Err(Error::UnsupportedGeometry(
                "the ± split needs a symmetric-pair model",
            ))
        }
    }
    let i1 = model.index_of(Coord::System1).unwrap();
    let i2 = model.index_of(Coord::System2).unwrap();
    let half = (model.dim() - 2) / 2;
    let mut pairs = Vec::with_capacity(half + 1);
    pairs.push((i1, i2));
    for i in 1..=half as i32 {
        let a = model.index_of(Coord::Chain(i)).unwrap();
        let b = model.index_of(Coord::Chain(-i)).unwrap();
        pairs.push((a, b));
    }
    let m = pairs.len();
    let k = &model.stiffness;
    let scale = k.amax().max(f64::MIN_POSITIVE);
    let mut plus = DMatrix::zeros(m, m);
    let mut minus = DMatrix::zeros(m, m);
    for (u, &(a, ap)) in pairs.iter().enumerate() {
        if model.masses[a] != model.masses[ap] {
            return Err(Error::UnsupportedGeometry("mirror partners differ in mass"));
        }
        for (v, &(b, bp)) in pairs.iter().enumerate().skip(u) {
            let (kab, kabp, kapb, kapbp) = (k[(a, b)], k[(a, bp)], k[(ap, b)], k[(ap, bp)]);
            let cross = 0.5 * ((kab - kapbp) + (kapb - kabp));
            if math::abs(cross) > 1e-12 * scale {
                return Err(Error::UnsupportedGeometry(
                    "stiffness is not mirror symmetric",
                ));
            }
            let p = 0.5 * ((kab + kapbp) + (kabp + kapb));
            let q = 0.5 * ((kab + kapbp) - (kabp + kapb));
            plus[(u, v)] = p;
            plus[(v, u)] = p;
            minus[(u, v)] = q;
            minus[(v, u)] = q;
        }
    }
    let n = model.dim();
    let mut transform = DMatrix::zeros(n, n);
    for (u, &(a, ap)) in pairs.iter().enumerate() {
        transform[(u, a)] = FRAC_1_SQRT_2;
        transform[(u, ap)] = FRAC_1_SQRT_2;
        transform[(m + u, a)] = FRAC_1_SQRT_2;
        transform[(m + u, ap)] = -FRAC_1_SQRT_2;
    }
    let masses: Vec<f64> = pairs.iter().map(|&(a, _)| model.masses[a]).collect();
    let mut plus_labels = alloc::vec![Coord::SystemPlus];
    let mut minus_labels = alloc::vec![Coord::SystemMinus];
    for i in 1..=half as u32 {
        plus_labels.push(Coord::ChainPlus(i));
        minus_labels.push(Coord::ChainMinus(i));
    }
    Ok(PmSplit {
        plus: QuadraticModel {
            masses: masses.clone(),
            stiffness: plus,
            labels: plus_labels,
            coupled: model.coupled,
            attachment: None,
        },
        minus: QuadraticModel {
            masses,
            stiffness: minus,
            labels: minus_labels,
            coupled: model.coupled,
            attachment: None,
        },
        transform,
    })
}
