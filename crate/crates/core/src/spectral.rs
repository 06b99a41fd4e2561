//! Spectral densities of the chain as seen by the collective oscillator
//! coordinates, and tools to place the shifted frequency `Ω_γ` on a zero.
//!
//! `J(ω) = (π/2m) Σᵢ γ̄ᵢ²/ω̄ᵢ δ(ω - ω̄ᵢ)`, where `ω̄ᵢ` are the normal modes of the
//! chain including the coupling's self-shift on the attachment site and `γ̄ᵢ`
//! is the projection of the coupling vector on mode `i`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gaussian::{diagonalize, NormalModes};
use crate::math;
use crate::model::{
    build_coupled, derived_quantities, pm_transform, Attachment, Coord, ModelParams,
    QuadraticModel,
};

/// Which collective coordinate the density refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Branch {
    /// Centre of mass `X₊`.
    Plus,
    /// Relative coordinate `X₋`.
    Minus,
    /// The lone oscillator of a single-edge model.
    Single,
}

impl core::fmt::Display for Branch {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
            Branch::Single => "single",
        })
    }
}

/// Chain Hamiltonian seen by one collective coordinate, and how that
/// coordinate couples to it (stiffness-matrix entries, so `-γ` per bond).
#[derive(Debug, Clone)]
pub struct EffectiveBath {
    pub model: QuadraticModel,
    pub coupling: Vec<f64>,
}

/// Builds the effective bath of `branch`.
///
/// For the edge geometries the chain is the full `H_B` plus the self-shift at
/// site `N`; for a symmetric pair it is the plus or minus half chain.
pub fn effective_bath(params: &ModelParams, branch: Branch) -> Result<EffectiveBath> {
    let coupled = build_coupled(params)?;
    let (model, system) = match (params.attachment, branch) {
        (Attachment::SingleEdge, Branch::Single) => (coupled, Coord::System1),
        (Attachment::EdgePair, Branch::Plus) => (coupled.rotate_system_pair()?, Coord::SystemPlus),
        (Attachment::EdgePair, Branch::Minus) => {
            (coupled.rotate_system_pair()?, Coord::SystemMinus)
        }
        (Attachment::SymmetricPair { .. }, Branch::Plus) => {
            (pm_transform(&coupled)?.plus, Coord::SystemPlus)
        }
        (Attachment::SymmetricPair { .. }, Branch::Minus) => {
            (pm_transform(&coupled)?.minus, Coord::SystemMinus)
        }
        _ => {
            return Err(Error::UnsupportedGeometry(
                "branch does not match the attachment",
            ))
        }
    };
    let x = model.index_of(system).unwrap();
    let chain = model.chain_indices();
    let coupling = chain.iter().map(|&i| model.stiffness()[(x, i)]).collect();
    Ok(EffectiveBath {
        model: model.restrict(&chain),
        coupling,
    })
}

pub fn effective_bath_modes(params: &ModelParams, branch: Branch) -> Result<NormalModes> {
    diagonalize(&effective_bath(params, branch)?.model)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    pub omega: f64,
    /// `γ̄ᵢ`.
    pub coupling: f64,
    /// `(π/2m) γ̄ᵢ²/ω̄ᵢ`.
    pub weight: f64,
}

/// Discrete line spectrum with a Gaussian-kernel smoothed view.
#[derive(Debug, Clone)]
pub struct SpectralDensity {
    lines: Vec<SpectralLine>,
    branch: Branch,
    kernel_bandwidth: f64,
}

impl SpectralDensity {
    /// Default bandwidth is three mean mode spacings.
    pub fn from_lines(lines: Vec<SpectralLine>, branch: Branch) -> Result<Self> {
        if lines.is_empty() {
            return Err(Error::TooFewModes {
                found: 0,
                required: 1,
            });
        }
        if lines
            .windows(2)
            .any(|w| !(w[0].omega <= w[1].omega))
            || lines.iter().any(|l| !(l.omega > 0.0 && l.weight >= 0.0))
        {
            return Err(Error::invalid(
                "lines",
                "frequencies must be positive and ascending, weights non-negative",
            ));
        }
        let mut density = SpectralDensity {
            lines,
            branch,
            kernel_bandwidth: 0.0,
        };
        density.kernel_bandwidth = 3.0 * density.mean_spacing();
        Ok(density)
    }

    pub fn with_bandwidth(mut self, bandwidth: f64) -> Self {
        self.kernel_bandwidth = bandwidth;
        self
    }

    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn kernel_bandwidth(&self) -> f64 {
        self.kernel_bandwidth
    }

    pub fn mean_spacing(&self) -> f64 {
        let n = self.lines.len();
        if n < 2 {
            return 0.0;
        }
        (self.lines[n - 1].omega - self.lines[0].omega) / (n - 1) as f64
    }

    /// `Σ γ̄ᵢ²`, equal to the squared norm of the coupling vector.
    pub fn coupling_norm_sq(&self) -> f64 {
        self.lines.iter().map(|l| l.coupling * l.coupling).sum()
    }

    /// Gaussian-kernel estimate of `J(ω)`.
    pub fn smoothed(&self, omega: f64) -> f64 {
        let sigma = self.kernel_bandwidth;
        let reach = 8.0 * sigma;
        let lo = self.lines.partition_point(|l| l.omega < omega - reach);
        let hi = self.lines.partition_point(|l| l.omega <= omega + reach);
        let norm = 1.0 / (math::sqrt(2.0 * core::f64::consts::PI) * sigma);
        self.lines[lo..hi]
            .iter()
            .map(|l| {
                let z = (omega - l.omega) / sigma;
                l.weight * norm * math::exp(-0.5 * z * z)
            })
            .sum()
    }

    /// `(ω, J_smoothed(ω))` on a uniform grid spanning the line spectrum.
    pub fn sampled(&self, points: usize) -> Vec<(f64, f64)> {
        let lo = self.lines[0].omega;
        let hi = self.lines[self.lines.len() - 1].omega;
        crate::entanglement::sample_times(lo, hi, points)
            .into_iter()
            .map(|w| (w, self.smoothed(w)))
            .collect()
    }
}

/// Line spectrum of `branch` for the configured attachment.
pub fn spectral_density(params: &ModelParams, branch: Branch) -> Result<SpectralDensity> {
    let bath = effective_bath(params, branch)?;
    let modes = diagonalize(&bath.model)?;
    let mass = bath.model.masses()[0];
    let o = modes.modes();
    let lines = modes
        .frequencies()
        .iter()
        .enumerate()
        .map(|(i, &omega)| {
            let coupling: f64 = bath
                .coupling
                .iter()
                .enumerate()
                .map(|(a, &c)| c * o[(a, i)])
                .sum();
            SpectralLine {
                omega,
                coupling,
                weight: core::f64::consts::PI / (2.0 * mass) * coupling * coupling / omega,
            }
        })
        .collect();
    SpectralDensity::from_lines(lines, branch)
}

/// Closed-form zeros of one branch for an infinite chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    pub branch: Branch,
    /// `(k, ω_E,k)`, ascending.
    pub zeros: Vec<(usize, f64)>,
    pub phis: Vec<f64>,
}

impl ZeroSet {
    pub fn frequency(&self, k: usize) -> Option<f64> {
        self.zeros.iter().find(|z| z.0 == k).map(|z| z.1)
    }
}

/// Zeros `ω_cut sin φ_k` of `J₊` and `J₋` for oscillators `d` spacings apart.
///
/// Plus branch: `φ_k = π(2k - 1)/(2d)`, `k = 1..=⌊d/2 + 1/4⌋`.
/// Minus branch: `φ_k = πk/d`, `k = 1..=⌊d/2 - 1/4⌋`.
pub fn closed_form_zeros(d: f64, omega_cut: f64) -> Result<(ZeroSet, ZeroSet)> {
    if !(d > 1.0) || !d.is_finite() {
        return Err(Error::invalid("d", "separation must exceed one spacing"));
    }
    let build = |branch: Branch, count: f64, phi: &dyn Fn(f64) -> f64| {
        let count = math::floor(count) as usize;
        let phis: Vec<f64> = (1..=count).map(|k| phi(k as f64)).collect();
        ZeroSet {
            branch,
            zeros: phis
                .iter()
                .enumerate()
                .map(|(i, &p)| (i + 1, omega_cut * math::sin(p)))
                .collect(),
            phis,
        }
    };
    let pi = core::f64::consts::PI;
    Ok((
        build(Branch::Plus, d / 2.0 + 0.25, &|k| pi * (2.0 * k - 1.0) / (2.0 * d)),
        build(Branch::Minus, d / 2.0 - 0.25, &|k| pi * k / d),
    ))
}

/// Numerically located zeros of a smoothed density.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSearch {
    pub zeros: Vec<f64>,
    /// The requested resolution is finer than the mode spacing, so the chain
    /// is too short to honour it.
    pub under_resolved: bool,
}

/// Default relative depth for a local minimum to count as a zero.
pub const ZERO_FLOOR: f64 = 0.25;

/// Interior local minima of the smoothed `J` whose value is below
/// [`ZERO_FLOOR`] times the lower of the two maxima flanking them.
///
/// `resolution` is the requested accuracy of the zero positions; the density
/// is sampled at least four times per kernel bandwidth.
pub fn locate_zeros_numeric(density: &SpectralDensity, resolution: f64) -> Result<ZeroSearch> {
    locate_zeros_with_floor(density, resolution, ZERO_FLOOR)
}

/// Like [`locate_zeros_numeric`] with an explicit relative depth `floor`.
///
/// The flanking maximum on each side is the value reached by climbing away
/// from the minimum until the density turns down again (or the spectrum ends).
pub fn locate_zeros_with_floor(
    density: &SpectralDensity,
    resolution: f64,
    floor: f64,
) -> Result<ZeroSearch> {
    if !(resolution > 0.0) {
        return Err(Error::invalid("resolution", "must be > 0"));
    }
    if !(floor > 0.0 && floor < 1.0) {
        return Err(Error::invalid("floor", "must lie in (0, 1)"));
    }
    let lines = density.lines();
    let lo = lines[0].omega;
    let hi = lines[lines.len() - 1].omega;
    let step = resolution.min(0.25 * density.kernel_bandwidth());
    let points = (math::floor((hi - lo) / step) as usize + 1).max(3);
    let samples = density.sampled(points);
    let y: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let climb = |mut i: usize, step: isize| -> f64 {
        loop {
            let next = i as isize + step;
            if next < 0 || next as usize >= y.len() || y[next as usize] < y[i] {
                return y[i];
            }
            i = next as usize;
        }
    };
    let mut zeros = Vec::new();
    for i in 1..y.len() - 1 {
        let (prev, cur, next) = (y[i - 1], y[i], y[i + 1]);
        if !(cur < prev && cur <= next) {
            continue;
        }
        let flank = climb(i, -1).min(climb(i, 1));
        if cur < floor * flank {
            // parabolic refinement through the three samples
            let h = samples[i + 1].0 - samples[i].0;
            let curvature = prev - 2.0 * cur + next;
            let shift = if curvature > 0.0 {
                0.5 * h * (prev - next) / curvature
            } else {
                0.0
            };
            zeros.push(samples[i].0 + shift);
        }
    }
    Ok(ZeroSearch {
        zeros,
        under_resolved: resolution < density.mean_spacing(),
    })
}

/// Through-origin fit `J ≈ c·ω` on `(0, ω_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhmicFit {
    pub slope: f64,
    /// RMS deviation divided by the RMS of the fit.
    pub relative_residual: f64,
    pub bins: usize,
}

/// Minimum number of lines inside the fit window.
pub const OHMIC_MIN_MODES: usize = 20;

/// Fits the binned density to `c·ω` on `(0, ω_max]`.
///
/// Each line owns the interval between the midpoints to its neighbours; a bin
/// groups consecutive lines and its density is the summed weight over the
/// summed interval width, placed at the lines' mean frequency.
pub fn ohmic_fit(density: &SpectralDensity, omega_max: f64) -> Result<OhmicFit> {
    let lines = density.lines();
    let last = lines[lines.len() - 1].omega;
    if !(omega_max > 0.0 && omega_max <= last) {
        return Err(Error::invalid(
            "window",
            "upper edge must lie inside the spectrum",
        ));
    }
    let count = lines.partition_point(|l| l.omega <= omega_max);
    if count < OHMIC_MIN_MODES {
        return Err(Error::TooFewModes {
            found: count,
            required: OHMIC_MIN_MODES,
        });
    }
    let width = |i: usize| -> f64 {
        let left = if i == 0 {
            lines[1].omega - lines[0].omega
        } else {
            lines[i].omega - lines[i - 1].omega
        };
        let right = if i + 1 == lines.len() {
            left
        } else {
            lines[i + 1].omega - lines[i].omega
        };
        0.5 * (left + right)
    };
    let per_bin = (count / 20).max(1);
    let mut points = Vec::new();
    let mut i = 0;
    while i + per_bin <= count {
        let group = i..i + per_bin;
        let w: f64 = group.clone().map(|j| lines[j].weight).sum();
        let span: f64 = group.clone().map(width).sum();
        let omega = group.map(|j| lines[j].omega).sum::<f64>() / per_bin as f64;
        points.push((omega, w / span));
        i += per_bin;
    }
    let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let slope = sxy / sxx;
    let n = points.len() as f64;
    let rms_res = math::sqrt(
        points
            .iter()
            .map(|(x, y)| (y - slope * x) * (y - slope * x))
            .sum::<f64>()
            / n,
    );
    let rms_fit = math::sqrt(slope * slope * sxx / n);
    Ok(OhmicFit {
        slope,
        relative_residual: if rms_fit > 0.0 { rms_res / rms_fit } else { f64::INFINITY },
        bins: points.len(),
    })
}

/// Detuning `ε` that puts `Ω_γ = √(Ω² + γ/M)` on the `k`-th closed-form zero of
/// `branch`, using the separation implied by the symmetric attachment.
pub fn tune_epsilon(params: &ModelParams, branch: Branch, k: usize) -> Result<f64> {
    let derived = derived_quantities(params)?;
    let d = match params.attachment {
        Attachment::SymmetricPair { .. } => derived.separation.unwrap(),
        _ => {
            return Err(Error::UnsupportedGeometry(
                "spectral zeros exist only for a symmetric pair",
            ))
        }
    };
    let (plus, minus) = closed_form_zeros(d, derived.omega_cut)?;
    let set = match branch {
        Branch::Plus => plus,
        Branch::Minus => minus,
        Branch::Single => {
            return Err(Error::UnsupportedGeometry(
                "single branch has no spectral zeros",
            ))
        }
    };
    let omega_e = set.frequency(k).ok_or_else(|| {
        Error::invalid(
            "k",
            alloc::format!("branch has zeros 1..={}", set.zeros.len()),
        )
    })?;
    epsilon_for_frequency(omega_e, params.reduced_gamma())
}

/// `ε = √(ω_E² - γ/M)/Ω₀ - 1` in natural units.
pub fn epsilon_for_frequency(omega_e: f64, gamma: f64) -> Result<f64> {
    let omega_sq = omega_e * omega_e - gamma;
    if !(omega_sq > 0.0) {
        return Err(Error::NoRealSolution { omega_zero: omega_e });
    }
    Ok(math::sqrt(omega_sq) - 1.0)
}

/// Outcome of matching numeric `J₋` zeros against the closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteCalibration {
    pub site: usize,
    /// `(s, worst distance from a numeric zero to the nearest closed-form
    /// zero)` for each candidate; infinite when no zero is resolved.
    pub mismatches: Vec<(usize, f64)>,
}

/// Finds the attachment site `s` whose minus-branch zeros best match the
/// closed form for separation `d`.
pub fn calibrate_site(params: &ModelParams, d: f64, candidates: &[usize]) -> Result<SiteCalibration> {
    let derived = derived_quantities(params)?;
    let (_, expected) = closed_form_zeros(d, derived.omega_cut)?;
    let mut mismatches = Vec::with_capacity(candidates.len());
    for &s in candidates {
        let p = ModelParams {
            attachment: Attachment::SymmetricPair { s },
            ..params.clone()
        };
        let density = spectral_density(&p, Branch::Minus)?;
        let found = locate_zeros_numeric(&density, density.mean_spacing())?.zeros;
        let worst = if found.is_empty() {
            f64::INFINITY
        } else {
            found
                .iter()
                .map(|&f| {
                    expected
                        .zeros
                        .iter()
                        .map(|&(_, w)| math::abs(f - w))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        mismatches.push((s, worst));
    }
    let site = mismatches
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|m| m.0)
        .ok_or(Error::invalid("candidates", "no candidate sites given"))?;
    Ok(SiteCalibration { site, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn closed_form_d9() {
        let cut = 2.0 * core::f64::consts::SQRT_2;
        let (plus, minus) = closed_form_zeros(9.0, cut).unwrap();
        assert_eq!(plus.zeros.len(), 4);
        assert_eq!(minus.zeros.len(), 4);
        assert!(approx(minus.zeros[0].1, 0.96738, 1e-5));
        assert!(approx(plus.zeros[0].1, 0.49115, 1e-5));
        for (k, w) in &minus.zeros {
            let expected = cut * (core::f64::consts::PI * *k as f64 / 9.0).sin();
            assert!(approx(*w, expected, 1e-15));
        }
        assert!(closed_form_zeros(1.0, cut).is_err());
    }

    #[test]
    fn tuned_epsilon_for_d9() {
        let p = ModelParams {
            half_size: 750,
            attachment: Attachment::SymmetricPair { s: 5 },
            ..ModelParams::default()
        };
        let eps = tune_epsilon(&p, Branch::Minus, 1).unwrap();
        assert!((-0.0870..=-0.0850).contains(&eps), "{eps}");
        assert!(approx(eps, -0.0858, 1e-4));
        let tuned = ModelParams { epsilon: eps, ..p.clone() };
        let d = derived_quantities(&tuned).unwrap();
        let (_, minus) = closed_form_zeros(9.0, d.omega_cut).unwrap();
        assert!(approx(d.omega_gamma, minus.zeros[0].1, 1e-12));
    }

    #[test]
    fn epsilon_without_coupling() {
        assert!(approx(epsilon_for_frequency(1.3, 0.0).unwrap(), 0.3, 1e-15));
        assert!(matches!(
            epsilon_for_frequency(0.3, 0.1),
            Err(Error::NoRealSolution { .. })
        ));
    }

    #[test]
    fn tune_rejects_edge_geometry() {
        assert!(tune_epsilon(&ModelParams::default(), Branch::Minus, 1).is_err());
    }

    #[test]
    fn zero_coupling_gives_zero_weights() {
        let p = ModelParams {
            half_size: 20,
            gamma: 0.0,
            ..ModelParams::default()
        };
        let j = spectral_density(&p, Branch::Plus).unwrap();
        assert!(j.lines().iter().all(|l| l.weight == 0.0));
    }

    #[test]
    fn coupling_sum_rule() {
        let p = ModelParams {
            half_size: 30,
            ..ModelParams::default()
        };
        let j = spectral_density(&p, Branch::Plus).unwrap();
        assert!(approx(j.coupling_norm_sq(), 2.0 * 0.01, 1e-12));
        let q = ModelParams {
            attachment: Attachment::SymmetricPair { s: 4 },
            ..p
        };
        for b in [Branch::Plus, Branch::Minus] {
            let j = spectral_density(&q, b).unwrap();
            assert!(approx(j.coupling_norm_sq(), 0.01, 1e-12));
        }
    }

    #[test]
    fn branch_must_match_attachment() {
        let p = ModelParams {
            half_size: 5,
            ..ModelParams::default()
        };
        assert!(effective_bath(&p, Branch::Single).is_err());
        let single = ModelParams {
            attachment: Attachment::SingleEdge,
            ..p
        };
        assert!(effective_bath(&single, Branch::Plus).is_err());
        assert!(effective_bath(&single, Branch::Single).is_ok());
    }

    #[test]
    fn exactly_linear_lines_fit_exactly() {
        let dw = 0.01;
        let c = 0.37;
        let lines = (1..=200)
            .map(|i| {
                let w = i as f64 * dw;
                SpectralLine {
                    omega: w,
                    coupling: 0.0,
                    weight: c * w * dw,
                }
            })
            .collect();
        let j = SpectralDensity::from_lines(lines, Branch::Plus).unwrap();
        let fit = ohmic_fit(&j, 1.0).unwrap();
        assert!(approx(fit.slope, c, 1e-12));
        assert!(fit.relative_residual <= 1e-12, "{}", fit.relative_residual);
    }

    #[test]
    fn ohmic_fit_needs_modes() {
        let lines = (1..=10)
            .map(|i| SpectralLine {
                omega: i as f64,
                coupling: 0.0,
                weight: 1.0,
            })
            .collect();
        let j = SpectralDensity::from_lines(lines, Branch::Plus).unwrap();
        assert!(matches!(
            ohmic_fit(&j, 10.0),
            Err(Error::TooFewModes { .. })
        ));
    }

    fn distant(n: usize, s: usize) -> ModelParams {
        ModelParams {
            half_size: n,
            epsilon: -0.086,
            attachment: Attachment::SymmetricPair { s },
            ..ModelParams::default()
        }
    }

    #[test]
    fn minus_zeros_found_near_closed_form() {
        let j = spectral_density(&distant(150, 5), Branch::Minus).unwrap();
        let found = locate_zeros_numeric(&j, j.mean_spacing()).unwrap();
        assert!(!found.under_resolved);
        let (_, minus) = closed_form_zeros(9.0, 2.0 * core::f64::consts::SQRT_2).unwrap();
        // the band-edge zero is too shallow at this size
        assert_eq!(found.zeros.len(), 3);
        for (z, (_, w)) in found.zeros.iter().zip(&minus.zeros) {
            assert!((z - w).abs() < 2.0 * j.mean_spacing(), "{z} vs {w}");
        }
    }

    #[test]
    fn edge_density_has_no_zeros() {
        let p = ModelParams {
            half_size: 150,
            ..ModelParams::default()
        };
        let j = spectral_density(&p, Branch::Plus).unwrap();
        assert!(locate_zeros_numeric(&j, j.mean_spacing())
            .unwrap()
            .zeros
            .is_empty());
    }

    #[test]
    fn coarse_resolution_is_flagged() {
        let j = spectral_density(&distant(40, 5), Branch::Minus).unwrap();
        assert!(locate_zeros_numeric(&j, 0.01).unwrap().under_resolved);
        assert!(locate_zeros_numeric(&j, 0.0).is_err());
        assert!(locate_zeros_with_floor(&j, 0.01, 1.5).is_err());
    }

    #[test]
    fn calibration_selects_site_five_for_nine_spacings() {
        let cal = calibrate_site(&distant(120, 5), 9.0, &[3, 4, 5, 6, 7]).unwrap();
        assert_eq!(cal.site, 5);
        assert_eq!(cal.mismatches.len(), 5);
        assert_eq!(Attachment::symmetric_for_distance(9).unwrap(), Attachment::SymmetricPair { s: 5 });
    }

    #[test]
    fn shifted_spectra_interlace_bare_chain() {
        // rank-one positive shift: bare[i] <= shifted[i] <= bare[i + 1]
        let p = distant(12, 3);
        let bare_params = ModelParams { gamma: 0.0, ..p.clone() };
        for b in [Branch::Plus, Branch::Minus] {
            let shifted = effective_bath_modes(&p, b).unwrap();
            let bare = effective_bath_modes(&bare_params, b).unwrap();
            let (s, f) = (shifted.frequencies(), bare.frequencies());
            for i in 0..f.len() {
                assert!(f[i] <= s[i] + 1e-12);
                if i + 1 < f.len() {
                    assert!(s[i] <= f[i + 1] + 1e-12);
                }
            }
        }
    }

    #[test]
    fn full_band_minus_density_is_not_ohmic() {
        let j = spectral_density(&distant(150, 5), Branch::Minus).unwrap();
        let top = j.lines().last().unwrap().omega;
        assert!(ohmic_fit(&j, top).unwrap().relative_residual > 0.1);
        let edge = ModelParams {
            half_size: 150,
            ..ModelParams::default()
        };
        let j = spectral_density(&edge, Branch::Plus).unwrap();
        assert!(ohmic_fit(&j, 1.0).unwrap().relative_residual < 0.1);
    }
}
