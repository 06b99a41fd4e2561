//! Phase-diagram, time-series and distance sweeps on top of the fast
//! two-oscillator propagation.

use chainbath::{
    build_bath, build_coupled, classify_extrema, derived_quantities, diagonalize, log_negativity,
    tune_epsilon, Attachment, Branch, CollectiveMoments, DerivedQuantities, EntanglementTrace,
    InitialState, ModelParams, PhaseLabel, SystemEvolution, ThermalBath, TimeKernel,
    TwoModeCovariance,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{model_error, SweepConfig};
use crate::error::{CliError, Result};

/// Time samples handed to one worker. Fixed so that the reduction order, and
/// hence every output bit, does not depend on the thread count.
const CHUNK: usize = 64;

/// Diagonalized model shared read-only by every grid cell.
pub struct Engine {
    params: ModelParams,
    derived: DerivedQuantities,
    evolution: SystemEvolution,
    eigendecompositions: usize,
}

impl Engine {
    pub fn new(params: &ModelParams) -> Result<Self> {
        if params.attachment.oscillator_count() != 2 {
            return Err(CliError::invalid(
                "model.attachment",
                "sweeps need two oscillators",
            ));
        }
        let derived = derived_quantities(params)?;
        let coupled = diagonalize(&build_coupled(params)?)?;
        let bath = diagonalize(&build_bath(params)?)?;
        Ok(Engine {
            params: params.clone(),
            derived,
            evolution: SystemEvolution::new(&coupled, &bath)?,
            eigendecompositions: 2,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn derived(&self) -> &DerivedQuantities {
        &self.derived
    }

    /// Dense eigensolves performed so far (coupled model and bare chain).
    pub fn eigendecompositions(&self) -> usize {
        self.eigendecompositions
    }

    /// Uniform samples over the analysis window, at least
    /// `samples_per_period` per period `π/Ω_γ`.
    pub fn window_times(&self, config: &SweepConfig) -> Vec<f64> {
        let t_rev = self.derived.t_rev;
        let (start, end) = (config.window[0] * t_rev, config.window[1] * t_rev);
        let periods = (end - start) * self.derived.omega_gamma / std::f64::consts::PI;
        let samples = (config.samples_per_period * periods).ceil() as usize + 1;
        chainbath::sample_times(start, end, samples)
    }

    fn thermals(&self, temperatures: &[f64]) -> Result<Vec<ThermalBath>> {
        Ok(temperatures
            .iter()
            .map(|&t| self.evolution.thermal(t))
            .collect::<chainbath::Result<_>>()?)
    }

    /// Runs `per_time` over every instant in parallel chunks and returns the
    /// results in time order.
    fn map_times<T, F>(&self, times: &[f64], per_time: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&TimeKernel) -> Result<T> + Sync,
    {
        let chunks: Vec<Result<Vec<T>>> = times
            .par_chunks(CHUNK)
            .map(|chunk| {
                self.evolution
                    .kernels(chunk)
                    .iter()
                    .map(&per_time)
                    .collect()
            })
            .collect();
        let mut out = Vec::with_capacity(times.len());
        for chunk in chunks {
            out.extend(chunk?);
        }
        Ok(out)
    }
}

fn entanglement(v: nalgebra::DMatrix<f64>) -> Result<(f64, TwoModeCovariance)> {
    let v = TwoModeCovariance::from_slice(&v)?;
    Ok((log_negativity(&v)?.unclamped, v))
}

/// Window statistics of one `(r, T)` cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellStats {
    pub min: f64,
    pub max: f64,
    /// Window mean of `max(0, ℰ_N)`.
    pub mean: f64,
    pub label: PhaseLabel,
}

impl CellStats {
    fn from_values(values: impl Iterator<Item = f64>, tol: f64) -> Self {
        let (mut min, mut max, mut sum, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
        for v in values {
            min = min.min(v);
            max = max.max(v);
            sum += v.max(0.0);
            n += 1;
        }
        CellStats {
            min,
            max,
            mean: sum / n as f64,
            label: classify_extrema(min, max, tol),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    /// Separation in lattice spacings, `d = 2s - 1`.
    pub separation: f64,
    pub site: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetadata {
    pub model: ModelParams,
    pub derived: DerivedQuantities,
    pub window: [f64; 2],
    pub samples: usize,
    pub tol: f64,
    pub eigendecompositions: usize,
    pub calibration: Option<Calibration>,
}

impl RunMetadata {
    fn new(engine: &Engine, config: &SweepConfig, times: &[f64]) -> Self {
        let calibration = match engine.params.attachment {
            Attachment::SymmetricPair { s } => Some(Calibration {
                separation: (2 * s - 1) as f64,
                site: s,
            }),
            _ => None,
        };
        RunMetadata {
            model: engine.params.clone(),
            derived: engine.derived,
            window: [times[0], times[times.len() - 1]],
            samples: times.len(),
            tol: config.tol,
            eigendecompositions: engine.eigendecompositions,
            calibration,
        }
    }
}

/// Long-time entanglement over the `(r, T)` grid. Rows follow `r_grid`,
/// columns `T_grid`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseDiagram {
    pub r_grid: Vec<f64>,
    #[serde(rename = "T_grid")]
    pub temperature_grid: Vec<f64>,
    pub cells: Vec<Vec<CellStats>>,
    pub metadata: RunMetadata,
}

impl PhaseDiagram {
    pub fn e_n(&self) -> Vec<Vec<f64>> {
        self.cells
            .iter()
            .map(|row| row.iter().map(|c| c.mean).collect())
            .collect()
    }

    pub fn labels(&self) -> Vec<Vec<PhaseLabel>> {
        self.cells
            .iter()
            .map(|row| row.iter().map(|c| c.label).collect())
            .collect()
    }
}

pub fn run_phase_diagram(config: &SweepConfig) -> Result<PhaseDiagram> {
    config.validate()?;
    let engine = Engine::new(&config.model)?;
    phase_diagram_with(&engine, config)
}

/// Phase diagram on an already diagonalized model.
pub fn phase_diagram_with(engine: &Engine, config: &SweepConfig) -> Result<PhaseDiagram> {
    let times = engine.window_times(config);
    let thermals = engine.thermals(&config.temperature_grid)?;
    let states: Vec<Vec<InitialState>> = config
        .r_grid
        .iter()
        .map(|&r| {
            config
                .temperature_grid
                .iter()
                .map(|&t| InitialState::new(r, t))
                .collect()
        })
        .collect::<chainbath::Result<_>>()?;
    let (nr, nt) = (config.r_grid.len(), config.temperature_grid.len());
    // values[time][T][r]
    let values = engine.map_times(&times, |kernel| {
        let mut at = Vec::with_capacity(nt);
        for (ti, thermal) in thermals.iter().enumerate() {
            let bath = kernel.bath_part(thermal);
            let row = (0..nr)
                .map(|ri| Ok(entanglement(kernel.with_squeezing(&bath, &states[ri][ti]))?.0))
                .collect::<Result<Vec<f64>>>()?;
            at.push(row);
        }
        Ok(at)
    })?;
    let cells = (0..nr)
        .map(|ri| {
            (0..nt)
                .map(|ti| CellStats::from_values(values.iter().map(|v| v[ti][ri]), config.tol))
                .collect()
        })
        .collect();
    Ok(PhaseDiagram {
        r_grid: config.r_grid.clone(),
        temperature_grid: config.temperature_grid.clone(),
        cells,
        metadata: RunMetadata::new(engine, config, &times),
    })
}

/// One sample of a time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesRow {
    pub t: f64,
    #[serde(rename = "eN")]
    pub e_n: f64,
    #[serde(rename = "dXp2")]
    pub dx_plus_sq: f64,
    #[serde(rename = "dPp2")]
    pub dp_plus_sq: f64,
    #[serde(rename = "dXm2")]
    pub dx_minus_sq: f64,
    #[serde(rename = "dPm2")]
    pub dp_minus_sq: f64,
    /// `½⟨X₋P₋ + P₋X₋⟩`.
    pub xpm: f64,
    /// `⟨H⟩` in units of `ħΩ₀`.
    #[serde(rename = "H")]
    pub energy: f64,
    /// Largest centre-of-mass/relative cross covariance.
    #[serde(skip)]
    pub cross: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub r: f64,
    pub temperature: f64,
    pub rows: Vec<SeriesRow>,
    pub trace: EntanglementTrace,
    pub stats: CellStats,
    pub metadata: RunMetadata,
}

pub fn run_time_series(config: &SweepConfig, r: f64, temperature: f64) -> Result<TimeSeries> {
    config.validate()?;
    let engine = Engine::new(&config.model)?;
    time_series_with(&engine, config, r, temperature)
}

pub fn time_series_with(
    engine: &Engine,
    config: &SweepConfig,
    r: f64,
    temperature: f64,
) -> Result<TimeSeries> {
    let state = InitialState::new(r, temperature)?;
    let thermal = engine.evolution.thermal(temperature)?;
    let energy = engine.evolution.mean_energy(&state, &thermal);
    let times = engine.window_times(config);
    let rows = engine.map_times(&times, |kernel| {
        let (e_n, v) = entanglement(kernel.covariance(&state, &thermal))?;
        let CollectiveMoments {
            dx_plus_sq,
            dp_plus_sq,
            dx_minus_sq,
            dp_minus_sq,
            xp_minus,
            ..
        } = v.collective();
        Ok(SeriesRow {
            t: kernel.time(),
            e_n,
            dx_plus_sq,
            dp_plus_sq,
            dx_minus_sq,
            dp_minus_sq,
            xpm: xp_minus,
            energy,
            cross: v.collective().max_cross(),
        })
    })?;
    let trace = EntanglementTrace::new(
        rows.iter().map(|r| r.t).collect(),
        rows.iter().map(|r| r.e_n).collect(),
    )?;
    let stats = CellStats::from_values(rows.iter().map(|r| r.e_n), config.tol);
    Ok(TimeSeries {
        r,
        temperature,
        rows,
        trace,
        stats,
        metadata: RunMetadata::new(engine, config, &times),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceRow {
    pub site: usize,
    pub separation: f64,
    pub epsilon: f64,
    #[serde(rename = "eN_mean")]
    pub e_n_mean: f64,
    pub label: PhaseLabel,
}

/// Least-squares line `E_N ≈ intercept + slope·d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceScan {
    pub r: f64,
    #[serde(rename = "T")]
    pub temperature: f64,
    pub rows: Vec<DistanceRow>,
    /// Sites with no real detuning onto the first minus-branch zero.
    pub skipped: Vec<usize>,
    pub fit: Option<LinearFit>,
}

fn linear_fit(points: &[(f64, f64)]) -> Option<LinearFit> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Some(LinearFit {
        slope,
        intercept,
        rms_residual: (ss / n).sqrt(),
    })
}

/// Window-mean `E_N` at each symmetric site, retuning `ε` onto the first
/// minus-branch zero of every separation.
pub fn run_distance_scan(
    config: &SweepConfig,
    sites: &[usize],
    r: f64,
    temperature: f64,
) -> Result<DistanceScan> {
    config.validate()?;
    if sites.is_empty() {
        return Err(CliError::invalid("s", "no sites given"));
    }
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &s in sites {
        let mut params = ModelParams {
            attachment: Attachment::SymmetricPair { s },
            ..config.model.clone()
        };
        params.validate().map_err(model_error)?;
        params.epsilon = match tune_epsilon(&params, Branch::Minus, 1) {
            Ok(eps) => eps,
            Err(chainbath::Error::NoRealSolution { .. }) => {
                skipped.push(s);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let cell_config = SweepConfig {
            model: params,
            r_grid: vec![r],
            temperature_grid: vec![temperature],
            ..config.clone()
        };
        let diagram = run_phase_diagram(&cell_config)?;
        let cell = diagram.cells[0][0];
        rows.push(DistanceRow {
            site: s,
            separation: (2 * s - 1) as f64,
            epsilon: cell_config.model.epsilon,
            e_n_mean: cell.mean,
            label: cell.label,
        });
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.separation, r.e_n_mean)).collect();
    Ok(DistanceScan {
        r,
        temperature,
        fit: linear_fit(&points),
        rows,
        skipped,
    })
}
