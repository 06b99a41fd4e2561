//! Sweep configuration: JSON documents layered over a named preset.

use std::fs;
use std::path::{Path, PathBuf};

use chainbath::{Attachment, ModelParams};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum Preset {
    /// Both oscillators on the chain edge, `2N = 2500`.
    #[serde(rename = "ohmic-edge")]
    #[value(name = "ohmic-edge")]
    OhmicEdge,
    /// Oscillators nine spacings apart, `2N = 1500`, `ε = -0.086`.
    #[serde(rename = "distant-9a")]
    #[value(name = "distant-9a")]
    Distant9a,
}

impl Preset {
    pub fn config(self) -> SweepConfig {
        let model = match self {
            Preset::OhmicEdge => ModelParams::default(),
            Preset::Distant9a => ModelParams {
                epsilon: -0.086,
                half_size: 750,
                attachment: Attachment::SymmetricPair { s: 5 },
                ..ModelParams::default()
            },
        };
        SweepConfig {
            preset: Some(self),
            model,
            ..SweepConfig::default()
        }
    }
}

/// Chain sizes: `paper` keeps the configured `N`, `desk` shrinks it to
/// 2N = 300 (edge geometries) or 2N = 400 (symmetric pair).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Profile {
    Desk,
    #[default]
    Paper,
}

pub const DESK_EDGE_HALF_SIZE: usize = 150;
pub const DESK_SYMMETRIC_HALF_SIZE: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    pub model: ModelParams,
    pub r_grid: Vec<f64>,
    #[serde(rename = "T_grid")]
    pub temperature_grid: Vec<f64>,
    /// Analysis window `[t_a, t_b]` as fractions of `t_rev`.
    pub window: [f64; 2],
    /// Samples per period `π/Ω_γ` of the entanglement oscillation.
    pub samples_per_period: f64,
    /// Dead band around zero when labelling phases.
    pub tol: f64,
    pub out_dir: PathBuf,
}

fn grid(start: f64, end: f64, points: usize) -> Vec<f64> {
    chainbath::sample_times(start, end, points)
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            preset: None,
            model: ModelParams::default(),
            r_grid: grid(-2.0, 2.0, 17),
            temperature_grid: grid(0.0, 2.0, 17),
            window: [0.6, 0.95],
            samples_per_period: 40.0,
            tol: 1e-8,
            out_dir: PathBuf::from("out"),
        }
    }
}

/// Prefixes model field names with `model.`.
pub(crate) fn model_error(e: chainbath::Error) -> CliError {
    match e {
        chainbath::Error::InvalidParameter { field, reason } => {
            CliError::invalid(format!("model.{field}"), reason)
        }
        other => other.into(),
    }
}

fn check_grid(field: &str, values: &[f64], min: f64) -> Result<()> {
    if values.is_empty() {
        return Err(CliError::invalid(field, "grid is empty"));
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= min)) {
        return Err(CliError::invalid(
            field,
            format!("entries must be finite and >= {min}, got {v}"),
        ));
    }
    if values.windows(2).any(|w| w[0] > w[1]) {
        return Err(CliError::invalid(field, "grid must be sorted ascending"));
    }
    Ok(())
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate().map_err(model_error)?;
        check_grid("r_grid", &self.r_grid, f64::NEG_INFINITY)?;
        check_grid("T_grid", &self.temperature_grid, 0.0)?;
        let [a, b] = self.window;
        if !(a > 0.0 && a < b && b < 1.0) {
            return Err(CliError::invalid(
                "window",
                format!("need 0 < t_a < t_b < 1 (fractions of t_rev), got [{a}, {b}]"),
            ));
        }
        if !(self.samples_per_period.is_finite() && self.samples_per_period > 0.0) {
            return Err(CliError::invalid("samples_per_period", "must be > 0"));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(CliError::invalid("tol", "must be >= 0"));
        }
        Ok(())
    }

    pub fn with_profile(mut self, profile: Profile) -> Self {
        if profile == Profile::Desk {
            let desk = match self.model.attachment {
                Attachment::SymmetricPair { .. } => DESK_SYMMETRIC_HALF_SIZE,
                _ => DESK_EDGE_HALF_SIZE,
            };
            self.model.half_size = self.model.half_size.min(desk);
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }
}

/// Recursively overlays `top` on `base`. The attachment is replaced whole
/// since its fields depend on its kind.
fn merge(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Object(b), Value::Object(t)) => {
            for (key, value) in t {
                match b.get_mut(&key) {
                    Some(slot) if key != "attachment" => merge(slot, value),
                    _ => {
                        b.insert(key, value);
                    }
                }
            }
        }
        (slot, value) => *slot = value,
    }
}

/// Parses a JSON document; `source` only labels error messages.
///
/// An empty document yields the default configuration. A `preset` key selects
/// the base that the remaining keys override.
pub fn parse_config(text: &str, source: &Path) -> Result<SweepConfig> {
    let malformed = |e| CliError::Malformed {
        path: source.to_path_buf(),
        source: e,
    };
    let doc: Value = if text.trim().is_empty() {
        Value::Object(Map::new())
    } else {
        serde_json::from_str(text).map_err(malformed)?
    };
    if !doc.is_object() {
        return Err(CliError::invalid("<root>", "configuration must be a JSON object"));
    }
    let base = match doc.get("preset") {
        Some(p) => serde_json::from_value::<Preset>(p.clone())
            .map_err(|e| CliError::invalid("preset", e.to_string()))?
            .config(),
        None => SweepConfig::default(),
    };
    let mut merged = serde_json::to_value(&base).expect("configuration serializes");
    merge(&mut merged, doc);
    let config: SweepConfig = serde_json::from_value(merged).map_err(malformed)?;
    config.validate()?;
    Ok(config)
}

/// Reads `path` (if any) and applies a preset override from the command line.
pub fn load_config(path: Option<&Path>, preset: Option<Preset>) -> Result<SweepConfig> {
    let (text, source) = match path {
        Some(p) => (
            fs::read_to_string(p).map_err(|e| CliError::io(p, e))?,
            p.to_path_buf(),
        ),
        None => (String::new(), PathBuf::from("<defaults>")),
    };
    let Some(preset) = preset else {
        return parse_config(&text, &source);
    };
    let mut doc: Value = if text.trim().is_empty() {
        Value::Object(Map::new())
    } else {
        serde_json::from_str(&text).map_err(|e| CliError::Malformed {
            path: source.clone(),
            source: e,
        })?
    };
    if let Value::Object(map) = &mut doc {
        map.insert(
            "preset".into(),
            serde_json::to_value(preset).expect("preset serializes"),
        );
    }
    parse_config(&doc.to_string(), &source)
}
