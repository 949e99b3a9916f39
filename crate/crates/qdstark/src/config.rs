//! Flat TOML scenario configs.
//!
//! Every scenario accepts a fixed set of keys; anything else is rejected by
//! name. Missing keys fall back to the reference parameter set.

use std::fmt;
use std::path::Path;

use qdstark_core::dynamics::Frame;
use qdstark_core::presets;
use qdstark_core::SystemParams;
use serde::Deserialize;

use crate::error::{Result, RunError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Anticrossing,
    RwaPopulations,
    LindbladPopulations,
    EofSweep,
    ResonanceSolve,
    FloquetValidate,
}

const PHYSICS_KEYS: &[&str] = &["delta1", "delta2", "omega_laser", "v_forster", "v_biexciton", "rabi_ratio"];
const RUN_KEYS: &[&str] = &["rabi2", "window_ps", "sample_stride_ps", "dt_ps", "pulse_ps"];

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Anticrossing,
        Scenario::RwaPopulations,
        Scenario::LindbladPopulations,
        Scenario::EofSweep,
        Scenario::ResonanceSolve,
        Scenario::FloquetValidate,
    ];

    /// File stem and CLI subcommand name.
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Anticrossing => "anticrossing",
            Scenario::RwaPopulations => "rwa-populations",
            Scenario::LindbladPopulations => "lindblad-populations",
            Scenario::EofSweep => "eof-sweep",
            Scenario::ResonanceSolve => "resonance-solve",
            Scenario::FloquetValidate => "floquet-validate",
        }
    }

    pub fn keys(self) -> Vec<&'static str> {
        let extra: &[&str] = match self {
            Scenario::Anticrossing => &["omega2_min", "omega2_max", "omega2_points"],
            Scenario::RwaPopulations => RUN_KEYS,
            Scenario::LindbladPopulations => &["gamma1", "gamma2", "frame", "compensate"],
            Scenario::EofSweep => &["gamma2_values", "frame", "compensate"],
            Scenario::ResonanceSolve => &["condition_threshold"],
            Scenario::FloquetValidate => {
                return vec![
                    "random_drives",
                    "detuning_min",
                    "detuning_max",
                    "coupling_ratio_min",
                    "coupling_ratio_max",
                    "omega_l_max",
                    "drives",
                    "include_reference",
                ]
            }
        };
        let mut keys = PHYSICS_KEYS.to_vec();
        if matches!(self, Scenario::LindbladPopulations | Scenario::EofSweep) {
            keys.extend_from_slice(RUN_KEYS);
        }
        keys.extend_from_slice(extra);
        keys
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Every key any scenario understands. Which ones are allowed is decided per
/// scenario before deserializing.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub delta1: Option<f64>,
    pub delta2: Option<f64>,
    pub omega_laser: Option<f64>,
    pub v_forster: Option<f64>,
    pub v_biexciton: Option<f64>,
    pub rabi_ratio: Option<f64>,
    pub rabi2: Option<f64>,
    pub window_ps: Option<f64>,
    pub sample_stride_ps: Option<f64>,
    pub dt_ps: Option<f64>,
    pub pulse_ps: Option<f64>,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub gamma2_values: Option<Vec<f64>>,
    pub frame: Option<String>,
    pub compensate: Option<bool>,
    pub omega2_min: Option<f64>,
    pub omega2_max: Option<f64>,
    pub omega2_points: Option<usize>,
    pub condition_threshold: Option<f64>,
    pub random_drives: Option<usize>,
    pub detuning_min: Option<f64>,
    pub detuning_max: Option<f64>,
    pub coupling_ratio_min: Option<f64>,
    pub coupling_ratio_max: Option<f64>,
    pub omega_l_max: Option<f64>,
    pub drives: Option<Vec<[f64; 3]>>,
    pub include_reference: Option<bool>,
}

impl RawConfig {
    pub fn parse(scenario: Scenario, text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e| RunError::Config(format!("{e}")))?;
        let allowed = scenario.keys();
        for key in table.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(RunError::Config(format!(
                    "unknown key `{key}` for scenario `{scenario}` (accepted: {})",
                    allowed.join(", ")
                )));
            }
        }
        table.try_into().map_err(|e: toml::de::Error| RunError::Config(format!("{e}")))
    }

    pub fn load(scenario: Scenario, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(scenario, &text)
    }
}

fn positive(key: &str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(RunError::Config(format!("`{key}` must be positive and finite, got {value}")))
    }
}

fn non_negative(key: &str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(RunError::Config(format!("`{key}` must be non-negative and finite, got {value}")))
    }
}

fn finite(key: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(RunError::Config(format!("`{key}` must be finite, got {value}")))
    }
}

/// Dot detunings, couplings and drive ratio. `rabi2` is supplied separately
/// by each scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Physics {
    pub delta1: f64,
    pub delta2: f64,
    pub omega_laser: f64,
    pub v_forster: f64,
    pub v_biexciton: f64,
    pub rabi_ratio: f64,
}

impl Physics {
    fn from_raw(raw: &RawConfig) -> Result<Self> {
        Ok(Self {
            delta1: finite("delta1", raw.delta1.unwrap_or(presets::DELTA1))?,
            delta2: finite("delta2", raw.delta2.unwrap_or(presets::DELTA2))?,
            omega_laser: positive("omega_laser", raw.omega_laser.unwrap_or(presets::OMEGA_LASER))?,
            v_forster: finite("v_forster", raw.v_forster.unwrap_or(presets::V_FORSTER))?,
            v_biexciton: finite("v_biexciton", raw.v_biexciton.unwrap_or(0.0))?,
            rabi_ratio: finite("rabi_ratio", raw.rabi_ratio.unwrap_or(presets::RABI_RATIO))?,
        })
    }

    /// Undriven parameters.
    pub fn params(&self) -> SystemParams {
        SystemParams {
            v_forster: self.v_forster,
            v_biexciton: self.v_biexciton,
            ..SystemParams::from_detunings(self.delta1, self.delta2, self.omega_laser)
        }
    }
}

/// Integration window and sampling shared by the trajectory scenarios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub rabi2: f64,
    pub window_ps: f64,
    pub sample_stride_ps: f64,
    /// `None` selects the frame default.
    pub dt_ps: Option<f64>,
    /// `None` derives the half-transfer time.
    pub pulse_ps: Option<f64>,
}

impl RunSettings {
    fn from_raw(raw: &RawConfig, default_stride: f64, default_pulse: Option<f64>) -> Result<Self> {
        let window_ps = positive("window_ps", raw.window_ps.unwrap_or(50.0))?;
        let sample_stride_ps = positive("sample_stride_ps", raw.sample_stride_ps.unwrap_or(default_stride))?;
        if sample_stride_ps > window_ps {
            return Err(RunError::Config(format!(
                "`sample_stride_ps` ({sample_stride_ps}) exceeds `window_ps` ({window_ps})"
            )));
        }
        let pulse_ps = raw.pulse_ps.or(default_pulse).map(|p| positive("pulse_ps", p)).transpose()?;
        if let Some(p) = pulse_ps {
            if p >= window_ps {
                return Err(RunError::Config(format!("`pulse_ps` ({p}) must be shorter than `window_ps` ({window_ps})")));
            }
        }
        Ok(Self {
            rabi2: non_negative("rabi2", raw.rabi2.unwrap_or(presets::RABI2))?,
            window_ps,
            sample_stride_ps,
            dt_ps: raw.dt_ps.map(|d| positive("dt_ps", d)).transpose()?,
            pulse_ps,
        })
    }
}

fn parse_frame(raw: &RawConfig) -> Result<Frame> {
    match raw.frame.as_deref().unwrap_or("lab") {
        "lab" => Ok(Frame::Lab),
        "rwa" => Ok(Frame::Rwa),
        other => Err(RunError::Config(format!("`frame` must be \"lab\" or \"rwa\", got {other:?}"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnticrossingConfig {
    pub physics: Physics,
    pub omega2_min: f64,
    pub omega2_max: f64,
    pub omega2_points: usize,
}

impl AnticrossingConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let omega2_min = non_negative("omega2_min", raw.omega2_min.unwrap_or(0.0))?;
        let omega2_max = finite("omega2_max", raw.omega2_max.unwrap_or(80.0))?;
        let omega2_points = raw.omega2_points.unwrap_or(8001);
        if omega2_points == 0 {
            return Err(RunError::Config("`omega2_points` must be at least 1 (empty grid)".into()));
        }
        if omega2_max < omega2_min || (omega2_points > 1 && omega2_max == omega2_min) {
            return Err(RunError::Config(format!(
                "`omega2_max` ({omega2_max}) must exceed `omega2_min` ({omega2_min})"
            )));
        }
        Ok(Self { physics: Physics::from_raw(raw)?, omega2_min, omega2_max, omega2_points })
    }

    pub fn grid(&self) -> Vec<f64> {
        if self.omega2_points == 1 {
            return vec![self.omega2_min];
        }
        let step = (self.omega2_max - self.omega2_min) / (self.omega2_points - 1) as f64;
        (0..self.omega2_points).map(|k| self.omega2_min + k as f64 * step).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RwaConfig {
    pub physics: Physics,
    pub run: RunSettings,
}

impl RwaConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        Ok(Self { physics: Physics::from_raw(raw)?, run: RunSettings::from_raw(raw, 0.01, None)? })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LindbladConfig {
    pub physics: Physics,
    pub run: RunSettings,
    pub gamma1: f64,
    pub gamma2: f64,
    pub frame: Frame,
    /// Treat `delta1`/`delta2` as rotating-frame targets and shift the lab
    /// detunings to cancel the counter-rotating Stark shifts.
    pub compensate: bool,
}

impl LindbladConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        Ok(Self {
            physics: Physics::from_raw(raw)?,
            run: RunSettings::from_raw(raw, 0.05, Some(presets::ENTANGLING_PULSE_PS))?,
            gamma1: non_negative("gamma1", raw.gamma1.unwrap_or(1.0 / presets::LIFETIMES_PS.0))?,
            gamma2: non_negative("gamma2", raw.gamma2.unwrap_or(1.0 / presets::LIFETIMES_PS.1))?,
            frame: parse_frame(raw)?,
            compensate: raw.compensate.unwrap_or(true),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EofSweepConfig {
    pub physics: Physics,
    pub run: RunSettings,
    /// Dot-2 rates in ascending order; dot 1 decays at `rabi_ratio²` times each.
    pub gamma2_values: Vec<f64>,
    pub frame: Frame,
    pub compensate: bool,
}

impl EofSweepConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let mut gamma2_values = raw
            .gamma2_values
            .clone()
            .ok_or_else(|| RunError::Config("missing required key `gamma2_values`".into()))?;
        if gamma2_values.is_empty() {
            return Err(RunError::Config("`gamma2_values` is empty".into()));
        }
        for &g in &gamma2_values {
            non_negative("gamma2_values", g)?;
        }
        gamma2_values.sort_by(f64::total_cmp);
        gamma2_values.dedup();
        Ok(Self {
            physics: Physics::from_raw(raw)?,
            run: RunSettings::from_raw(raw, 0.05, Some(presets::ENTANGLING_PULSE_PS))?,
            gamma2_values,
            frame: parse_frame(raw)?,
            compensate: raw.compensate.unwrap_or(true),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceConfig {
    pub physics: Physics,
    pub condition_threshold: f64,
}

impl ResonanceConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        Ok(Self {
            physics: Physics::from_raw(raw)?,
            condition_threshold: positive(
                "condition_threshold",
                raw.condition_threshold
                    .unwrap_or(qdstark_core::hamiltonian::DEFAULT_CONDITION_THRESHOLD),
            )?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloquetConfig {
    pub random_drives: usize,
    pub detuning_min: f64,
    pub detuning_max: f64,
    /// Range of `Ω′/δ` for random drives.
    pub coupling_ratio_min: f64,
    pub coupling_ratio_max: f64,
    pub omega_l_max: f64,
    /// Explicit `[omega1, omega_l, rabi]` rows, evaluated first.
    pub drives: Vec<[f64; 3]>,
    /// Adds the two reference dot transitions at the reference drive.
    pub include_reference: bool,
}

impl FloquetConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let detuning_min = positive("detuning_min", raw.detuning_min.unwrap_or(50.0))?;
        let detuning_max = positive("detuning_max", raw.detuning_max.unwrap_or(500.0))?;
        if detuning_max < detuning_min {
            return Err(RunError::Config("`detuning_max` is below `detuning_min`".into()));
        }
        let coupling_ratio_min = non_negative("coupling_ratio_min", raw.coupling_ratio_min.unwrap_or(0.01))?;
        let coupling_ratio_max = non_negative("coupling_ratio_max", raw.coupling_ratio_max.unwrap_or(0.1))?;
        if coupling_ratio_max < coupling_ratio_min {
            return Err(RunError::Config("`coupling_ratio_max` is below `coupling_ratio_min`".into()));
        }
        let omega_l_max = positive("omega_l_max", raw.omega_l_max.unwrap_or(3000.0))?;
        if omega_l_max < 2.0 * detuning_max {
            return Err(RunError::Config(format!(
                "`omega_l_max` ({omega_l_max}) must be at least 2·detuning_max ({})",
                2.0 * detuning_max
            )));
        }
        let drives = raw.drives.clone().unwrap_or_default();
        for d in &drives {
            if !d.iter().all(|x| x.is_finite()) || d[1] <= 0.0 {
                return Err(RunError::Config(format!("bad drive {d:?}: need finite values and omega_l > 0")));
            }
        }
        Ok(Self {
            random_drives: raw.random_drives.unwrap_or(100),
            detuning_min,
            detuning_max,
            coupling_ratio_min,
            coupling_ratio_max,
            omega_l_max,
            drives,
            include_reference: raw.include_reference.unwrap_or(true),
        })
    }
}
