//! Physical parameters and laser schedules.

use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Constants of the two-dot + laser system.
///
/// Energies are in meV, decay rates in ps⁻¹. The half Rabi frequencies
/// `Ω′ᵢ = Ωᵢ/2` and the detunings `δᵢ = ωᵢ − ω_l` are derived on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Ground-state energy; a global offset with no observable effect.
    pub omega0: f64,
    /// Exciton creation energy of dot 1.
    pub omega1: f64,
    /// Exciton creation energy of dot 2.
    pub omega2: f64,
    /// Förster (transition dipole-dipole) coupling.
    pub v_forster: f64,
    /// Biexciton (static dipole-dipole) shift of `|11⟩`.
    pub v_biexciton: f64,
    /// Laser coupling of dot 1.
    pub rabi1: f64,
    /// Laser coupling of dot 2.
    pub rabi2: f64,
    /// Laser frequency as an energy.
    pub omega_laser: f64,
    /// Spontaneous emission rate of dot 1 (ps⁻¹).
    pub gamma1: f64,
    /// Spontaneous emission rate of dot 2 (ps⁻¹).
    pub gamma2: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            omega0: 0.0,
            omega1: 1.0,
            omega2: 1.0,
            v_forster: 0.0,
            v_biexciton: 0.0,
            rabi1: 0.0,
            rabi2: 0.0,
            omega_laser: 1.0,
            gamma1: 0.0,
            gamma2: 0.0,
        }
    }
}

impl SystemParams {
    /// Undriven, undamped dots with the given laser detunings `δᵢ = ωᵢ − ω_l`.
    pub fn from_detunings(delta1: f64, delta2: f64, omega_laser: f64) -> Self {
        Self {
            omega1: delta1 + omega_laser,
            omega2: delta2 + omega_laser,
            omega_laser,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let energies = [
            ("omega0", self.omega0),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("v_forster", self.v_forster),
            ("v_biexciton", self.v_biexciton),
            ("rabi1", self.rabi1),
            ("rabi2", self.rabi2),
            ("omega_laser", self.omega_laser),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
        ];
        for (field, value) in energies {
            if !value.is_finite() {
                return Err(invalid(field, format!("must be finite, got {value}")));
            }
        }
        for (field, value) in [
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("omega_laser", self.omega_laser),
        ] {
            if value <= 0.0 {
                return Err(invalid(field, format!("must be positive, got {value}")));
            }
        }
        for (field, value) in [("gamma1", self.gamma1), ("gamma2", self.gamma2)] {
            if value < 0.0 {
                return Err(invalid(field, format!("must be non-negative, got {value}")));
            }
        }
        Ok(())
    }

    /// `ω_T = ω0 + ω1 + ω2`.
    pub fn omega_total(&self) -> f64 {
        self.omega0 + self.omega1 + self.omega2
    }

    pub fn detuning1(&self) -> f64 {
        self.omega1 - self.omega_laser
    }

    pub fn detuning2(&self) -> f64 {
        self.omega2 - self.omega_laser
    }

    /// `Ω′₁ = Ω₁/2`.
    pub fn half_rabi1(&self) -> f64 {
        0.5 * self.rabi1
    }

    /// `Ω′₂ = Ω₂/2`.
    pub fn half_rabi2(&self) -> f64 {
        0.5 * self.rabi2
    }

    /// Copy with both dot energies moved so the detunings become `delta1`, `delta2`.
    pub fn with_detunings(&self, delta1: f64, delta2: f64) -> Self {
        Self {
            omega1: delta1 + self.omega_laser,
            omega2: delta2 + self.omega_laser,
            ..*self
        }
    }

    /// Copy with `Ω₂ = rabi2` and `Ω₁ = ratio·Ω₂`.
    pub fn with_rabi(&self, rabi2: f64, ratio: f64) -> Self {
        Self {
            rabi1: ratio * rabi2,
            rabi2,
            ..*self
        }
    }

    pub fn laser_off(&self) -> Self {
        Self {
            rabi1: 0.0,
            rabi2: 0.0,
            ..*self
        }
    }

    pub fn without_decay(&self) -> Self {
        Self {
            gamma1: 0.0,
            gamma2: 0.0,
            ..*self
        }
    }
}

fn invalid(field: &'static str, reason: alloc::string::String) -> Error {
    Error::InvalidParameter { field, reason }
}

/// One interval of a piecewise-constant laser envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub t_start: f64,
    pub t_end: f64,
    pub laser_on: bool,
}

/// Square-pulse laser envelope: contiguous segments covering the window.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    segments: Vec<Segment>,
}

impl PulseSchedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidSchedule("no segments".into()));
        }
        for (i, s) in segments.iter().enumerate() {
            if !(s.t_start.is_finite() && s.t_end.is_finite()) {
                return Err(Error::InvalidSchedule(format!("segment {i} has non-finite bounds")));
            }
            if s.t_start >= s.t_end {
                return Err(Error::InvalidSchedule(format!(
                    "segment {i}: t_start {} >= t_end {}",
                    s.t_start, s.t_end
                )));
            }
        }
        for (i, pair) in segments.windows(2).enumerate() {
            if pair[0].t_end != pair[1].t_start {
                return Err(Error::InvalidSchedule(format!(
                    "segments {i} and {} are not contiguous ({} != {})",
                    i + 1,
                    pair[0].t_end,
                    pair[1].t_start
                )));
            }
        }
        Ok(Self { segments })
    }

    /// Laser constantly on or off over `[0, window]`.
    pub fn constant(laser_on: bool, window: f64) -> Result<Self> {
        Self::new(alloc::vec![Segment { t_start: 0.0, t_end: window, laser_on }])
    }

    /// Square pulse on over `[0, duration]`, then off until `window`.
    pub fn square_pulse(duration: f64, window: f64) -> Result<Self> {
        if duration >= window {
            return Self::constant(true, window);
        }
        Self::new(alloc::vec![
            Segment { t_start: 0.0, t_end: duration, laser_on: true },
            Segment { t_start: duration, t_end: window, laser_on: false },
        ])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn t_start(&self) -> f64 {
        self.segments[0].t_start
    }

    pub fn t_end(&self) -> f64 {
        self.segments[self.segments.len() - 1].t_end
    }

    /// Laser state at `t`; segment boundaries belong to the later segment.
    pub fn laser_on_at(&self, t: f64) -> bool {
        self.segments
            .iter()
            .rev()
            .find(|s| t >= s.t_start)
            .unwrap_or(&self.segments[0])
            .laser_on
    }
}
