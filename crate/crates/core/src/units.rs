//! Unit conversions.
//!
//! Hamiltonians are written in meV and times in ps, so every phase is
//! `E·t/ħ` with ħ in meV·ps. All conversions go through [`hbar_mev_ps`].

use core::f64::consts::TAU;

const HBAR_MEV_PS: f64 = 0.658_211_956_9;

/// Reduced Planck constant in meV·ps (CODATA 2018).
#[inline]
pub const fn hbar_mev_ps() -> f64 {
    HBAR_MEV_PS
}

/// Angular frequency in rad/ps of an energy in meV.
#[inline]
pub fn angular_frequency(energy_mev: f64) -> f64 {
    energy_mev / hbar_mev_ps()
}

/// Time in ps expressed in inverse-energy units (meV⁻¹), i.e. `t/ħ`.
#[inline]
pub fn ps_to_inverse_mev(t_ps: f64) -> f64 {
    t_ps / hbar_mev_ps()
}

#[inline]
pub fn inverse_mev_to_ps(t: f64) -> f64 {
    t * hbar_mev_ps()
}

/// Period `2πħ/E` in ps of an oscillation at energy `E` (meV).
#[inline]
pub fn period_ps(energy_mev: f64) -> f64 {
    TAU * hbar_mev_ps() / energy_mev
}
