#![allow(dead_code)]

use qdstark::{Artifacts, RawConfig, RunOptions, Scenario};
use qdstark_core::hamiltonian::build_rwa_hamiltonian;
use qdstark_core::linalg::{hermitian_eigen, phase, Mat4, Vec4};
use qdstark_core::units::hbar_mev_ps;
use qdstark_core::SystemParams;

pub fn run(scenario: Scenario, toml: &str) -> qdstark::Result<Artifacts> {
    run_with(scenario, toml, RunOptions::default())
}

pub fn run_with(scenario: Scenario, toml: &str, opts: RunOptions) -> qdstark::Result<Artifacts> {
    qdstark::run(scenario, &RawConfig::parse(scenario, toml)?, &opts)
}

pub fn num(a: &Artifacts, key: &str) -> f64 {
    a.summary.get_f64(key).unwrap_or_else(|| panic!("summary lacks numeric `{key}`"))
}

pub fn column(a: &Artifacts, table: &str, name: &str) -> Vec<f64> {
    a.table(table)
        .unwrap_or_else(|| panic!("no table `{table}`"))
        .column(name)
        .unwrap_or_else(|| panic!("no column `{name}` in `{table}`"))
}

/// `e^{−iH′t/ħ}` of the rotating-frame Hamiltonian, by diagonalization.
pub fn rwa_propagator(params: &SystemParams, t: f64) -> Mat4 {
    let (energies, vectors) = hermitian_eigen(&build_rwa_hamiltonian(params));
    let mut d = Mat4::zeros();
    for (k, e) in energies.iter().enumerate() {
        d[(k, k)] = phase(-e * t / hbar_mev_ps());
    }
    vectors * d * vectors.adjoint()
}

/// Populations at `t` starting from basis state `initial`, with the laser on
/// throughout.
pub fn exact_populations(params: &SystemParams, initial: usize, t: f64) -> [f64; 4] {
    let mut psi = Vec4::zeros();
    psi[initial] = phase(0.0);
    let out = rwa_propagator(params, t) * psi;
    core::array::from_fn(|k| out[k].norm_sqr())
}

/// Populations after `pulse` ps with the laser on followed by `t − pulse` ps
/// with it off.
pub fn exact_pulsed_populations(params: &SystemParams, pulse: f64, t: f64) -> [f64; 4] {
    let mut psi = Vec4::zeros();
    psi[1] = phase(0.0);
    let on = rwa_propagator(params, pulse.min(t)) * psi;
    let out = rwa_propagator(&params.laser_off(), (t - pulse).max(0.0)) * on;
    core::array::from_fn(|k| out[k].norm_sqr())
}
