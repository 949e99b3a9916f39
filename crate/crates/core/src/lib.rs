//! Simulation core for two Förster-coupled quantum dots driven by a single
//! detuned laser.
//!
//! The laser Stark-shifts two initially non-resonant excitons into resonance,
//! switching their Förster interaction on for as long as it is applied. This
//! crate holds the pure numerical machinery: parameter and state types, the
//! lab-frame and rotating-frame Hamiltonians with their perturbative reduction,
//! a truncated Floquet check of the counter-rotating Stark correction,
//! Schrödinger and Lindblad integrators, and two-qubit entanglement measures.
//!
//! Everything here is `no_std` (with `alloc`); file formats and the command
//! line front end live in the `qdstark` crate.
//!
//! Conventions: energies in meV, times in ps, the basis ordered
//! `|00⟩, |01⟩, |10⟩, |11⟩` where the left digit is dot 1.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dynamics;
pub mod entanglement;
mod error;
pub mod floquet;
pub mod hamiltonian;
pub mod linalg;
pub mod params;
pub mod presets;
pub mod state;
pub mod units;

pub use error::{Error, Result};
pub use params::{PulseSchedule, Segment, SystemParams};
pub use state::{DensityMatrix, QuantumState};
