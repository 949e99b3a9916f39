//! Pure states and density matrices in the computational basis
//! `|00⟩, |01⟩, |10⟩, |11⟩`.

use alloc::format;

use crate::linalg::{hermitian_eigen, hermiticity_error, real, C64, Mat4, Vec4};
use crate::{Error, Result};

pub const NORM_TOLERANCE: f64 = 1e-9;
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;
pub const TRACE_TOLERANCE: f64 = 1e-8;
pub const POSITIVITY_TOLERANCE: f64 = 1e-9;

/// Index of `|n1 n2⟩` in the computational basis.
pub const fn basis_index(dot1_excited: bool, dot2_excited: bool) -> usize {
    2 * dot1_excited as usize + dot2_excited as usize
}

/// Normalized pure state of the two dots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec4,
}

impl QuantumState {
    pub fn new(amplitudes: [C64; 4]) -> Result<Self> {
        Self::from_vector(Vec4::from(amplitudes))
    }

    pub fn from_vector(amplitudes: Vec4) -> Result<Self> {
        let norm_sqr = amplitudes.norm_squared();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: [C64; 4]) -> Result<Self> {
        let v = Vec4::from(amplitudes);
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NotNormalized { norm_sqr: n * n });
        }
        Ok(Self { amplitudes: v.unscale(n) })
    }

    /// Computational basis state with the given index.
    pub fn basis(index: usize) -> Self {
        assert!(index < 4, "basis index {index} out of range");
        let mut amplitudes = Vec4::zeros();
        amplitudes[index] = real(1.0);
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &Vec4 {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn probabilities(&self) -> [f64; 4] {
        core::array::from_fn(|i| self.amplitudes[i].norm_sqr())
    }
}

/// Hermitian, unit-trace, positive semidefinite 4×4 operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    entries: Mat4,
}

impl DensityMatrix {
    /// Validates all three invariants.
    pub fn new(entries: Mat4) -> Result<Self> {
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidDensityMatrix("non-finite entry".into()));
        }
        let herm = hermiticity_error(&entries);
        if herm > HERMITICITY_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (max |ρ_ij − ρ_ji*| = {herm:e})"
            )));
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > TRACE_TOLERANCE || trace.im.abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace} ≠ 1")));
        }
        let rho = Self { entries };
        let min = rho.min_eigenvalue();
        if min < -POSITIVITY_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(rho)
    }

    pub fn maximally_mixed() -> Self {
        Self { entries: Mat4::identity() * real(0.25) }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.entries[(i, j)]
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigen(&self.entries).0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (self.entries * self.entries).trace().re
    }

    pub fn populations(&self) -> [f64; 4] {
        populations(self)
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn pure_to_density(state: &QuantumState) -> DensityMatrix {
    let v = state.amplitudes();
    DensityMatrix { entries: v * v.adjoint() }
}

/// Diagonal occupations `⟨nm|ρ|nm⟩` in basis order.
pub fn populations(rho: &DensityMatrix) -> [f64; 4] {
    core::array::from_fn(|i| rho.entries[(i, i)].re)
}
