//! Two-qubit entanglement: concurrence, tangle and entanglement of formation.

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::linalg::{kron, psd_sqrt, real, C64, Mat2, Mat4};
use crate::state::{DensityMatrix, QuantumState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    pub concurrence: f64,
    /// `concurrence²`
    pub tangle: f64,
    pub eof: f64,
}

impl EntanglementReport {
    pub fn of(rho: &DensityMatrix) -> Self {
        let concurrence = concurrence(rho);
        Self {
            concurrence,
            tangle: concurrence * concurrence,
            eof: eof_from_concurrence(concurrence),
        }
    }
}

/// `σ_y ⊗ σ_y`, which is real in the computational basis.
fn spin_flip() -> Mat4 {
    let sy = Mat2::new(real(0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), real(0.0));
    kron(&sy, &sy)
}

/// `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn spin_flipped(rho: &DensityMatrix) -> Mat4 {
    let yy = spin_flip();
    yy * rho.matrix().conjugate() * yy
}

/// `λ₁ − λ₂ − λ₃ − λ₄` from the eigenvalues `μ = λ²`. Eigenvalues at the
/// round-off level of the largest are zeroed first, since the square root
/// would otherwise lift `1e-18` noise to `1e-9`.
fn combine(mu: [f64; 4]) -> f64 {
    let floor = 256.0 * f64::EPSILON * mu.iter().fold(0.0, |m: f64, &x| m.max(x.abs()));
    let mut lambdas = mu.map(|x| if x > floor { x.sqrt() } else { 0.0 });
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0).min(1.0)
}

/// Wootters concurrence, from the spectrum of the Hermitian `√ρ ρ̃ √ρ`
/// (the same as that of `ρρ̃`).
pub fn concurrence(rho: &DensityMatrix) -> f64 {
    let root = psd_sqrt(rho.matrix());
    let h = root * spin_flipped(rho) * root;
    let (values, _) = crate::linalg::hermitian_eigen(&crate::linalg::hermitian_part(&h));
    combine(values)
}

/// Cross-check of [`concurrence`] through a general eigensolver on the
/// non-Hermitian `ρρ̃`. Its eigenvalues carry more round-off (about `1e-8`
/// in the result for pure states). `None` if the Schur iteration fails.
pub fn concurrence_general(rho: &DensityMatrix) -> Option<f64> {
    let product = rho.matrix() * spin_flipped(rho);
    let ev = product.schur().eigenvalues()?;
    Some(combine(core::array::from_fn(|i| ev[i].re)))
}

/// Binary Shannon entropy in bits, with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

pub fn eof_from_concurrence(c: f64) -> f64 {
    let tangle = (c * c).min(1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - tangle).sqrt())).clamp(0.0, 1.0)
}

/// Entanglement of formation in ebits.
pub fn eof(rho: &DensityMatrix) -> f64 {
    eof_from_concurrence(concurrence(rho))
}

/// `⟨target|ρ|target⟩`.
pub fn fidelity_pure(rho: &DensityMatrix, target: &QuantumState) -> f64 {
    let v = target.amplitudes();
    (v.adjoint() * rho.matrix() * v)[(0, 0)].re
}

/// Fidelity with the closest `(|01⟩ + e^{iφ}|10⟩)/√2`, maximized over `φ`:
/// `(ρ₀₁,₀₁ + ρ₁₀,₁₀)/2 + |ρ₀₁,₁₀|`.
///
/// Independent of the relative single-exciton phase, so it is the same in the
/// lab and rotating frames.
pub fn single_exciton_bell_fidelity(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    0.5 * (m[(1, 1)].re + m[(2, 2)].re) + m[(1, 2)].norm_sqr().sqrt()
}
