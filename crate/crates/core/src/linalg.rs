//! Small dense complex linear algebra on the 4-dimensional two-dot space.

use nalgebra::{Matrix2, Matrix4, Vector4};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
pub type Mat4 = Matrix4<C64>;
pub type Vec4 = Vector4<C64>;
pub type Mat2 = Matrix2<C64>;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `e^{iθ}`.
#[inline]
pub fn phase(theta: f64) -> C64 {
    let (s, c) = theta.sin_cos();
    C64::new(c, s)
}

/// Eigenvalues (ascending) and matching eigenvector columns of a Hermitian matrix.
pub fn hermitian_eigen(m: &Mat4) -> ([f64; 4], Mat4) {
    let eig = m.symmetric_eigen();
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut values = [0.0; 4];
    let mut vectors = Mat4::zeros();
    for (k, &i) in order.iter().enumerate() {
        values[k] = eig.eigenvalues[i];
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Largest elementwise deviation `|m_ij − conj(m_ji)|`.
pub fn hermiticity_error(m: &Mat4) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..4 {
        for j in i..4 {
            worst = worst.max(nalgebra::ComplexField::modulus(m[(i, j)] - m[(j, i)].conj()));
        }
    }
    worst
}

/// Hermitian part `(m + m†)/2`.
pub fn hermitian_part(m: &Mat4) -> Mat4 {
    (m + m.adjoint()) * real(0.5)
}

/// Principal square root of a positive semidefinite Hermitian matrix;
/// eigenvalues below zero are clamped.
pub fn psd_sqrt(m: &Mat4) -> Mat4 {
    let (values, vectors) = hermitian_eigen(&hermitian_part(m));
    let mut d = Mat4::zeros();
    for (k, v) in values.iter().enumerate() {
        d[(k, k)] = real(v.max(0.0).sqrt());
    }
    vectors * d * vectors.adjoint()
}

/// Kronecker product `a ⊗ b` of two single-qubit operators; `a` acts on dot 1.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

/// Conjugates `m` by the diagonal unitary `diag(p)`: `m_jk → p_j m_jk p_k*`.
#[inline]
pub fn rotate_diagonal(m: &Mat4, p: &[C64; 4]) -> Mat4 {
    Mat4::from_fn(|j, k| p[j] * m[(j, k)] * p[k].conj())
}
