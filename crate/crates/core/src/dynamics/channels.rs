use alloc::format;
use alloc::vec::Vec;

use crate::linalg::{kron, real, Mat2, Mat4};
use crate::params::SystemParams;
use crate::{Error, Result};

/// Spontaneous-emission channel: a lowering operator and its rate (ps⁻¹).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseChannel {
    operator: Mat4,
    rate: f64,
}

impl CollapseChannel {
    /// Rejects negative rates and operators that do not square to zero.
    pub fn new(operator: Mat4, rate: f64) -> Result<Self> {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "rate",
                reason: format!("decay rate must be finite and non-negative, got {rate}"),
            });
        }
        let square = operator * operator;
        if square.norm() > 1e-12 * operator.norm().max(1.0) {
            return Err(Error::InvalidParameter {
                field: "operator",
                reason: "collapse operator is not a lowering operator (L² ≠ 0)".into(),
            });
        }
        Ok(Self { operator, rate })
    }

    pub fn operator(&self) -> &Mat4 {
        &self.operator
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// `L†L`
    pub fn number_operator(&self) -> Mat4 {
        self.operator.adjoint() * self.operator
    }
}

fn lowering() -> Mat2 {
    Mat2::new(real(0.0), real(1.0), real(0.0), real(0.0))
}

/// `σ₁⁻ = |0⟩⟨1| ⊗ I`, lowering dot 1.
pub fn lowering_dot1() -> Mat4 {
    kron(&lowering(), &Mat2::identity())
}

/// `σ₂⁻ = I ⊗ |0⟩⟨1|`, lowering dot 2.
pub fn lowering_dot2() -> Mat4 {
    kron(&Mat2::identity(), &lowering())
}

/// Local exciton decay of each dot, `[σ₁⁻ at Γ₁, σ₂⁻ at Γ₂]`.
pub fn make_collapse_channels(params: &SystemParams) -> Result<Vec<CollapseChannel>> {
    for (field, g) in [("gamma1", params.gamma1), ("gamma2", params.gamma2)] {
        if !(g >= 0.0) {
            return Err(Error::InvalidParameter {
                field,
                reason: format!("decay rate must be non-negative, got {g}"),
            });
        }
    }
    Ok(alloc::vec![
        CollapseChannel::new(lowering_dot1(), params.gamma1)?,
        CollapseChannel::new(lowering_dot2(), params.gamma2)?,
    ])
}
