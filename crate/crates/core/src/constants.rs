//! Constants whose existence is asserted but whose values are never given.
//!
//! Every such constant defaults to 1 and carries a provenance flag. Checks that
//! depend on them compare exponents or ratios only.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Value chosen by this crate because none is published.
    Unspecified,
    /// Value supplied by the user.
    UserSupplied,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constant {
    pub value: f64,
    pub provenance: Provenance,
}

impl Constant {
    pub const fn unspecified() -> Self {
        Self {
            value: 1.0,
            provenance: Provenance::Unspecified,
        }
    }

    pub const fn user(value: f64) -> Self {
        Self {
            value,
            provenance: Provenance::UserSupplied,
        }
    }
}

/// Cube-diameter constant `alpha_k`, distortion constant `alpha_n`, the
/// modulus growth constant `c_n` and the Hölder pair `gamma_n`, `beta_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsConfig {
    pub alpha_k: Constant,
    pub alpha_n: Constant,
    pub c_n: Constant,
    pub gamma_n: Constant,
    pub beta_n: Constant,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        Self {
            alpha_k: Constant::unspecified(),
            alpha_n: Constant::unspecified(),
            c_n: Constant::unspecified(),
            gamma_n: Constant::unspecified(),
            beta_n: Constant::unspecified(),
        }
    }
}
