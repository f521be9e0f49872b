//! Singular values of `Γ`: the reference every certificate is checked against.

use serde::{Deserialize, Serialize};

use crate::domain::FrameBounds;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::vandermonde::NodeMatrix;

/// `σ_min < SINGULAR_RTOL · σ_max` counts as numerically singular.
pub const SINGULAR_RTOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionFlag {
    Nonsingular,
    NumericallySingular,
}

/// Singular values in descending order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    pub values: Vec<f64>,
    pub condition: ConditionFlag,
}

impl SingularSpectrum {
    pub fn sigma_max(&self) -> f64 {
        self.values[0]
    }

    pub fn sigma_min(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn is_singular(&self) -> bool {
        self.condition == ConditionFlag::NumericallySingular
    }

    /// `(σ_min², σ_max²)`.
    pub fn frame_constants(&self) -> FrameBounds {
        FrameBounds { lower: self.sigma_min().powi(2), upper: self.sigma_max().powi(2) }
    }
}

pub fn spectrum_of(m: &CMatrix) -> Result<SingularSpectrum> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { rows: m.rows(), cols: m.cols() });
    }
    let values = linalg::singular_values(m)?;
    let smax = values[0];
    let smin = *values.last().unwrap();
    let condition =
        if smin < SINGULAR_RTOL * smax { ConditionFlag::NumericallySingular } else { ConditionFlag::Nonsingular };
    Ok(SingularSpectrum { values, condition })
}

pub fn singular_values(gamma: &NodeMatrix) -> Result<SingularSpectrum> {
    spectrum_of(gamma.entries())
}

/// `(A_opt, B_opt) = (σ_min², σ_max²)`.
pub fn optimal_frame_constants(gamma: &NodeMatrix) -> Result<FrameBounds> {
    Ok(singular_values(gamma)?.frame_constants())
}

pub fn is_singular(gamma: &NodeMatrix) -> Result<bool> {
    Ok(singular_values(gamma)?.is_singular())
}
