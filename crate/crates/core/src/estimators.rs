//! Kernel estimators of mutual information.
//!
//! * [`estimate_mi`]: the kernel generalized-variance estimator,
//!   `-½ log(det 𝒦 / det 𝒟)` with `𝒦 = [[(K₁+cI)², K₁K₂], [K₂K₁, (K₂+cI)²]]`,
//!   `𝒟` its block diagonal, and `c = nκ/2`.
//! * [`estimate_smi`]: squared-loss MI as the Hilbert-Schmidt norm of the
//!   normalized cross-covariance operator, `Tr(R₁R₂)` on centered Grams.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gram_ops::{center, logdet_spd, resolvent_product_trace, Ldlt};
use crate::kernels::GramMatrix;

/// Values in `[-NEGATIVE_SLACK, 0)` are rounding noise around zero.
pub const NEGATIVE_SLACK: f64 = 1e-8;

pub const DEFAULT_KAPPA: f64 = 0.02;
pub const DEFAULT_EPSILON: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MIConfig {
    pub kappa: f64,
}

impl Default for MIConfig {
    fn default() -> Self {
        Self {
            kappa: DEFAULT_KAPPA,
        }
    }
}

impl MIConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::Parameter(format!(
                "kappa must be positive, got {}",
                self.kappa
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "lowercase")]
pub enum EpsilonPolicy {
    Constant {
        value: f64,
    },
    /// `scale · n^(-1/4)`
    Decay {
        scale: f64,
    },
}

impl EpsilonPolicy {
    pub fn epsilon(&self, n: usize) -> f64 {
        match *self {
            EpsilonPolicy::Constant { value } => value,
            EpsilonPolicy::Decay { scale } => scale * (n as f64).powf(-0.25),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SMIConfig {
    pub epsilon: EpsilonPolicy,
}

impl Default for SMIConfig {
    fn default() -> Self {
        Self {
            epsilon: EpsilonPolicy::Constant {
                value: DEFAULT_EPSILON,
            },
        }
    }
}

impl SMIConfig {
    pub fn constant(value: f64) -> Self {
        Self {
            epsilon: EpsilonPolicy::Constant { value },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let v = match self.epsilon {
            EpsilonPolicy::Constant { value } => value,
            EpsilonPolicy::Decay { scale } => scale,
        };
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Parameter(format!(
                "epsilon must be positive, got {v}"
            )));
        }
        Ok(())
    }
}

fn check_pair(k1: &GramMatrix, k2: &GramMatrix) -> Result<usize> {
    if k1.n() != k2.n() {
        return Err(Error::Shape {
            expected: k1.n(),
            got: k2.n(),
        });
    }
    if k1.n() < 2 {
        return Err(Error::Parameter(format!(
            "estimators need at least 2 samples, got {}",
            k1.n()
        )));
    }
    Ok(k1.n())
}

/// `-½ [log det [[d1, off], [offᵀ, d2]] - log det d1 - log det d2]`.
///
/// Exposed so callers can evaluate the ratio on hand-built blocks.
pub fn mi_from_blocks(d1: &DMatrix<f64>, d2: &DMatrix<f64>, off: &DMatrix<f64>) -> Result<f64> {
    let full = assemble_blocks(d1, d2, off)?;
    Ok(-0.5 * (logdet_spd(&full)? - logdet_spd(d1)? - logdet_spd(d2)?))
}

fn assemble_blocks(
    d1: &DMatrix<f64>,
    d2: &DMatrix<f64>,
    off: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    let (n1, n2) = (d1.nrows(), d2.nrows());
    if off.nrows() != n1 || off.ncols() != n2 {
        return Err(Error::Shape {
            expected: n1 * n2,
            got: off.nrows() * off.ncols(),
        });
    }
    let mut full = DMatrix::zeros(n1 + n2, n1 + n2);
    full.view_mut((0, 0), (n1, n1)).copy_from(d1);
    full.view_mut((n1, n1), (n2, n2)).copy_from(d2);
    full.view_mut((0, n1), (n1, n2)).copy_from(off);
    full.view_mut((n1, 0), (n2, n1)).copy_from(&off.transpose());
    Ok(full)
}

pub fn estimate_mi(k1: &GramMatrix, k2: &GramMatrix, cfg: &MIConfig) -> Result<f64> {
    cfg.validate()?;
    let n = check_pair(k1, k2)?;
    let shift = n as f64 * cfg.kappa / 2.0;
    let eye = DMatrix::<f64>::identity(n, n);
    let a = k1.matrix() + &eye * shift;
    let b = k2.matrix() + &eye * shift;
    let full = assemble_blocks(&(&a * &a), &(&b * &b), &(k1.matrix() * k2.matrix()))?;
    let log_det_full = Ldlt::new(&full)?.log_det();
    let log_det_diag = 2.0 * (logdet_spd(&a)? + logdet_spd(&b)?);
    Ok(-0.5 * (log_det_full - log_det_diag))
}

pub fn estimate_smi(k1: &GramMatrix, k2: &GramMatrix, cfg: &SMIConfig) -> Result<f64> {
    cfg.validate()?;
    let n = check_pair(k1, k2)?;
    let lambda = n as f64 * cfg.epsilon.epsilon(n);
    resolvent_product_trace(&center(k1), &center(k2), lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    #[default]
    Mi,
    Smi,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::Mi => "mi",
            Criterion::Smi => "smi",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mi" => Ok(Criterion::Mi),
            "smi" => Ok(Criterion::Smi),
            other => Err(Error::Config(format!(
                "unknown criterion `{other}` (expected mi or smi)"
            ))),
        }
    }
}

/// Estimator choice plus the settings of both estimators.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub criterion: Criterion,
    pub mi: MIConfig,
    pub smi: SMIConfig,
}

impl EstimatorConfig {
    pub fn with_criterion(criterion: Criterion) -> Self {
        Self {
            criterion,
            ..Self::default()
        }
    }

    pub fn estimate(&self, k1: &GramMatrix, k2: &GramMatrix) -> Result<f64> {
        match self.criterion {
            Criterion::Mi => estimate_mi(k1, k2, &self.mi),
            Criterion::Smi => estimate_smi(k1, k2, &self.smi),
        }
    }
}

/// Presentation clamp: maps rounding-level negatives to zero, leaves
/// everything else untouched.
pub fn clamp_for_report(x: f64) -> f64 {
    if (-NEGATIVE_SLACK..0.0).contains(&x) {
        0.0
    } else {
        x
    }
}
