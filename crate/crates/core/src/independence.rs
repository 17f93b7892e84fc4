//! Three-variable independence test.
//!
//! `S(x_i)` sums the pairwise estimates between `x_i` and the other two
//! variables. The test succeeds when the target variable has a strictly lower
//! score than both others.

use serde::{Deserialize, Serialize};

use crate::datagen::ScenarioSample;
use crate::error::{Error, Result};
use crate::estimators::EstimatorConfig;
use crate::kernels::{gram, GramMatrix, KernelSpec};

/// Pairwise estimates `I₁₂, I₁₃, I₂₃` and the per-variable scores built from
/// them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreSet {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub i12: f64,
    pub i13: f64,
    pub i23: f64,
}

impl ScoreSet {
    pub fn from_pairwise(i12: f64, i13: f64, i23: f64) -> Self {
        Self {
            s1: i12 + i13,
            s2: i12 + i23,
            s3: i13 + i23,
            i12,
            i13,
            i23,
        }
    }

    pub fn scores(&self) -> [f64; 3] {
        [self.s1, self.s2, self.s3]
    }
}

/// Scores from three prebuilt Grams and a pairwise estimator. The estimator
/// is called exactly three times, once per unordered pair.
pub fn scores_with<F>(grams: [&GramMatrix; 3], mut pairwise: F) -> Result<ScoreSet>
where
    F: FnMut(&GramMatrix, &GramMatrix) -> Result<f64>,
{
    let [k1, k2, k3] = grams;
    let i12 = pairwise(k1, k2)?;
    let i13 = pairwise(k1, k3)?;
    let i23 = pairwise(k2, k3)?;
    Ok(ScoreSet::from_pairwise(i12, i13, i23))
}

pub fn scores(
    sample: &ScenarioSample,
    kernel: &KernelSpec,
    estimator: &EstimatorConfig,
) -> Result<ScoreSet> {
    let [a, b, c] = sample.variables();
    let (k1, k2, k3) = (gram(kernel, a)?, gram(kernel, b)?, gram(kernel, c)?);
    scores_with([&k1, &k2, &k3], |x, y| estimator.estimate(x, y))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub success: bool,
    /// `min(other scores) - S(target)`
    pub slack: f64,
    /// 1-based index of the variable expected to be independent.
    pub target: usize,
    pub scores: ScoreSet,
}

pub const DEFAULT_TARGET: usize = 3;

/// Ties (zero slack) are failures.
pub fn verdict(scores: ScoreSet, target: usize) -> Result<Verdict> {
    if !(1..=3).contains(&target) {
        return Err(Error::Parameter(format!(
            "target variable must be 1, 2 or 3, got {target}"
        )));
    }
    let s = scores.scores();
    let s_min = (0..3)
        .filter(|&i| i != target - 1)
        .map(|i| s[i])
        .fold(f64::INFINITY, f64::min);
    let slack = s_min - s[target - 1];
    Ok(Verdict {
        success: slack > 0.0,
        slack,
        target,
        scores,
    })
}
