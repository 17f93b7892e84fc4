//! Seeded synthetic three-variable scenarios.
//!
//! `x1` and `x3` are drawn independently from the input distribution, `x2` is
//! produced from `x1` and an exogenous noise term `e` through a model function.
//! A correct independence test should single out `x3`.

use std::fmt;
use std::str::FromStr;

use rand::distr::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{self, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistributionFamily {
    Gaussian,
    Poisson,
    Laplace,
}

impl DistributionFamily {
    pub const ALL: [DistributionFamily; 3] = [Self::Gaussian, Self::Poisson, Self::Laplace];

    pub fn name(self) -> &'static str {
        match self {
            Self::Gaussian => "gaussian",
            Self::Poisson => "poisson",
            Self::Laplace => "laplace",
        }
    }
}

impl fmt::Display for DistributionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistributionFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(Self::Gaussian),
            "poisson" => Ok(Self::Poisson),
            "laplace" => Ok(Self::Laplace),
            other => Err(Error::Config(format!(
                "unknown distribution `{other}` (expected gaussian, poisson or laplace)"
            ))),
        }
    }
}

/// A zero-mean (Gaussian, Laplace) or rate-`v` (Poisson) distribution with
/// variance `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec {
    pub family: DistributionFamily,
    pub variance: f64,
}

impl DistributionSpec {
    pub fn new(family: DistributionFamily, variance: f64) -> Result<Self> {
        let spec = Self { family, variance };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.variance.is_finite() && self.variance > 0.0) {
            return Err(Error::Parameter(format!(
                "variance must be positive and finite, got {}",
                self.variance
            )));
        }
        Ok(())
    }

    /// Draws `n` i.i.d. values from `rng`.
    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        self.validate()?;
        let v = self.variance;
        let out = match self.family {
            DistributionFamily::Gaussian => {
                let normal =
                    Normal::new(0.0, v.sqrt()).map_err(|e| Error::Parameter(e.to_string()))?;
                normal.sample_iter(rng).take(n).collect()
            }
            DistributionFamily::Poisson => {
                let poisson = Poisson::new(v).map_err(|e| Error::Parameter(e.to_string()))?;
                poisson.sample_iter(rng).take(n).collect()
            }
            DistributionFamily::Laplace => {
                // Inverse CDF; scale b gives variance 2b^2.
                let b = (v / 2.0).sqrt();
                (0..n)
                    .map(|_| {
                        let u: f64 = Open01.sample(rng);
                        let centered = u - 0.5;
                        -b * centered.signum() * (1.0 - 2.0 * centered.abs()).ln()
                    })
                    .collect()
            }
        };
        Ok(out)
    }
}

/// Draws `n` values using a stream seeded from `seed`.
pub fn sample_distribution(spec: DistributionSpec, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Parameter("sample count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    spec.sample_with(n, &mut rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelForm {
    Linear,
    #[serde(rename = "poly")]
    NonlinearPolynomial,
    #[serde(rename = "periodic")]
    NonlinearPeriodic,
}

impl ModelForm {
    pub const ALL: [ModelForm; 3] = [
        Self::Linear,
        Self::NonlinearPolynomial,
        Self::NonlinearPeriodic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::NonlinearPolynomial => "poly",
            Self::NonlinearPeriodic => "periodic",
        }
    }
}

impl fmt::Display for ModelForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(Self::Linear),
            "poly" | "polynomial" => Ok(Self::NonlinearPolynomial),
            "periodic" | "sin" => Ok(Self::NonlinearPeriodic),
            other => Err(Error::Config(format!(
                "unknown model `{other}` (expected linear, poly or periodic)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub form: ModelForm,
    pub coef: f64,
}

impl ModelSpec {
    pub fn new(form: ModelForm, coef: f64) -> Self {
        Self { form, coef }
    }

    pub fn apply(&self, x1: f64, e: f64) -> f64 {
        apply_model(*self, x1, e)
    }
}

pub fn apply_model(model: ModelSpec, x1: f64, e: f64) -> f64 {
    let c = model.coef;
    match model.form {
        ModelForm::Linear => c * x1 + e,
        ModelForm::NonlinearPolynomial => c * x1 * x1 + c * x1 + e,
        ModelForm::NonlinearPeriodic => (c * x1 + e).sin(),
    }
}

/// Where the exogenous noise `e` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseSource {
    /// Same distribution as `x1` and `x3`.
    #[default]
    Input,
    /// Standard normal, regardless of the input distribution.
    StandardGaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioMeta {
    pub distribution: DistributionSpec,
    pub model: ModelSpec,
    pub noise: NoiseSource,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSample {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub x3: Vec<f64>,
    pub e: Vec<f64>,
    pub meta: ScenarioMeta,
}

impl ScenarioSample {
    pub fn len(&self) -> usize {
        self.x1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x1.is_empty()
    }

    pub fn variables(&self) -> [&[f64]; 3] {
        [&self.x1, &self.x2, &self.x3]
    }
}

pub fn generate_scenario(
    dist: DistributionSpec,
    model: ModelSpec,
    n: usize,
    seed: u64,
) -> Result<ScenarioSample> {
    generate_scenario_with_noise(dist, model, NoiseSource::Input, n, seed)
}

pub fn generate_scenario_with_noise(
    dist: DistributionSpec,
    model: ModelSpec,
    noise: NoiseSource,
    n: usize,
    seed: u64,
) -> Result<ScenarioSample> {
    if n < 2 {
        return Err(Error::Parameter(format!(
            "scenario needs at least 2 samples, got {n}"
        )));
    }
    let x1 = dist.sample_with(n, &mut seed::substream(seed, Stream::Cause))?;
    let noise_dist = match noise {
        NoiseSource::Input => dist,
        NoiseSource::StandardGaussian => DistributionSpec::new(DistributionFamily::Gaussian, 1.0)?,
    };
    let e = noise_dist.sample_with(n, &mut seed::substream(seed, Stream::Noise))?;
    let x3 = dist.sample_with(n, &mut seed::substream(seed, Stream::Independent))?;
    let x2 = x1
        .iter()
        .zip(&e)
        .map(|(&a, &b)| model.apply(a, b))
        .collect();
    Ok(ScenarioSample {
        x1,
        x2,
        x3,
        e,
        meta: ScenarioMeta {
            distribution: dist,
            model,
            noise,
            seed,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn gaussian_moments() {
        let spec = DistributionSpec::new(DistributionFamily::Gaussian, 1.0).unwrap();
        let xs = sample_distribution(spec, 100_000, 11).unwrap();
        let (m, v) = moments(&xs);
        assert!(m.abs() <= 0.02, "mean {m}");
        assert!((0.97..=1.03).contains(&v), "variance {v}");
    }

    #[test]
    fn poisson_moments_and_support() {
        let spec = DistributionSpec::new(DistributionFamily::Poisson, 4.0).unwrap();
        let xs = sample_distribution(spec, 100_000, 12).unwrap();
        assert!(xs.iter().all(|x| *x >= 0.0 && x.fract() == 0.0));
        let (m, v) = moments(&xs);
        assert!((m - 4.0).abs() <= 0.08, "mean {m}");
        assert!((v - 4.0).abs() <= 0.08, "variance {v}");
    }

    #[test]
    fn poisson_large_rate() {
        let spec = DistributionSpec::new(DistributionFamily::Poisson, 100.0).unwrap();
        let xs = sample_distribution(spec, 100_000, 5).unwrap();
        let (m, v) = moments(&xs);
        assert!((m - 100.0).abs() <= 2.0, "mean {m}");
        assert!((v - 100.0).abs() <= 3.0, "variance {v}");
    }

    #[test]
    fn laplace_variance() {
        let spec = DistributionSpec::new(DistributionFamily::Laplace, 2.0).unwrap();
        let xs = sample_distribution(spec, 100_000, 13).unwrap();
        let (m, v) = moments(&xs);
        assert!(m.abs() <= 0.03, "mean {m}");
        assert!((v - 2.0).abs() <= 0.06, "variance {v}");
    }

    #[test]
    fn rejects_non_positive_variance() {
        for v in [0.0, -1.0, f64::NAN] {
            assert!(matches!(
                DistributionSpec::new(DistributionFamily::Gaussian, v),
                Err(Error::Parameter(_))
            ));
        }
        let bad = DistributionSpec {
            family: DistributionFamily::Laplace,
            variance: 0.0,
        };
        assert!(sample_distribution(bad, 3, 0).is_err());
    }

    #[test]
    fn model_formulas() {
        assert_eq!(
            apply_model(ModelSpec::new(ModelForm::Linear, 100.0), 1.0, 0.5),
            100.5
        );
        assert_eq!(
            apply_model(
                ModelSpec::new(ModelForm::NonlinearPeriodic, 100.0),
                0.0,
                0.0
            ),
            0.0
        );
        assert_eq!(
            apply_model(
                ModelSpec::new(ModelForm::NonlinearPolynomial, 10.0),
                2.0,
                -1.0
            ),
            59.0
        );
    }

    #[test]
    fn scenario_is_deterministic() {
        let dist = DistributionSpec::new(DistributionFamily::Laplace, 3.0).unwrap();
        let model = ModelSpec::new(ModelForm::NonlinearPolynomial, 10.0);
        let a = generate_scenario(dist, model, 20, 99).unwrap();
        let b = generate_scenario(dist, model, 20, 99).unwrap();
        assert_eq!(a, b);
        let c = generate_scenario(dist, model, 20, 100).unwrap();
        assert_ne!(a.x1, c.x1);
    }

    #[test]
    fn linear_identity() {
        let dist = DistributionSpec::new(DistributionFamily::Gaussian, 1.0).unwrap();
        let s = generate_scenario(dist, ModelSpec::new(ModelForm::Linear, 100.0), 10, 0).unwrap();
        for i in 0..10 {
            assert_eq!(s.x2[i], 100.0 * s.x1[i] + s.e[i]);
            assert!((s.x2[i] - 100.0 * s.x1[i] - s.e[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn independent_variable_is_uncorrelated() {
        let dist = DistributionSpec::new(DistributionFamily::Gaussian, 1.0).unwrap();
        let s =
            generate_scenario(dist, ModelSpec::new(ModelForm::Linear, 1.0), 100_000, 3).unwrap();
        let (m1, v1) = moments(&s.x1);
        let (m3, v3) = moments(&s.x3);
        let cov =
            s.x1.iter()
                .zip(&s.x3)
                .map(|(a, b)| (a - m1) * (b - m3))
                .sum::<f64>()
                / (s.len() as f64 - 1.0);
        let r = cov / (v1 * v3).sqrt();
        assert!(r.abs() < 0.01, "r = {r}");
    }

    #[test]
    fn gaussian_noise_variant() {
        let dist = DistributionSpec::new(DistributionFamily::Poisson, 10.0).unwrap();
        let s = generate_scenario_with_noise(
            dist,
            ModelSpec::new(ModelForm::Linear, 1.0),
            NoiseSource::StandardGaussian,
            50_000,
            8,
        )
        .unwrap();
        // x1, x3 stay integer-valued, e does not
        assert!(s.x1.iter().chain(&s.x3).all(|x| x.fract() == 0.0));
        assert!(s.e.iter().any(|x| x.fract() != 0.0));
        let (m, v) = moments(&s.e);
        assert!(m.abs() < 0.03 && (v - 1.0).abs() < 0.04);
    }

    #[test]
    fn rejects_tiny_scenarios() {
        let dist = DistributionSpec::new(DistributionFamily::Gaussian, 1.0).unwrap();
        assert!(generate_scenario(dist, ModelSpec::new(ModelForm::Linear, 1.0), 1, 0).is_err());
    }
}
