use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::CircuitConfig;
use crate::datagen::{DistributionFamily, ModelForm, NoiseSource};
use crate::error::{Error, Result};
use crate::estimators::{Criterion, EpsilonPolicy, MIConfig, SMIConfig};
use crate::independence::DEFAULT_TARGET;
use crate::kernels::{Activation, KernelSpec, DEFAULT_SIGMA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelFamily {
    Gaussian,
    Quantum,
}

impl FromStr for KernelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "classical" | "rbf" => Ok(KernelFamily::Gaussian),
            "quantum" | "iqp" => Ok(KernelFamily::Quantum),
            other => Err(Error::Config(format!(
                "unknown kernel `{other}` (expected gaussian or quantum)"
            ))),
        }
    }
}

/// Full description of a sweep. Every field that influences the numbers is
/// serialized into reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub distributions: Vec<DistributionFamily>,
    pub variances: Vec<f64>,
    pub models: Vec<ModelForm>,
    pub coefs: Vec<f64>,
    pub samples: Vec<usize>,
    pub kernels: Vec<KernelFamily>,
    /// Activations tried with the quantum kernel.
    pub activations: Vec<Activation>,
    pub criteria: Vec<Criterion>,
    pub sigma: f64,
    pub qubits: usize,
    pub depth: usize,
    pub angle_scale: f64,
    pub mi: MIConfig,
    pub smi: SMIConfig,
    pub trials: usize,
    pub seed: u64,
    pub noise: NoiseSource,
    /// 1-based index of the variable expected to be independent.
    pub target: usize,
    /// Worker threads; 0 uses the global pool. Never affects results.
    #[serde(skip)]
    pub threads: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            distributions: vec![DistributionFamily::Gaussian],
            variances: vec![1.0],
            models: ModelForm::ALL.to_vec(),
            coefs: vec![100.0],
            samples: vec![10, 30, 50],
            kernels: vec![KernelFamily::Gaussian],
            activations: vec![Activation::TanhShrink],
            criteria: vec![Criterion::Mi],
            sigma: DEFAULT_SIGMA,
            qubits: CircuitConfig::default().n_qubits,
            depth: CircuitConfig::default().depth,
            angle_scale: 1.0,
            mi: MIConfig::default(),
            smi: SMIConfig::default(),
            trials: 100,
            seed: 0,
            noise: NoiseSource::Input,
            target: DEFAULT_TARGET,
            threads: 0,
            out: None,
        }
    }
}

fn list<T>(value: &str) -> Result<Vec<T>>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|e| Error::Config(format!("cannot parse `{s}`: {e}")))
        })
        .collect()
}

fn scalar<T>(key: &str, value: &str) -> Result<T>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse::<T>()
        .map_err(|e| Error::Config(format!("{key}: cannot parse `{}`: {e}", value.trim())))
}

fn flag(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "" | "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(Error::Config(format!(
            "{key}: expected a boolean, got `{other}`"
        ))),
    }
}

/// Splits flat `key = value` text into pairs. Blank lines and `#` comments
/// are skipped; a bare key is a boolean flag.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => (line, ""),
        };
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(Error::Config(format!(
                "line {}: expected `key = value`, got `{raw}`",
                lineno + 1
            )));
        }
        out.push((key.to_string(), value.to_string()));
    }
    Ok(out)
}

impl ExperimentConfig {
    pub fn from_key_values(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (k, v) in parse_key_values(text)? {
            cfg.set(&k, &v)?;
        }
        Ok(cfg)
    }

    /// Applies one setting. Keys mirror the CLI flags (`--angle-scale` and
    /// `angle_scale` are both accepted); grid keys take comma-separated lists.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        match key.as_str() {
            "distribution" | "distributions" => self.distributions = list(value)?,
            "variance" | "variances" => self.variances = list(value)?,
            "model" | "models" => self.models = list(value)?,
            "coef" | "coefs" => self.coefs = list(value)?,
            "samples" => self.samples = list(value)?,
            "kernel" | "kernels" => self.kernels = list(value)?,
            "activation" | "activations" => self.activations = list(value)?,
            "criterion" | "criteria" => self.criteria = list(value)?,
            "sigma" => self.sigma = scalar(&key, value)?,
            "qubits" => self.qubits = scalar(&key, value)?,
            "depth" => self.depth = scalar(&key, value)?,
            "angle-scale" => self.angle_scale = scalar(&key, value)?,
            "kappa" => self.mi.kappa = scalar(&key, value)?,
            "epsilon" => {
                self.smi.epsilon = EpsilonPolicy::Constant {
                    value: scalar(&key, value)?,
                }
            }
            "epsilon-decay" => {
                self.smi.epsilon = EpsilonPolicy::Decay {
                    scale: scalar(&key, value)?,
                }
            }
            "trials" => self.trials = scalar(&key, value)?,
            "seed" => self.seed = scalar(&key, value)?,
            "noise-gaussian" => {
                self.noise = if flag(&key, value)? {
                    NoiseSource::StandardGaussian
                } else {
                    NoiseSource::Input
                }
            }
            "target" => self.target = scalar(&key, value)?,
            "threads" => self.threads = scalar(&key, value)?,
            "out" => self.out = Some(PathBuf::from(value.trim())),
            other => return Err(Error::Config(format!("unknown setting `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let empty = [
            ("distribution", self.distributions.is_empty()),
            ("variance", self.variances.is_empty()),
            ("model", self.models.is_empty()),
            ("coef", self.coefs.is_empty()),
            ("samples", self.samples.is_empty()),
            ("kernel", self.kernels.is_empty()),
            ("criterion", self.criteria.is_empty()),
            (
                "activation",
                self.kernels.contains(&KernelFamily::Quantum) && self.activations.is_empty(),
            ),
        ];
        if let Some((name, _)) = empty.iter().find(|(_, e)| *e) {
            return Err(Error::Config(format!("the {name} grid is empty")));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if let Some(v) = self
            .variances
            .iter()
            .find(|v| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::Config(format!("variance must be positive, got {v}")));
        }
        if let Some(n) = self.samples.iter().find(|n| **n < 2) {
            return Err(Error::Config(format!(
                "samples must be at least 2, got {n}"
            )));
        }
        if !(1..=3).contains(&self.target) {
            return Err(Error::Config(format!(
                "target must be 1, 2 or 3, got {}",
                self.target
            )));
        }
        for spec in self.kernel_specs() {
            spec.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        self.mi
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        self.smi
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    /// Kernel variants in sweep order: one per classical entry, one per
    /// activation for each quantum entry.
    pub fn kernel_specs(&self) -> Vec<KernelSpec> {
        let mut out = Vec::new();
        for family in &self.kernels {
            match family {
                KernelFamily::Gaussian => out.push(KernelSpec::Gaussian { sigma: self.sigma }),
                KernelFamily::Quantum => {
                    for &activation in &self.activations {
                        out.push(KernelSpec::Quantum {
                            circuit: CircuitConfig {
                                n_qubits: self.qubits,
                                depth: self.depth,
                            },
                            activation,
                            angle_scale: self.angle_scale,
                        });
                    }
                }
            }
        }
        out
    }
}
