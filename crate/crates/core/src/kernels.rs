//! Classical RBF and quantum fidelity kernels over scalar data.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{encode_state, fidelity, CircuitConfig, StateVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Activation {
    #[serde(rename = "none")]
    Identity,
    #[default]
    TanhShrink,
}

impl Activation {
    pub fn apply(self, x: f64) -> f64 {
        activation_apply(self, x)
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Identity => "none",
            Activation::TanhShrink => "tanh-shrink",
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" | "identity" | "off" => Ok(Activation::Identity),
            "tanh-shrink" | "tanhshrink" | "on" => Ok(Activation::TanhShrink),
            other => Err(Error::Config(format!(
                "unknown activation `{other}` (expected tanh-shrink or none)"
            ))),
        }
    }
}

pub fn activation_apply(a: Activation, x: f64) -> f64 {
    match a {
        Activation::Identity => x,
        Activation::TanhShrink => x - x.tanh(),
    }
}

pub const DEFAULT_SIGMA: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelSpec {
    /// `exp(-(x - y)^2 / (2 sigma^2))`
    Gaussian { sigma: f64 },
    /// Fidelity between IQP-encoded states at angle `angle_scale * activation(x)`.
    Quantum {
        circuit: CircuitConfig,
        activation: Activation,
        angle_scale: f64,
    },
}

impl Default for KernelSpec {
    fn default() -> Self {
        KernelSpec::gaussian()
    }
}

impl KernelSpec {
    pub fn gaussian() -> Self {
        KernelSpec::Gaussian {
            sigma: DEFAULT_SIGMA,
        }
    }

    /// Quantum kernel with the default 4-qubit, depth-2 circuit.
    pub fn quantum(activation: Activation) -> Self {
        KernelSpec::Quantum {
            circuit: CircuitConfig::default(),
            activation,
            angle_scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Gaussian { sigma } => {
                if !(sigma.is_finite() && sigma > 0.0) {
                    return Err(Error::Parameter(format!(
                        "kernel width must be positive, got {sigma}"
                    )));
                }
            }
            KernelSpec::Quantum {
                circuit,
                angle_scale,
                ..
            } => {
                circuit.validate()?;
                if !angle_scale.is_finite() {
                    return Err(Error::Parameter(format!(
                        "angle scale must be finite, got {angle_scale}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Short label used in report rows, e.g. `gaussian` or `quantum`.
    pub fn family(&self) -> &'static str {
        match self {
            KernelSpec::Gaussian { .. } => "gaussian",
            KernelSpec::Quantum { .. } => "quantum",
        }
    }

    /// Activation applied before encoding; `none` for the classical kernel.
    pub fn activation(&self) -> Activation {
        match self {
            KernelSpec::Gaussian { .. } => Activation::Identity,
            KernelSpec::Quantum { activation, .. } => *activation,
        }
    }

    /// A label unique to the kernel's parameters.
    pub fn label(&self) -> String {
        match self {
            KernelSpec::Gaussian { sigma } => format!("gaussian(sigma={sigma})"),
            KernelSpec::Quantum {
                circuit,
                activation,
                angle_scale,
            } => format!(
                "quantum(qubits={},depth={},activation={},angle_scale={})",
                circuit.n_qubits, circuit.depth, activation, angle_scale
            ),
        }
    }
}

fn encoding_angle(activation: Activation, angle_scale: f64, x: f64) -> f64 {
    angle_scale * activation.apply(x)
}

pub fn kernel_eval(spec: &KernelSpec, x: f64, y: f64) -> Result<f64> {
    match *spec {
        KernelSpec::Gaussian { sigma } => {
            let z = (x - y) / sigma;
            Ok((-0.5 * z * z).exp())
        }
        KernelSpec::Quantum {
            circuit,
            activation,
            angle_scale,
        } => {
            let a = encode_state(&circuit, encoding_angle(activation, angle_scale, x))?;
            let b = encode_state(&circuit, encoding_angle(activation, angle_scale, y))?;
            fidelity(&a, &b)
        }
    }
}

/// Symmetric matrix of pairwise kernel values.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(DMatrix<f64>);

impl GramMatrix {
    /// Wraps an arbitrary square matrix. No PSD check is done here; callers
    /// injecting synthetic matrices own that invariant.
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Shape {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        Ok(Self(m))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }
}

/// Builds the Gram matrix of `data` under `spec`.
///
/// The quantum path encodes each point once and evaluates the upper triangle
/// of fidelities. Every entry is computed independently, so the parallel row
/// split has no effect on the result.
pub fn gram(spec: &KernelSpec, data: &[f64]) -> Result<GramMatrix> {
    spec.validate()?;
    if data.len() < 2 {
        return Err(Error::Parameter(format!(
            "Gram matrix needs at least 2 points, got {}",
            data.len()
        )));
    }
    let n = data.len();
    let rows: Vec<Vec<f64>> = match *spec {
        KernelSpec::Gaussian { .. } => (0..n)
            .map(|i| {
                (i..n)
                    .map(|j| kernel_eval(spec, data[i], data[j]))
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?,
        KernelSpec::Quantum {
            circuit,
            activation,
            angle_scale,
        } => {
            let states: Vec<StateVector> = data
                .par_iter()
                .map(|&x| encode_state(&circuit, encoding_angle(activation, angle_scale, x)))
                .collect::<Result<_>>()?;
            (0..n)
                .into_par_iter()
                .map(|i| {
                    (i..n)
                        .map(|j| {
                            if i == j {
                                Ok(1.0)
                            } else {
                                fidelity(&states[i], &states[j])
                            }
                        })
                        .collect::<Result<_>>()
                })
                .collect::<Result<_>>()?
        }
    };
    let mut m = DMatrix::zeros(n, n);
    for (i, row) in rows.into_iter().enumerate() {
        for (offset, v) in row.into_iter().enumerate() {
            let j = i + offset;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(GramMatrix(m))
}
