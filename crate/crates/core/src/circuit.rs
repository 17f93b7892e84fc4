//! Exact statevector simulation of the IQP encoding circuit
//!
//! `U(θ) = H⊗n · V_D(θ) · H⊗n ··· V_1(θ) · H⊗n`, applied to `|0…0⟩`.
//!
//! Each diagonal layer `V_i(θ)` applies `U1(θ)` to every qubit, then
//! controlled-`U1(θ)` to each neighbouring pair `(j, j+1)`. All gates share
//! the data angle. Qubit `j` is bit `j` of the basis index.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CircuitConfig {
    pub n_qubits: usize,
    pub depth: usize,
}

impl Default for CircuitConfig {
    fn default() -> Self {
        Self {
            n_qubits: 4,
            depth: 2,
        }
    }
}

impl CircuitConfig {
    pub fn new(n_qubits: usize, depth: usize) -> Result<Self> {
        let cfg = Self { n_qubits, depth };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 || self.n_qubits > MAX_QUBITS || self.depth == 0 {
            return Err(Error::Capacity {
                n_qubits: self.n_qubits,
                depth: self.depth,
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Number of phase gates (`U1` plus controlled-`U1`) acting on each basis
    /// state in one diagonal layer.
    fn phase_counts(&self) -> Vec<u32> {
        let pair_mask = (1usize << (self.n_qubits - 1)) - 1;
        (0..self.dim())
            .map(|b| b.count_ones() + (b & (b >> 1) & pair_mask).count_ones())
            .collect()
    }
}

/// A normalized pure state over `2^n` basis amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(n_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if !amplitudes.len().is_power_of_two() {
            return Err(Error::Shape {
                expected: amplitudes.len().next_power_of_two(),
                got: amplitudes.len(),
            });
        }
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨other|self⟩`
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::Shape {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| b.conj() * a)
            .sum())
    }

    fn hadamard_all(&mut self) {
        let dim = self.dim();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut stride = 1;
        while stride < dim {
            for block in (0..dim).step_by(2 * stride) {
                for i in block..block + stride {
                    let a = self.amplitudes[i];
                    let b = self.amplitudes[i + stride];
                    self.amplitudes[i] = (a + b) * s;
                    self.amplitudes[i + stride] = (a - b) * s;
                }
            }
            stride <<= 1;
        }
    }
}

/// Prepares `U_IQP(angle)|0…0⟩`.
pub fn encode_state(config: &CircuitConfig, angle: f64) -> Result<StateVector> {
    config.validate()?;
    if !angle.is_finite() {
        return Err(Error::Parameter(format!(
            "encoding angle must be finite, got {angle}"
        )));
    }
    let counts = config.phase_counts();
    // Phase for each distinct gate count; counts never exceed 2n - 1.
    let phases: Vec<Complex64> = (0..2 * config.n_qubits as u32)
        .map(|k| Complex64::from_polar(1.0, angle * f64::from(k)))
        .collect();

    let mut state = StateVector::zero(config.n_qubits);
    state.hadamard_all();
    for _ in 0..config.depth {
        for (amp, &k) in state.amplitudes.iter_mut().zip(&counts) {
            *amp *= phases[k as usize];
        }
        state.hadamard_all();
    }
    Ok(state)
}

/// `|⟨b|a⟩|²`, clamped to `[0, 1]`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().clamp(0.0, 1.0))
}
