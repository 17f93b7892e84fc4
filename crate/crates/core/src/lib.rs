//! # qkmi-core
//!
//! Mutual-information estimation with classical (Gaussian RBF) and quantum
//! (simulated IQP fidelity) kernels, plus the three-variable independence test
//! and the seeded experiment harness built on top of it.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`datagen`] | seeded scenarios: `x1, x3 ~ P(v)`, `x2 = φ(x1; e)` |
//! | [`circuit`] | statevector simulation of the IQP encoding, fidelity |
//! | [`kernels`] | RBF and quantum kernels, tanh-shrink, Gram matrices |
//! | [`gram_ops`] | centering, `LDLᵀ` log-determinant, resolvent traces |
//! | [`estimators`] | kernel MI (log-det ratio) and SMI (NOCCO trace) |
//! | [`independence`] | `S(x_i)` scores, verdict and slack |
//! | [`harness`] | trials, cells, sweeps, CSV/JSON reports |
//!
//! ```
//! use qkmi_core::{estimate_mi, gram, KernelSpec, MIConfig};
//!
//! let x = [0.1, 0.7, -0.4, 1.3, 2.0];
//! let y = [0.2, 0.9, -0.3, 1.1, 2.2];
//! let k = KernelSpec::gaussian();
//! let mi = estimate_mi(&gram(&k, &x).unwrap(), &gram(&k, &y).unwrap(), &MIConfig::default()).unwrap();
//! assert!(mi > 0.0);
//! ```

pub mod circuit;
pub mod datagen;
pub mod error;
pub mod estimators;
pub mod gram_ops;
pub mod harness;
pub mod independence;
pub mod input;
pub mod kernels;
pub mod seed;

pub use circuit::{encode_state, fidelity, CircuitConfig, StateVector};
pub use datagen::{
    apply_model, generate_scenario, generate_scenario_with_noise, sample_distribution,
    DistributionFamily, DistributionSpec, ModelForm, ModelSpec, NoiseSource, ScenarioSample,
};
pub use error::{Error, Result};
pub use estimators::{
    clamp_for_report, estimate_mi, estimate_smi, Criterion, EpsilonPolicy, EstimatorConfig,
    MIConfig, SMIConfig,
};
pub use gram_ops::{center, logdet_spd, resolvent_product_trace, CenteredGram};
pub use harness::{
    emit_report, run_cell, run_sweep, Cell, CellResult, ExperimentConfig, ExperimentReport,
    ScenarioCell, TrialRecord,
};
pub use independence::{scores, verdict, ScoreSet, Verdict};
pub use kernels::{activation_apply, gram, kernel_eval, Activation, GramMatrix, KernelSpec};
