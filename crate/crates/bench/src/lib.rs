//! Shared fixtures for the criterion benches.

use qkmi_core::{generate_scenario, DistributionFamily, DistributionSpec, ModelForm, ModelSpec};

/// A fixed linear scenario of `n` samples, returned as its three variables.
pub fn fixture(n: usize) -> [Vec<f64>; 3] {
    let dist = DistributionSpec::new(DistributionFamily::Gaussian, 1.0).expect("valid variance");
    let s = generate_scenario(dist, ModelSpec::new(ModelForm::Linear, 100.0), n, 42)
        .expect("valid scenario");
    [s.x1, s.x2, s.x3]
}
