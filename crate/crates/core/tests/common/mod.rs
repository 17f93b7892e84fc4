//! Independent reference computations for the integration and acceptance
//! tests. Nothing here calls into the code paths it is used to check.

#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qkmi_core::{Activation, CircuitConfig, KernelSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Determinant by cofactor expansion along the first row. Exponential; only
/// for N <= 6 or so.
pub fn cofactor_det(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    match n {
        0 => 1.0,
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => (0..n)
            .map(|j| {
                let minor = m.clone().remove_row(0).remove_column(j);
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[(0, j)] * cofactor_det(&minor)
            })
            .sum(),
    }
}

/// Entrywise double centering: `k_ij - rowmean_i - colmean_j + grandmean`.
pub fn center_four_term(k: &DMatrix<f64>) -> DMatrix<f64> {
    let n = k.nrows();
    let nf = n as f64;
    let row: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| k[(i, j)]).sum::<f64>() / nf)
        .collect();
    let col: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| k[(i, j)]).sum::<f64>() / nf)
        .collect();
    let grand = row.iter().sum::<f64>() / nf;
    DMatrix::from_fn(n, n, |i, j| k[(i, j)] - row[i] - col[j] + grand)
}

pub fn eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect()
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    eigenvalues(m).into_iter().fold(f64::INFINITY, f64::min)
}

/// `Σ (g_i / (g_i + λ))²` over the eigenvalues of a centered Gram.
pub fn smi_spectral(centered: &DMatrix<f64>, lambda: f64) -> f64 {
    eigenvalues(centered)
        .into_iter()
        .map(|g| (g / (g + lambda)).powi(2))
        .sum()
}

/// Random symmetric positive-definite matrix `A Aᵀ + δI`.
pub fn random_spd(n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    &a * a.transpose() + DMatrix::identity(n, n) * 0.1
}

// ---- brute-force circuit -------------------------------------------------

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Kronecker product of single-site operators; `ops[j]` acts on qubit j,
/// which is bit j of the basis index (so it is the rightmost factor for j=0).
fn kron_all(ops: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    ops.iter()
        .rev()
        .fold(DMatrix::from_element(1, 1, c(1.0)), |acc, op| {
            acc.kronecker(op)
        })
}

fn single_site(n: usize, j: usize, op: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let id = DMatrix::<Complex64>::identity(2, 2);
    let ops: Vec<_> = (0..n)
        .map(|q| if q == j { op.clone() } else { id.clone() })
        .collect();
    kron_all(&ops)
}

/// Controlled-U1 on qubits (j, j+1), built as `|0⟩⟨0|⊗I + |1⟩⟨1|⊗U1`.
fn controlled_u1(n: usize, j: usize, lambda: f64) -> DMatrix<Complex64> {
    let id = DMatrix::<Complex64>::identity(2, 2);
    let p0 = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]);
    let p1 = DMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(0.0), c(1.0)]);
    let u1 = DMatrix::from_row_slice(
        2,
        2,
        &[c(1.0), c(0.0), c(0.0), Complex64::from_polar(1.0, lambda)],
    );
    let mut a: Vec<_> = vec![id.clone(); n];
    a[j] = p0;
    let mut b: Vec<_> = vec![id.clone(); n];
    b[j] = p1;
    b[j + 1] = u1;
    kron_all(&a) + kron_all(&b)
}

/// Explicit `2^n x 2^n` unitary of the encoding circuit.
pub fn brute_force_unitary(cfg: &CircuitConfig, lambda: f64) -> DMatrix<Complex64> {
    let n = cfg.n_qubits;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = DMatrix::from_row_slice(2, 2, &[c(s), c(s), c(s), c(-s)]);
    let hn = kron_all(&vec![h; n]);
    let u1 = DMatrix::from_row_slice(
        2,
        2,
        &[c(1.0), c(0.0), c(0.0), Complex64::from_polar(1.0, lambda)],
    );
    let dim = 1 << n;
    let mut layer = DMatrix::<Complex64>::identity(dim, dim);
    for j in 0..n {
        layer = single_site(n, j, &u1) * layer;
    }
    for j in 0..n.saturating_sub(1) {
        layer = controlled_u1(n, j, lambda) * layer;
    }
    let mut u = hn.clone();
    for _ in 0..cfg.depth {
        u = &hn * &layer * u;
    }
    u
}

pub fn brute_force_state(cfg: &CircuitConfig, lambda: f64) -> Vec<Complex64> {
    let u = brute_force_unitary(cfg, lambda);
    u.column(0).iter().copied().collect()
}

/// Random kernel spec drawn from both families.
pub fn random_kernel(rng: &mut impl Rng) -> KernelSpec {
    if rng.random_bool(0.5) {
        KernelSpec::Gaussian {
            sigma: rng.random_range(0.3..3.0),
        }
    } else {
        KernelSpec::Quantum {
            circuit: CircuitConfig {
                n_qubits: rng.random_range(1..=5),
                depth: rng.random_range(1..=3),
            },
            activation: if rng.random_bool(0.5) {
                Activation::TanhShrink
            } else {
                Activation::Identity
            },
            angle_scale: rng.random_range(0.2..3.0),
        }
    }
}

/// Random scalar dataset with a random spread.
pub fn random_data(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let scale = 10f64.powf(rng.random_range(-1.0..2.0));
    (0..n)
        .map(|_| scale * rng.random_range(-1.0..1.0))
        .collect()
}
