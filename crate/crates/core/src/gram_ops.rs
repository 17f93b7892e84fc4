//! Linear-algebra building blocks shared by the estimators.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::kernels::GramMatrix;

/// Pivots at or below this (scaled by the largest diagonal magnitude when it
/// exceeds one) are treated as non-positive.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

/// Diagonal shift applied once after a failed factorization.
pub const JITTER: f64 = 1e-10;

const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Gram matrix after double centering, `H K H` with `H = I - 11ᵀ/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CenteredGram(DMatrix<f64>);

impl CenteredGram {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    /// Wraps a matrix assumed already centered. Used by tests and by callers
    /// that build centered operators themselves.
    pub fn from_matrix_unchecked(m: DMatrix<f64>) -> Self {
        Self(m)
    }
}

/// Double-centers `k`: subtract column means, then row means, then symmetrize.
pub fn center(k: &GramMatrix) -> CenteredGram {
    center_matrix(k.matrix())
}

pub fn center_matrix(k: &DMatrix<f64>) -> CenteredGram {
    let n = k.nrows();
    let mut g = k.clone();
    if n == 0 {
        return CenteredGram(g);
    }
    let inv_n = 1.0 / n as f64;
    for mut col in g.column_iter_mut() {
        let mean = col.sum() * inv_n;
        col.add_scalar_mut(-mean);
    }
    for mut row in g.row_iter_mut() {
        let mean = row.sum() * inv_n;
        row.add_scalar_mut(-mean);
    }
    symmetrize(&mut g);
    CenteredGram(g)
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Shape {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    let scale = m.amax().max(1.0);
    let n = m.nrows();
    for i in 0..n {
        for j in i + 1..n {
            if (m[(i, j)] - m[(j, i)]).abs() > SYMMETRY_TOLERANCE * scale {
                return Err(Error::Parameter(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// `L D Lᵀ` factorization of a symmetric positive-definite matrix.
///
/// Stored packed: strictly-lower part holds `L` (unit diagonal implied), the
/// diagonal holds `D`.
#[derive(Debug, Clone)]
pub struct Ldlt {
    packed: DMatrix<f64>,
}

impl Ldlt {
    /// Factors `m`. On a pivot failure the diagonal is shifted by [`JITTER`]
    /// and the factorization retried once; a second failure is returned as
    /// [`Error::Conditioning`].
    pub fn new(m: &DMatrix<f64>) -> Result<Self> {
        check_symmetric(m)?;
        match Self::factor(m.clone()) {
            Ok(f) => Ok(f),
            Err(_) => {
                let mut shifted = m.clone();
                for i in 0..shifted.nrows() {
                    shifted[(i, i)] += JITTER;
                }
                Self::factor(shifted)
            }
        }
    }

    fn factor(mut a: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        let scale = (0..n).map(|i| a[(i, i)].abs()).fold(1.0, f64::max);
        let tol = PIVOT_TOLERANCE * scale;
        // Scratch row holding L[j, k] * D[k] for the current column.
        let mut ld = vec![0.0; n];
        for j in 0..n {
            let mut d = a[(j, j)];
            for k in 0..j {
                ld[k] = a[(j, k)] * a[(k, k)];
                d -= a[(j, k)] * ld[k];
            }
            if d.is_nan() || d <= tol {
                return Err(Error::Conditioning { index: j, pivot: d });
            }
            a[(j, j)] = d;
            for i in j + 1..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= a[(i, k)] * ld[k];
                }
                a[(i, j)] = s / d;
            }
        }
        Ok(Self { packed: a })
    }

    pub fn n(&self) -> usize {
        self.packed.nrows()
    }

    pub fn log_det(&self) -> f64 {
        self.packed.diagonal().iter().map(|d| d.ln()).sum()
    }

    /// Solves `M X = B` in place of a copy of `b`.
    pub fn solve(&self, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let n = self.n();
        if b.nrows() != n {
            return Err(Error::Shape {
                expected: n,
                got: b.nrows(),
            });
        }
        let l = &self.packed;
        let mut x = b.clone();
        for mut col in x.column_iter_mut() {
            for i in 0..n {
                let mut s = col[i];
                for k in 0..i {
                    s -= l[(i, k)] * col[k];
                }
                col[i] = s;
            }
            for i in 0..n {
                col[i] /= l[(i, i)];
            }
            for i in (0..n).rev() {
                let mut s = col[i];
                for k in i + 1..n {
                    s -= l[(k, i)] * col[k];
                }
                col[i] = s;
            }
        }
        Ok(x)
    }
}

/// `log det m` for symmetric positive-definite `m`.
pub fn logdet_spd(m: &DMatrix<f64>) -> Result<f64> {
    Ok(Ldlt::new(m)?.log_det())
}

/// `R = G (G + λI)⁻¹`, symmetrized (`G` and its resolvent commute).
pub fn regularized_resolvent(g: &CenteredGram, lambda: f64) -> Result<DMatrix<f64>> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Parameter(format!(
            "regularization must be positive, got {lambda}"
        )));
    }
    let n = g.n();
    let shifted = g.matrix() + DMatrix::identity(n, n) * lambda;
    let mut r = Ldlt::new(&shifted)?.solve(g.matrix())?;
    symmetrize(&mut r);
    Ok(r)
}

/// `Tr(R₁ R₂)` with `R_ℓ = G_ℓ (G_ℓ + λI)⁻¹`.
///
/// Both resolvents are symmetric, so the trace is the elementwise product sum,
/// which makes the result exactly invariant under swapping the arguments.
pub fn resolvent_product_trace(g1: &CenteredGram, g2: &CenteredGram, lambda: f64) -> Result<f64> {
    if g1.n() != g2.n() {
        return Err(Error::Shape {
            expected: g1.n(),
            got: g2.n(),
        });
    }
    let r1 = regularized_resolvent(g1, lambda)?;
    let r2 = regularized_resolvent(g2, lambda)?;
    Ok(r1.iter().zip(r2.iter()).map(|(a, b)| a * b).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centering_constant_gram() {
        let k = GramMatrix::from_matrix(DMatrix::from_element(4, 4, 1.0)).unwrap();
        assert!(center(&k).matrix().iter().all(|v| v.abs() < 1e-15));
        let one = GramMatrix::from_matrix(DMatrix::from_element(1, 1, 1.0)).unwrap();
        assert_eq!(center(&one).matrix()[(0, 0)], 0.0);
    }

    #[test]
    fn logdet_simple() {
        assert_eq!(logdet_spd(&DMatrix::identity(4, 4)).unwrap(), 0.0);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 3.0]));
        assert!((logdet_spd(&d).unwrap() - 6f64.ln()).abs() < 1e-15);
        assert!((logdet_spd(&d).unwrap() - 1.791_759_47).abs() < 1e-8);
    }

    #[test]
    fn logdet_reports_offending_pivot() {
        // Second pivot is 1 - 4 = -3.
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        match logdet_spd(&m) {
            Err(Error::Conditioning { index, pivot }) => {
                assert_eq!(index, 1);
                assert!(pivot < 0.0);
            }
            other => panic!("expected conditioning error, got {other:?}"),
        }
        // The one-shot jitter cannot rescue a negative definite matrix.
        let neg = -DMatrix::<f64>::identity(3, 3);
        assert!(matches!(
            logdet_spd(&neg),
            Err(Error::Conditioning { index: 0, .. })
        ));
    }

    #[test]
    fn jitter_rescues_borderline_singular() {
        // Rank-deficient PSD with a pivot that lands within the jitter.
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0 + 5e-13]);
        let ld = logdet_spd(&m).unwrap();
        assert!(ld.is_finite());
    }

    #[test]
    fn rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 2.0]);
        assert!(matches!(logdet_spd(&m), Err(Error::Parameter(_))));
    }

    #[test]
    fn ldlt_solve_roundtrip() {
        let m = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0]);
        let b = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 2.0, 1.0, 3.0, -1.0]);
        let x = Ldlt::new(&m).unwrap().solve(&b).unwrap();
        assert!((&m * &x - &b).amax() < 1e-14);
    }

    #[test]
    fn zero_gram_gives_zero_trace() {
        let z = CenteredGram::from_matrix_unchecked(DMatrix::zeros(5, 5));
        let k = GramMatrix::from_matrix(DMatrix::from_fn(5, 5, |i, j| {
            (-((i as f64 - j as f64).powi(2)) / 2.0).exp()
        }))
        .unwrap();
        let g = center(&k);
        assert_eq!(resolvent_product_trace(&z, &g, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn trace_rejects_bad_lambda_and_shapes() {
        let a = CenteredGram::from_matrix_unchecked(DMatrix::zeros(3, 3));
        let b = CenteredGram::from_matrix_unchecked(DMatrix::zeros(4, 4));
        assert!(matches!(
            resolvent_product_trace(&a, &b, 1.0),
            Err(Error::Shape { .. })
        ));
        assert!(resolvent_product_trace(&a, &a, 0.0).is_err());
    }
}
