use super::SymmetricMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius mass at which Jacobi stops, relative to `‖M‖_F`.
const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// `M = V diag(λ) Vᵀ` with eigenvalues ascending and eigenvectors stored
/// as the columns of a row-major `n x n` matrix.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    n: usize,
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<f64>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Component `i` of eigenvector `c`.
    #[inline]
    pub fn vector_entry(&self, i: usize, c: usize) -> f64 {
        self.eigenvectors[i * self.n + c]
    }

    pub fn eigenvector(&self, c: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.vector_entry(i, c)).collect()
    }

    /// Row-major `V`.
    pub fn eigenvectors(&self) -> &[f64] {
        &self.eigenvectors
    }

    /// `V diag(λ) Vᵀ`, row-major.
    pub fn reconstruct(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n)
                    .map(|c| self.vector_entry(i, c) * self.eigenvalues[c] * self.vector_entry(j, c))
                    .sum();
            }
        }
        out
    }
}

/// Cyclic Jacobi eigensolver with the default sweep budget.
pub fn symmetric_eigen(m: &SymmetricMatrix) -> Result<EigenDecomposition> {
    symmetric_eigen_with(m, DEFAULT_MAX_SWEEPS)
}

pub fn symmetric_eigen_with(m: &SymmetricMatrix, max_sweeps: usize) -> Result<EigenDecomposition> {
    let n = m.dim();
    let mut a = m.as_row_major().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let target = OFF_DIAGONAL_TOL * m.frobenius_norm();

    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > target {
        if sweeps == max_sweeps {
            return Err(Error::numerical(format!(
                "Jacobi eigensolver did not converge in {max_sweeps} sweeps (n = {n})"
            )));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // rotation angle zeroing a[p][q]
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for r in 0..n {
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    a[r * n + p] = c * arp - s * arq;
                    a[r * n + q] = s * arp + c * arq;
                }
                for r in 0..n {
                    let apr = a[p * n + r];
                    let aqr = a[q * n + r];
                    a[p * n + r] = c * apr - s * aqr;
                    a[q * n + r] = s * apr + c * aqr;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;

                for r in 0..n {
                    let vrp = v[r * n + p];
                    let vrq = v[r * n + q];
                    v[r * n + p] = c * vrp - s * vrq;
                    v[r * n + q] = s * vrp + c * vrq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x * n + x].total_cmp(&a[y * n + y]));
    let eigenvalues = order.iter().map(|&c| a[c * n + c]).collect();
    let mut eigenvectors = vec![0.0; n * n];
    for i in 0..n {
        for (dst, &src) in order.iter().enumerate() {
            eigenvectors[i * n + dst] = v[i * n + src];
        }
    }
    Ok(EigenDecomposition {
        n,
        eigenvalues,
        eigenvectors,
    })
}
