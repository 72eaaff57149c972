//! Dense kernels for small symmetric matrices.
//!
//! Everything here is a pure function of its inputs. Matrices are stored
//! row-major in a flat `Vec<f64>`.

mod cholesky;
mod eigen;

pub use cholesky::{
    cholesky, det_psd, extend_det, extend_log_det, log_det_psd, CholeskyFactor,
    NotPositiveDefinite,
};
pub(crate) use cholesky::{log_det_principal, schur_raw};
pub use eigen::{symmetric_eigen, symmetric_eigen_with, EigenDecomposition, DEFAULT_MAX_SWEEPS};

use crate::error::{Error, Result};
use crate::subset::Subset;

/// Relative pivot tolerance: a pivot or Schur complement at or below
/// `PSD_RELATIVE_TOL * max_diagonal` counts as zero.
pub const PSD_RELATIVE_TOL: f64 = 1e-12;

/// A dense real symmetric matrix.
///
/// Construction symmetrizes by averaging `m[i][j]` and `m[j][i]`, so the
/// stored entries are exactly symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds from row-major entries. `n` must be at least 1.
    pub fn from_row_major(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("matrix dimension must be at least 1"));
        }
        if entries.len() != n * n {
            return Err(Error::input(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|v| !v.is_finite()) {
            return Err(Error::input(format!("non-finite matrix entry {bad}")));
        }
        Ok(Self::symmetrized(n, entries))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != n) {
            return Err(Error::input(format!(
                "row {r} has {} entries, expected {n}",
                row.len()
            )));
        }
        Self::from_row_major(n, rows.concat())
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut data = vec![0.0; n * n];
        for (i, &v) in d.iter().enumerate() {
            data[i * n + i] = v;
        }
        SymmetricMatrix { n, data }
    }

    fn symmetrized(n: usize, mut data: Vec<f64>) -> Self {
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (data[i * n + j] + data[j * n + i]);
                data[i * n + j] = avg;
                data[j * n + i] = avg;
            }
        }
        SymmetricMatrix { n, data }
    }

    /// Wraps entries that are already exactly symmetric (possibly 0x0).
    pub(crate) fn from_symmetric_unchecked(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        SymmetricMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn max_diagonal(&self) -> f64 {
        (0..self.n)
            .map(|i| self.get(i, i))
            .fold(0.0_f64, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Default pivot tolerance for factoring this matrix or any of its
    /// principal submatrices.
    pub fn psd_tolerance(&self) -> f64 {
        PSD_RELATIVE_TOL * self.max_diagonal()
    }

    /// Rows and columns `s` (in sorted index order) of this matrix.
    pub fn principal_submatrix(&self, s: &Subset) -> Result<SymmetricMatrix> {
        s.check_bounds(self.n)?;
        Ok(self.principal_submatrix_unchecked(s.as_slice()))
    }

    pub(crate) fn principal_submatrix_unchecked(&self, idx: &[usize]) -> SymmetricMatrix {
        let m = idx.len();
        let mut data = Vec::with_capacity(m * m);
        for &r in idx {
            let row = self.row(r);
            data.extend(idx.iter().map(|&c| row[c]));
        }
        SymmetricMatrix { n: m, data }
    }
}

/// Free-function form of [`SymmetricMatrix::principal_submatrix`].
pub fn principal_submatrix(m: &SymmetricMatrix, s: &Subset) -> Result<SymmetricMatrix> {
    m.principal_submatrix(s)
}
