use std::fmt;

use super::SymmetricMatrix;
use crate::error::{Error, Result};
use crate::subset::Subset;

/// Lower-triangular factor `F` with `F Fᵀ = M`.
#[derive(Clone, Debug, PartialEq)]
pub struct CholeskyFactor {
    n: usize,
    lower: Vec<f64>,
    logdet: f64,
}

/// A pivot fell to or below the tolerance during factorization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NotPositiveDefinite {
    pub pivot_index: usize,
    pub pivot_value: f64,
}

impl fmt::Display for NotPositiveDefinite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "matrix is not positive definite: pivot {} is {:e}",
            self.pivot_index, self.pivot_value
        )
    }
}

impl std::error::Error for NotPositiveDefinite {}

impl CholeskyFactor {
    /// Factor of the 0x0 matrix.
    pub fn empty() -> Self {
        CholeskyFactor {
            n: 0,
            lower: Vec::new(),
            logdet: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[i * self.n + j]
    }

    /// Row-major lower triangle (upper part is zero).
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    /// `ln det M = 2 Σ ln F_ii`.
    pub fn logdet(&self) -> f64 {
        self.logdet
    }

    pub fn det(&self) -> f64 {
        self.logdet.exp()
    }

    /// Solves `F v = b` by forward substitution.
    pub fn solve_lower(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let mut v = b.to_vec();
        for i in 0..self.n {
            let row = &self.lower[i * self.n..i * self.n + i];
            let s: f64 = row.iter().zip(&v[..i]).map(|(a, b)| a * b).sum();
            v[i] = (v[i] - s) / self.lower[i * self.n + i];
        }
        v
    }

    /// Appends one row/column to the factored matrix. The new index goes
    /// last, so the result factors `M` restricted to `S` followed by `j`,
    /// which may differ from sorted order.
    pub(crate) fn bordered(&self, border: &[f64], schur: f64) -> CholeskyFactor {
        let n = self.n + 1;
        let mut lower = vec![0.0; n * n];
        for i in 0..self.n {
            lower[i * n..i * n + self.n].copy_from_slice(&self.lower[i * self.n..(i + 1) * self.n]);
        }
        lower[self.n * n..self.n * n + self.n].copy_from_slice(border);
        let d = schur.sqrt();
        lower[self.n * n + self.n] = d;
        CholeskyFactor {
            n,
            lower,
            logdet: self.logdet + schur.ln(),
        }
    }

    /// `F Fᵀ` as a dense row-major matrix.
    pub fn reconstruct(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..=i.min(j)).map(|p| self.get(i, p) * self.get(j, p)).sum();
            }
        }
        out
    }
}

/// Cholesky factorization. Fails when some pivot is `<= tol`.
pub fn cholesky(m: &SymmetricMatrix, tol: f64) -> Result<CholeskyFactor, NotPositiveDefinite> {
    let n = m.dim();
    let mut lower = vec![0.0; n * n];
    let mut logdet = 0.0;
    factor_into(n, |i, j| m.get(i, j), tol, &mut lower, &mut logdet)?;
    Ok(CholeskyFactor { n, lower, logdet })
}

#[inline]
fn factor_into(
    n: usize,
    entry: impl Fn(usize, usize) -> f64,
    tol: f64,
    lower: &mut [f64],
    logdet: &mut f64,
) -> Result<(), NotPositiveDefinite> {
    *logdet = 0.0;
    for j in 0..n {
        let mut d = entry(j, j);
        for p in 0..j {
            d -= lower[j * n + p] * lower[j * n + p];
        }
        if !(d > tol) {
            return Err(NotPositiveDefinite {
                pivot_index: j,
                pivot_value: d,
            });
        }
        let djj = d.sqrt();
        lower[j * n + j] = djj;
        *logdet += d.ln();
        for i in (j + 1)..n {
            let mut s = entry(i, j);
            for p in 0..j {
                s -= lower[i * n + p] * lower[j * n + p];
            }
            lower[i * n + j] = s / djj;
        }
    }
    Ok(())
}

/// `ln det M` for a symmetric matrix, `-inf` if factorization fails at `tol`.
pub fn log_det_psd(m: &SymmetricMatrix, tol: f64) -> f64 {
    match cholesky(m, tol) {
        Ok(f) => f.logdet,
        Err(_) => f64::NEG_INFINITY,
    }
}

/// `det M` for a PSD matrix, with singular or indefinite input mapped to 0.
/// The empty matrix has determinant 1.
pub fn det_psd(m: &SymmetricMatrix) -> f64 {
    log_det_psd(m, m.psd_tolerance()).exp()
}

/// `ln det L_S` without materializing the submatrix.
pub(crate) fn log_det_principal(l: &SymmetricMatrix, idx: &[usize], tol: f64) -> f64 {
    let k = idx.len();
    let mut buf = [0.0_f64; 64];
    let mut heap;
    let lower: &mut [f64] = if k * k <= buf.len() {
        &mut buf[..k * k]
    } else {
        heap = vec![0.0; k * k];
        &mut heap
    };
    let mut logdet = 0.0;
    match factor_into(k, |i, j| l.get(idx[i], idx[j]), tol, lower, &mut logdet) {
        Ok(()) => logdet,
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Schur complement `M_jj - vᵀv` with `F v = M_{S,j}`, plus `v`.
fn schur_extension(
    m: &SymmetricMatrix,
    factor: &CholeskyFactor,
    s: &Subset,
    j: usize,
) -> Result<(f64, Vec<f64>)> {
    if factor.dim() != s.len() {
        return Err(Error::input(format!(
            "factor has dimension {} but subset has {} elements",
            factor.dim(),
            s.len()
        )));
    }
    s.check_bounds(m.dim())?;
    if j >= m.dim() {
        return Err(Error::input(format!(
            "index {j} out of range for a {0}x{0} matrix",
            m.dim()
        )));
    }
    if s.contains(j) {
        return Err(Error::input(format!("index {j} is already in {s}")));
    }
    Ok(schur_raw(m, factor, s.as_slice(), j))
}

/// Unchecked Schur extension where `order` lists the factored indices in
/// the row order of `factor`.
pub(crate) fn schur_raw(
    m: &SymmetricMatrix,
    factor: &CholeskyFactor,
    order: &[usize],
    j: usize,
) -> (f64, Vec<f64>) {
    let col: Vec<f64> = order.iter().map(|&r| m.get(r, j)).collect();
    let v = factor.solve_lower(&col);
    let schur = m.get(j, j) - v.iter().map(|x| x * x).sum::<f64>();
    (schur, v)
}

/// `ln det M_{S+j}` from the factor of `M_S`, using the full matrix's PSD
/// tolerance on the Schur complement. Also returns the bordered factor
/// (with `j` appended last) when the extension is positive.
pub fn extend_log_det(
    m: &SymmetricMatrix,
    factor: &CholeskyFactor,
    s: &Subset,
    j: usize,
) -> Result<(f64, Option<CholeskyFactor>)> {
    let (schur, v) = schur_extension(m, factor, s, j)?;
    if schur > m.psd_tolerance() {
        let next = factor.bordered(&v, schur);
        Ok((next.logdet, Some(next)))
    } else {
        Ok((f64::NEG_INFINITY, None))
    }
}

/// `det M_{S+j} = det M_S · (M_jj - vᵀv)`, or 0 when the Schur complement
/// is at or below tolerance.
pub fn extend_det(m: &SymmetricMatrix, factor: &CholeskyFactor, s: &Subset, j: usize) -> Result<f64> {
    extend_log_det(m, factor, s, j).map(|(ld, _)| ld.exp())
}
