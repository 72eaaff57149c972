use super::HomogeneousDistribution;
use crate::error::{Error, Result};
use crate::linalg::{cholesky, log_det_principal, SymmetricMatrix};

/// Slack allowed below zero for the smallest eigenvalue of an ensemble
/// matrix, relative to its largest diagonal entry.
const PSD_EIGEN_SLACK: f64 = 1e-9;

/// k-DPP with ensemble matrix `L`: `w(S) = det L_S` over k-subsets.
#[derive(Clone, Debug)]
pub struct KDpp {
    ensemble: SymmetricMatrix,
    k: usize,
    tol: f64,
}

impl KDpp {
    /// Validates that `L` is PSD (within slack) and that some k-subset has
    /// positive determinant.
    pub fn new(ensemble: SymmetricMatrix, k: usize) -> Result<Self> {
        let n = ensemble.dim();
        if k == 0 || k > n {
            return Err(Error::input(format!(
                "k must lie in [1, {n}] for a {n}x{n} ensemble, got {k}"
            )));
        }
        let tol = ensemble.psd_tolerance();
        if !(ensemble.max_diagonal() > 0.0) {
            return Err(Error::domain("ensemble matrix has no positive diagonal entry"));
        }

        // λ_min(L) >= -δ  <=>  L + δI is positive semidefinite
        let delta = PSD_EIGEN_SLACK * ensemble.max_diagonal();
        let mut shifted = ensemble.as_row_major().to_vec();
        for i in 0..n {
            shifted[i * n + i] += delta;
        }
        let shifted = SymmetricMatrix::from_symmetric_unchecked(n, shifted);
        if cholesky(&shifted, 0.0).is_err() {
            return Err(Error::domain(
                "ensemble matrix is not positive semidefinite (smallest eigenvalue below tolerance)",
            ));
        }

        if crate::init::greedy_order(&ensemble, k).is_none() {
            return Err(Error::domain(format!(
                "every {k}-subset has zero determinant: k exceeds the numerical rank of the ensemble"
            )));
        }
        Ok(KDpp { ensemble, k, tol })
    }

    /// Volume-sampling form: `L = X Xᵀ` for feature rows `X`.
    pub fn from_features(rows: &[Vec<f64>], k: usize) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::input("feature rows have differing lengths"));
        }
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                g[i * n + j] = v;
                g[j * n + i] = v;
            }
        }
        Self::new(SymmetricMatrix::from_row_major(n, g)?, k)
    }

    pub fn ensemble(&self) -> &SymmetricMatrix {
        &self.ensemble
    }

    /// Pivot tolerance below which a principal minor counts as zero.
    pub fn tolerance(&self) -> f64 {
        self.tol
    }
}

impl HomogeneousDistribution for KDpp {
    fn ground_size(&self) -> usize {
        self.ensemble.dim()
    }

    fn degree(&self) -> usize {
        self.k
    }

    fn log_mass_unchecked(&self, indices: &[usize]) -> f64 {
        log_det_principal(&self.ensemble, indices, self.tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_indefinite_and_rank_deficient() {
        let indefinite = SymmetricMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(KDpp::new(indefinite, 1), Err(Error::Domain(_))));

        let rank1 = SymmetricMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(KDpp::new(rank1.clone(), 1).is_ok());
        assert!(matches!(KDpp::new(rank1, 2), Err(Error::Domain(_))));

        assert!(matches!(KDpp::new(SymmetricMatrix::identity(3), 0), Err(Error::Input(_))));
        assert!(matches!(KDpp::new(SymmetricMatrix::identity(3), 4), Err(Error::Input(_))));
    }

    #[test]
    fn features_give_gram_determinants() {
        let x = vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![1.0, 1.0]];
        let d = KDpp::from_features(&x, 2).unwrap();
        // rows 0 and 1 are orthogonal: det = |x0|² |x1|² = 4
        let s = crate::subset::Subset::from_sorted(vec![0, 1]);
        assert!((d.mass(&s).unwrap() - 4.0).abs() < 1e-12);
    }
}
