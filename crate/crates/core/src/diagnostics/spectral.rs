use rand::Rng;

use crate::distributions::{HomogeneousDistribution, KDpp, Subset};
use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, EigenDecomposition, PSD_RELATIVE_TOL};

/// Exact k-DPP sampler from the eigendecomposition of `L`.
///
/// A draw first picks k eigenvectors with probability proportional to the
/// product of their eigenvalues, using the elementary symmetric polynomials
/// of prefixes of the spectrum, and then runs the sequential projection-DPP
/// sampler on the span of the chosen vectors. It shares no code path with
/// the chain beyond the eigensolver.
#[derive(Clone, Debug)]
pub struct SpectralKDppSampler {
    n: usize,
    k: usize,
    eigen: EigenDecomposition,
    /// Eigenvalues scaled by the largest, with insignificant ones zeroed.
    scaled: Vec<f64>,
    /// `esp[l][m] = e_l(scaled[..m])`, for `l <= k`.
    esp: Vec<Vec<f64>>,
}

impl SpectralKDppSampler {
    pub fn new(d: &KDpp) -> Result<Self> {
        let eigen = symmetric_eigen(d.ensemble())?;
        let (n, k) = (d.ground_size(), d.degree());
        let top = eigen.eigenvalues().last().copied().unwrap_or(0.0);
        if !(top > 0.0) {
            return Err(Error::domain("ensemble has no positive eigenvalue"));
        }
        let scaled: Vec<f64> = eigen
            .eigenvalues()
            .iter()
            .map(|&v| {
                let s = v / top;
                if s > PSD_RELATIVE_TOL {
                    s
                } else {
                    0.0
                }
            })
            .collect();
        let significant = scaled.iter().filter(|&&s| s > 0.0).count();
        if significant < k {
            return Err(Error::domain(format!(
                "only {significant} significant eigenvalues for k = {k}"
            )));
        }
        let mut esp = vec![vec![0.0; n + 1]; k + 1];
        esp[0].iter_mut().for_each(|e| *e = 1.0);
        for l in 1..=k {
            for m in 1..=n {
                esp[l][m] = esp[l][m - 1] + scaled[m - 1] * esp[l - 1][m - 1];
            }
        }
        let ek = esp[k][n];
        if !(ek > 0.0 && ek.is_finite()) {
            return Err(Error::domain(format!("degenerate e_{k} of the spectrum: {ek}")));
        }
        Ok(SpectralKDppSampler { n, k, eigen, scaled, esp })
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eigen
    }

    /// Eigenvector indices, each k-set drawn with probability
    /// `∏ λ_i / e_k(λ)`.
    pub fn select_eigenvectors<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut chosen = Vec::with_capacity(self.k);
        let mut l = self.k;
        let mut m = self.n;
        while l > 0 {
            // m >= l always holds because e_l of fewer than l values is 0
            let take = self.scaled[m - 1] * self.esp[l - 1][m - 1] / self.esp[l][m];
            if rng.random::<f64>() < take {
                chosen.push(m - 1);
                l -= 1;
            }
            m -= 1;
        }
        chosen.reverse();
        chosen
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Subset {
        let selected = self.select_eigenvectors(rng);
        let n = self.n;
        // columns of an orthonormal basis, stored column-major
        let mut basis: Vec<Vec<f64>> = selected.iter().map(|&c| self.eigen.eigenvector(c)).collect();
        let mut out = Vec::with_capacity(self.k);
        while !basis.is_empty() {
            let weights: Vec<f64> = (0..n)
                .map(|i| {
                    if out.contains(&i) {
                        0.0
                    } else {
                        basis.iter().map(|v| v[i] * v[i]).sum::<f64>()
                    }
                })
                .collect();
            let total: f64 = weights.iter().sum();
            let mut u = rng.random::<f64>() * total;
            let mut item = n - 1;
            for (i, &w) in weights.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                if u < w {
                    item = i;
                    break;
                }
                u -= w;
                item = i;
            }
            out.push(item);

            // project the basis onto the complement of e_item
            let pivot = (0..basis.len())
                .max_by(|&a, &b| basis[a][item].abs().total_cmp(&basis[b][item].abs()))
                .unwrap();
            let pv = basis.swap_remove(pivot);
            for v in basis.iter_mut() {
                let f = v[item] / pv[item];
                for (x, p) in v.iter_mut().zip(&pv) {
                    *x -= f * p;
                }
            }
            gram_schmidt(&mut basis);
        }
        Subset::new(out).expect("projection sampler never repeats an element")
    }
}

fn gram_schmidt(basis: &mut [Vec<f64>]) {
    for a in 0..basis.len() {
        let (done, rest) = basis.split_at_mut(a);
        let v = &mut rest[0];
        for u in done.iter() {
            let d: f64 = u.iter().zip(v.iter()).map(|(x, y)| x * y).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= d * y;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
        }
    }
}

/// One exact draw from `d`; builds a fresh [`SpectralKDppSampler`].
pub fn spectral_kdpp_sample<R: Rng + ?Sized>(d: &KDpp, rng: &mut R) -> Result<Subset> {
    Ok(SpectralKDppSampler::new(d)?.sample(rng))
}
