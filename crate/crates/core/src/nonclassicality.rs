//! Classical-light bound on coincidence matrices and its statistical significance.
//!
//! Classical intensity correlations obey
//! `V_{q,r} = (2/3)·sqrt(Γ_{q,q} Γ_{r,r}) - Γ_{q,r} ≤ 0` for `q ≠ r`, so any
//! positive `V` certifies nonclassical interference. Significance is reported
//! in standard deviations of Poissonian counting noise, estimated either with
//! a parametric bootstrap or by first-order error propagation.
//!
//! Random numbers come from ChaCha20 ([`RNG_ALGORITHM`]). Counts and each
//! bootstrap resample use their own stream of the generator seeded with the
//! caller's seed, so results do not depend on the number of threads.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha), stream = resample index + 1";

/// Default number of bootstrap resamples.
pub const DEFAULT_RESAMPLES: usize = 10_000;

/// Stream used for `sample_counts`; bootstrap resample `k` uses stream `k + 1`.
const COUNT_STREAM: u64 = 0;

#[derive(Debug, Clone, PartialEq)]
pub struct ViolationReport<T: Real> {
    pub v: DMatrix<T>,
    pub sigma: Option<DMatrix<T>>,
    pub sigmas_violated: Option<DMatrix<T>>,
}

impl<T: Real> ViolationReport<T> {
    /// Largest violation in sigma units (zero when none or no sigma available).
    pub fn max_significance(&self) -> T {
        self.sigmas_violated.as_ref().map_or(T::zero(), |s| s.iter().fold(T::zero(), |m, &x| m.max(x)))
    }

    /// Off-diagonal pairs `(q, r)`, `q < r`, with at least `threshold` sigmas.
    pub fn significant_pairs(&self, threshold: T) -> Vec<(usize, usize)> {
        let Some(s) = &self.sigmas_violated else { return Vec::new() };
        let n = s.nrows();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if s[(i, j)] >= threshold {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// `V` for every off-diagonal pair; the diagonal is left at zero.
pub fn violation_values<T: Real>(gamma: &DMatrix<T>) -> DMatrix<T> {
    let n = gamma.nrows();
    let two_thirds = T::lit(2.0 / 3.0);
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            T::zero()
        } else {
            two_thirds * (gamma[(i, i)] * gamma[(j, j)]).sqrt() - gamma[(i, j)]
        }
    })
}

/// Violation matrix without error bars.
pub fn violation_matrix<T: Real>(gamma: &DMatrix<T>) -> ViolationReport<T> {
    ViolationReport { v: violation_values(gamma), sigma: None, sigmas_violated: None }
}

/// Symmetric matrix of photon-pair counts over unordered output pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountMatrix {
    counts: DMatrix<u64>,
    total: u64,
}

impl CountMatrix {
    /// Builds a count matrix from a symmetric array.
    pub fn new(counts: DMatrix<u64>) -> Result<Self> {
        if !counts.is_square() {
            return Err(Error::DimensionMismatch(format!("count matrix is {}x{}", counts.nrows(), counts.ncols())));
        }
        if counts != counts.transpose() {
            return Err(Error::invalid("count matrix must be symmetric"));
        }
        let total = unordered_sum(&counts);
        Ok(CountMatrix { counts, total })
    }

    pub fn counts(&self) -> &DMatrix<u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn dim(&self) -> usize {
        self.counts.nrows()
    }

    /// Counts pooled over branches of sites, like [`crate::correlations::branch_sum`].
    pub fn branch_sum(&self, branches: &[crate::correlations::Branch]) -> Result<CountMatrix> {
        let owner = crate::correlations::branch_owners(self.dim(), branches)?;
        CountMatrix::new(crate::correlations::sum_into_branches(&self.counts, &owner, branches.len(), 0u64))
    }

    /// Counts divided by the total.
    pub fn normalized<T: Real>(&self) -> Result<DMatrix<T>> {
        if self.total == 0 {
            return Err(Error::ZeroCounts);
        }
        let total = T::from_u64(self.total).unwrap();
        Ok(self.counts.map(|c| T::from_u64(c).unwrap() / total))
    }
}

fn unordered_sum(m: &DMatrix<u64>) -> u64 {
    let n = m.nrows();
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]).sum()
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn draw_poisson(mean: f64, rng: &mut ChaCha20Rng) -> u64 {
    if mean > 0.0 {
        // the distribution returns integral floats
        Poisson::new(mean).expect("positive finite mean").sample(rng) as u64
    } else {
        0
    }
}

fn resample(counts: &DMatrix<u64>, rng: &mut ChaCha20Rng) -> DMatrix<u64> {
    let n = counts.nrows();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let k = draw_poisson(counts[(i, j)] as f64, rng);
            out[(i, j)] = k;
            out[(j, i)] = k;
        }
    }
    out
}

/// Draws independent Poisson counts with means `total_expected · Γ` for each
/// unordered output pair.
pub fn sample_counts<T: Real>(gamma: &DMatrix<T>, total_expected: f64, seed: u64) -> Result<CountMatrix> {
    if !(total_expected > 0.0) || !total_expected.is_finite() {
        return Err(Error::invalid("expected count budget must be positive"));
    }
    if !gamma.is_square() {
        return Err(Error::DimensionMismatch("correlation matrix must be square".into()));
    }
    if gamma.iter().any(|g| !(*g >= T::zero())) {
        return Err(Error::invalid("correlation matrix has negative entries"));
    }
    let mut rng = stream_rng(seed, COUNT_STREAM);
    let means = gamma.map(|g| g.as_f64() * total_expected);
    let n = gamma.nrows();
    let mut counts = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let k = draw_poisson(means[(i, j)], &mut rng);
            counts[(i, j)] = k;
            counts[(j, i)] = k;
        }
    }
    CountMatrix::new(counts)
}

fn significance<T: Real>(v: &DMatrix<T>, sigma: &DMatrix<T>) -> DMatrix<T> {
    v.zip_map(sigma, |v, s| if v > T::zero() && s > T::zero() && s.is_finite() { v / s } else { T::zero() })
}

/// Violation matrix from observed counts with bootstrap error bars.
///
/// Each resample redraws every unordered count as Poisson(observed) and
/// recomputes `V` from the renormalised resample; `sigma` is the sample
/// standard deviation over resamples.
pub fn violation_significance<T: Real>(
    counts: &CountMatrix,
    resamples: usize,
    seed: u64,
) -> Result<ViolationReport<T>> {
    if resamples < 100 {
        return Err(Error::invalid("at least 100 bootstrap resamples are required"));
    }
    let v = violation_values(&counts.normalized::<T>()?);
    let n = counts.dim();
    let draws: Vec<DMatrix<f64>> = (0..resamples as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, k + 1);
            let re = CountMatrix::new(resample(counts.counts(), &mut rng)).expect("resample stays symmetric");
            match re.normalized::<f64>() {
                Ok(g) => violation_values(&g),
                Err(_) => DMatrix::zeros(n, n),
            }
        })
        .collect();
    // accumulate in resample order so the result is independent of scheduling
    let count = resamples as f64;
    let mut mean = DMatrix::<f64>::zeros(n, n);
    for d in &draws {
        mean += d;
    }
    mean /= count;
    let mut var = DMatrix::<f64>::zeros(n, n);
    for d in &draws {
        let diff = d - &mean;
        var += diff.component_mul(&diff);
    }
    var /= count - 1.0;
    let sigma = var.map(|x| T::lit(x.sqrt()));
    let sigmas_violated = significance(&v, &sigma);
    Ok(ViolationReport { v, sigma: Some(sigma), sigmas_violated: Some(sigmas_violated) })
}

/// Violation matrix with first-order (delta-method) Poisson error bars.
///
/// Treats every unordered count `n_k` as independent with variance `n_k` and
/// includes the dependence of the normalisation on the total. Where a diagonal
/// count is zero the derivative of the square root diverges and sigma is
/// reported as infinite.
pub fn violation_significance_analytic<T: Real>(counts: &CountMatrix) -> Result<ViolationReport<T>> {
    let gamma = counts.normalized::<f64>()?;
    let v = violation_values(&gamma);
    let c = counts.counts().map(|x| x as f64);
    let total = counts.total() as f64;
    let n = counts.dim();
    let mut sigma = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let (nii, njj, nij) = (c[(i, i)], c[(j, j)], c[(i, j)]);
            let s = if nii == 0.0 || njj == 0.0 {
                f64::INFINITY
            } else {
                let f = (2.0 / 3.0) * (nii * njj).sqrt() - nij;
                // every count enters through the total
                let g = -f / (total * total);
                let d_ii = (1.0 / 3.0) * (njj / nii).sqrt() / total + g;
                let d_jj = (1.0 / 3.0) * (nii / njj).sqrt() / total + g;
                let d_ij = -1.0 / total + g;
                let mut var = g * g * (total - nii - njj - nij);
                var += d_ii * d_ii * nii + d_jj * d_jj * njj + d_ij * d_ij * nij;
                var.max(0.0).sqrt()
            };
            sigma[(i, j)] = s;
            sigma[(j, i)] = s;
        }
    }
    let v = v.map(T::lit);
    let sigma = sigma.map(|s| if s.is_finite() { T::lit(s) } else { T::max_value().unwrap_or_else(T::one) });
    let sigmas_violated = significance(&v, &sigma);
    Ok(ViolationReport { v, sigma: Some(sigma), sigmas_violated: Some(sigmas_violated) })
}
