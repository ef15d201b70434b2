use nalgebra::DMatrix;

use crate::correlations::{partial_correlations, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::evolution::Propagator;
use crate::scalar::Real;

/// Bhattacharyya-type overlap `(Σ sqrt(a·b))² / (Σa · Σb)` of two coincidence
/// matrices, summed over unordered output pairs (upper triangle with diagonal).
///
/// Lies in `[0, 1]` and equals 1 exactly when the matrices are proportional.
pub fn similarity<T: Real>(a: &DMatrix<T>, b: &DMatrix<T>) -> Result<T> {
    if a.shape() != b.shape() || !a.is_square() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    if a.iter().chain(b.iter()).any(|x| !(*x >= T::zero())) {
        return Err(Error::invalid("similarity needs non-negative entries"));
    }
    let n = a.nrows();
    let (mut overlap, mut sa, mut sb) = (T::zero(), T::zero(), T::zero());
    for i in 0..n {
        for j in i..n {
            overlap += (a[(i, j)] * b[(i, j)]).sqrt();
            sa += a[(i, j)];
            sb += b[(i, j)];
        }
    }
    if sa == T::zero() || sb == T::zero() {
        return Err(Error::ZeroMatrix);
    }
    Ok((overlap * overlap / (sa * sb)).min(T::one()))
}

/// Relative rate change `(Γ - Γ') / Γ'` at one output entry.
pub fn hom_visibility<T: Real>(
    quantum: &CorrelationMatrix<T>,
    distinguishable: &CorrelationMatrix<T>,
    output: (usize, usize),
) -> Result<T> {
    if quantum.gamma.shape() != distinguishable.gamma.shape() {
        return Err(Error::DimensionMismatch("correlation matrices differ in size".into()));
    }
    let sorted = |(a, b): (usize, usize)| (a.min(b), a.max(b));
    if sorted(quantum.input_pair) != sorted(distinguishable.input_pair) {
        return Err(Error::invalid("correlation matrices come from different inputs"));
    }
    let n = quantum.dim();
    for s in [output.0, output.1] {
        if s >= n {
            return Err(Error::IndexOutOfRange { index: s, len: n });
        }
    }
    let g = quantum.gamma[output];
    let gd = distinguishable.gamma[output];
    if gd == T::zero() {
        return Err(Error::UndefinedVisibility(output.0, output.1));
    }
    Ok((g - gd) / gd)
}

/// Wavepacket overlap of Gaussian photons at relative delay `delay`.
pub fn gaussian_overlap<T: Real>(delay_fs: T, coherence_time_fs: T) -> T {
    let x = delay_fs / coherence_time_fs;
    (-(x * x) / T::lit(2.0)).exp()
}

/// Coincidence rate at one output entry versus relative input delay.
#[derive(Debug, Clone, PartialEq)]
pub struct HomScan<T> {
    pub delays_fs: Vec<T>,
    pub indistinguishability: Vec<T>,
    pub coincidences: Vec<T>,
    /// `(Γ - Γ')/Γ'` between zero delay and fully distinguishable photons;
    /// `None` when the distinguishable rate vanishes.
    pub visibility: Option<T>,
}

/// Delay scan with ideal photons: overlap `exp(-τ²/2σ²)`.
pub fn hom_scan<T: Real>(
    p: &Propagator<T>,
    q: usize,
    r: usize,
    output: (usize, usize),
    coherence_time_fs: T,
    delays_fs: &[T],
) -> Result<HomScan<T>> {
    hom_scan_with_peak(p, q, r, output, coherence_time_fs, T::one(), delays_fs)
}

/// Delay scan whose overlap peaks at `peak_indistinguishability` instead of 1,
/// modelling residual distinguishability of the source.
pub fn hom_scan_with_peak<T: Real>(
    p: &Propagator<T>,
    q: usize,
    r: usize,
    output: (usize, usize),
    coherence_time_fs: T,
    peak_indistinguishability: T,
    delays_fs: &[T],
) -> Result<HomScan<T>> {
    if !(coherence_time_fs > T::zero()) || !coherence_time_fs.is_finite() {
        return Err(Error::invalid("coherence time must be positive"));
    }
    if !(peak_indistinguishability >= T::zero() && peak_indistinguishability <= T::one()) {
        return Err(Error::invalid("peak indistinguishability must lie in [0, 1]"));
    }
    let n = p.dim();
    for s in [output.0, output.1] {
        if s >= n {
            return Err(Error::IndexOutOfRange { index: s, len: n });
        }
    }
    let mut indist = Vec::with_capacity(delays_fs.len());
    let mut coincidences = Vec::with_capacity(delays_fs.len());
    for &tau in delays_fs {
        let i = peak_indistinguishability * gaussian_overlap(tau, coherence_time_fs);
        coincidences.push(partial_correlations(p, q, r, i)?.gamma[output]);
        indist.push(i);
    }
    let peak = partial_correlations(p, q, r, peak_indistinguishability)?.gamma[output];
    let flat = partial_correlations(p, q, r, T::zero())?.gamma[output];
    let visibility = (flat != T::zero()).then(|| (peak - flat) / flat);
    Ok(HomScan { delays_fs: delays_fs.to_vec(), indistinguishability: indist, coincidences, visibility })
}
