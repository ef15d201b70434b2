//! Independent reference implementations shared by the integration tests.
//!
//! Nothing here calls into the crate's propagator or correlation code: the
//! matrix exponential is a Taylor series with scaling and squaring, and the
//! two-photon probabilities come from evolving the full two-particle state.
#![allow(dead_code)]

use nalgebra::{Complex, DMatrix};
use photonwalk::{Lattice, Waveguide};
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex<f64>;

pub fn rng(seed: u64) -> ChaCha20Rng {
    use rand::SeedableRng;
    ChaCha20Rng::seed_from_u64(seed)
}

/// Real symmetric tight-binding matrix: β in [-1, 1], couplings in [0, 2]
/// with roughly 60% of pairs coupled.
pub fn random_hamiltonian(n: usize, rng: &mut ChaCha20Rng) -> DMatrix<f64> {
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = rng.random_range(-1.0..1.0);
        for j in (i + 1)..n {
            if rng.random_bool(0.6) {
                let c = rng.random_range(0.0..2.0);
                h[(i, j)] = c;
                h[(j, i)] = c;
            }
        }
    }
    h
}

/// Lattice with explicit random couplings and a random length in [0.1, 3] cm.
pub fn random_lattice(n: usize, rng: &mut ChaCha20Rng) -> Lattice {
    let h = random_hamiltonian(n, rng);
    let sites = (0..n).map(|i| Waveguide::new(format!("S{i}"), 10.0 * i as f64, 0.0)).collect();
    let beta = (0..n).map(|i| h[(i, i)]).collect();
    let mut coupling = h;
    coupling.fill_diagonal(0.0);
    Lattice::new(sites, beta, coupling, rng.random_range(0.1..3.0)).unwrap()
}

/// Haar-like random unitary: complex Gaussian matrix orthonormalised column by column.
pub fn random_unitary(n: usize, rng: &mut ChaCha20Rng) -> DMatrix<C64> {
    let mut m = DMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    for j in 0..n {
        for k in 0..j {
            let proj: C64 = (0..n).map(|i| m[(i, k)].conj() * m[(i, j)]).sum();
            for i in 0..n {
                let v = m[(i, k)];
                m[(i, j)] -= proj * v;
            }
        }
        let norm = (0..n).map(|i| m[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            m[(i, j)] /= norm;
        }
    }
    m
}

/// `exp(M)` by scaling and squaring around a 30-term Taylor series.
pub fn expm(m: &DMatrix<C64>) -> DMatrix<C64> {
    let n = m.nrows();
    let norm = m.iter().map(|x| x.norm()).fold(0.0_f64, f64::max) * n as f64;
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let a = m / C64::new(2f64.powi(squarings as i32), 0.0);
    let mut sum = DMatrix::<C64>::identity(n, n);
    let mut term = DMatrix::<C64>::identity(n, n);
    for k in 1..30 {
        term = &term * &a / C64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(-i H z)` for a real symmetric `H`.
pub fn reference_propagator(h: &DMatrix<f64>, z: f64) -> DMatrix<C64> {
    expm(&h.map(|x| C64::new(0.0, -x * z)))
}

/// Permanent by Ryser's inclusion-exclusion formula.
pub fn permanent(m: &DMatrix<C64>) -> C64 {
    let n = m.nrows();
    let mut total = C64::new(0.0, 0.0);
    for subset in 1u32..(1 << n) {
        let mut prod = C64::new(1.0, 0.0);
        for i in 0..n {
            let row: C64 = (0..n).filter(|j| subset & (1 << j) != 0).map(|j| m[(i, j)]).sum();
            prod *= row;
        }
        let sign = if (n as u32 - subset.count_ones()).is_multiple_of(2) { 1.0 } else { -1.0 };
        total += prod * sign;
    }
    total
}

/// Folds ordered two-particle probabilities `P[a·n + b]` onto unordered pairs.
fn unordered(n: usize, ordered: &[f64]) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let p = if a == b { ordered[a * n + a] } else { ordered[a * n + b] + ordered[b * n + a] };
            g[(a, b)] = p;
            g[(b, a)] = p;
        }
    }
    g
}

/// Two-photon coincidence probabilities from evolving the two-particle state
/// under `H ⊗ 1 + 1 ⊗ H`. Photons in distinct guides with overlap `indist`
/// are a mixture of the exchange-symmetric state and a product state of
/// photons in orthogonal internal modes.
pub fn two_photon_reference(h: &DMatrix<f64>, z: f64, q: usize, r: usize, indist: f64) -> DMatrix<f64> {
    let n = h.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let h2 = h.kronecker(&id) + id.kronecker(h);
    let u2 = reference_propagator(&h2, z);
    let evolve = |psi: &[C64]| -> Vec<f64> {
        (0..n * n).map(|k| (0..n * n).map(|j| u2[(k, j)] * psi[j]).sum::<C64>().norm_sqr()).collect()
    };
    let zero = C64::new(0.0, 0.0);
    let mut symmetric = vec![zero; n * n];
    if q == r {
        symmetric[q * n + q] = C64::new(1.0, 0.0);
    } else {
        symmetric[q * n + r] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        symmetric[r * n + q] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    }
    let mut product = vec![zero; n * n];
    product[q * n + r] = C64::new(1.0, 0.0);
    let ps = evolve(&symmetric);
    let pp = evolve(&product);
    let mixed: Vec<f64> =
        if q == r { ps } else { ps.iter().zip(&pp).map(|(s, p)| indist * s + (1.0 - indist) * p).collect() };
    unordered(n, &mixed)
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs_diff_c(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Closed-form coupler propagator for `H = [[β0, C], [C, β1]]`.
pub fn coupler_propagator(c: f64, beta0: f64, beta1: f64, z: f64) -> DMatrix<C64> {
    let mean = 0.5 * (beta0 + beta1);
    let delta = 0.5 * (beta0 - beta1);
    let omega = (c * c + delta * delta).sqrt();
    let (s, co) = (omega * z).sin_cos();
    let phase = C64::new(0.0, -mean * z).exp();
    let i = C64::new(0.0, 1.0);
    let ratio = |x: f64| if omega == 0.0 { 0.0 } else { x / omega };
    DMatrix::from_row_slice(
        2,
        2,
        &[
            phase * (C64::new(co, 0.0) - i * ratio(delta) * s),
            phase * (-i * ratio(c) * s),
            phase * (-i * ratio(c) * s),
            phase * (C64::new(co, 0.0) + i * ratio(delta) * s),
        ],
    )
}
