//! Two-photon coincidence probabilities.
//!
//! For photons launched into guides `q` and `r` the two paths to the output
//! pair `(q', r')` have amplitudes `A = U_{q',q} U_{r',r}` and
//! `B = U_{q',r} U_{r',q}`. Indistinguishable photons interfere,
//! `Γ = |A + B|² / (1 + δ_{q'r'})`; distinguishable ones add probabilities,
//! `Γ' = (|A|² + |B|²) / (1 + δ_{q'r'})`. Partial indistinguishability `I`
//! weights only the interference term: `(|A|² + |B|² + 2 I Re(A B*)) / (1 + δ)`.
//!
//! Matrices are stored dense and symmetric; probabilities sum to one over
//! unordered output pairs `q' ≤ r'`.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::evolution::Propagator;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix<T: Real> {
    pub gamma: DMatrix<T>,
    pub input_pair: (usize, usize),
    pub indistinguishability: T,
    pub loss_applied: bool,
}

impl<T: Real> CorrelationMatrix<T> {
    pub fn dim(&self) -> usize {
        self.gamma.nrows()
    }

    /// Sum over unordered output pairs (upper triangle including the diagonal).
    pub fn unordered_total(&self) -> T {
        unordered_total(&self.gamma)
    }

    /// Probabilities listed over unordered pairs in lexicographic `(q', r')` order.
    pub fn unordered_values(&self) -> Vec<T> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                out.push(self.gamma[(i, j)]);
            }
        }
        out
    }
}

pub fn unordered_total<T: Real>(m: &DMatrix<T>) -> T {
    let n = m.nrows();
    let mut total = T::zero();
    for i in 0..n {
        for j in i..n {
            total += m[(i, j)];
        }
    }
    total
}

/// Per-guide coupling efficiencies at the input and output facets.
#[derive(Debug, Clone, PartialEq)]
pub struct PortEfficiencies<T> {
    pub eta_in: Vec<T>,
    pub eta_out: Vec<T>,
}

impl<T: Real> PortEfficiencies<T> {
    pub fn new(eta_in: Vec<T>, eta_out: Vec<T>) -> Result<Self> {
        let eff = PortEfficiencies { eta_in, eta_out };
        eff.validate()?;
        Ok(eff)
    }

    /// All efficiencies equal to one.
    pub fn lossless(n: usize) -> Self {
        PortEfficiencies { eta_in: vec![T::one(); n], eta_out: vec![T::one(); n] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.eta_in.len() != self.eta_out.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} input vs {} output efficiencies",
                self.eta_in.len(),
                self.eta_out.len()
            )));
        }
        let ok = |e: &T| *e > T::zero() && *e <= T::one();
        if !self.eta_in.iter().all(ok) || !self.eta_out.iter().all(ok) {
            return Err(Error::invalid("port efficiencies must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// Path amplitudes `(A, B)` for inputs `(q, r)` and outputs `(qo, ro)`.
#[inline]
pub fn path_amplitudes<T: Real>(
    p: &Propagator<T>,
    q: usize,
    r: usize,
    qo: usize,
    ro: usize,
) -> (Complex<T>, Complex<T>) {
    let a = p.amplitude(qo, q) * p.amplitude(ro, r);
    let b = p.amplitude(qo, r) * p.amplitude(ro, q);
    (a, b)
}

fn correlations_with<T: Real>(p: &Propagator<T>, q: usize, r: usize, indist: T) -> Result<CorrelationMatrix<T>> {
    p.check_index(q)?;
    p.check_index(r)?;
    if !(indist >= T::zero() && indist <= T::one()) {
        return Err(Error::invalid("indistinguishability must lie in [0, 1]"));
    }
    let n = p.dim();
    let two = T::lit(2.0);
    // both photons in one guide: bosonic normalisation of |2_q> halves the
    // interfering term, which makes the result independent of `indist`
    let input_norm = if q == r { T::one() + indist } else { T::one() };
    let mut gamma = DMatrix::zeros(n, n);
    for qo in 0..n {
        for ro in qo..n {
            let (a, b) = path_amplitudes(p, q, r, qo, ro);
            let cross = (a * b.conj()).re;
            let mut value = (a.norm_sqr() + b.norm_sqr() + two * indist * cross) / input_norm;
            if qo == ro {
                value /= two;
            }
            // rounding can push a vanishing probability a hair below zero
            let value = value.max(T::zero());
            gamma[(qo, ro)] = value;
            gamma[(ro, qo)] = value;
        }
    }
    Ok(CorrelationMatrix { gamma, input_pair: (q, r), indistinguishability: indist, loss_applied: false })
}

/// Coincidence probabilities for perfectly indistinguishable photons.
pub fn quantum_correlations<T: Real>(p: &Propagator<T>, q: usize, r: usize) -> Result<CorrelationMatrix<T>> {
    correlations_with(p, q, r, T::one())
}

/// Coincidence probabilities for fully distinguishable photons.
pub fn distinguishable_correlations<T: Real>(p: &Propagator<T>, q: usize, r: usize) -> Result<CorrelationMatrix<T>> {
    correlations_with(p, q, r, T::zero())
}

/// Coincidence probabilities at wavepacket overlap `indist ∈ [0, 1]`.
pub fn partial_correlations<T: Real>(p: &Propagator<T>, q: usize, r: usize, indist: T) -> Result<CorrelationMatrix<T>> {
    correlations_with(p, q, r, indist)
}

/// Applies facet losses: entry `(q', r')` is scaled by
/// `eta_in[q]·eta_in[r]·eta_out[q']·eta_out[r']`, then optionally rescaled to
/// unit total over unordered pairs.
pub fn apply_losses<T: Real>(
    c: &CorrelationMatrix<T>,
    eff: &PortEfficiencies<T>,
    renormalize: bool,
) -> Result<CorrelationMatrix<T>> {
    if c.loss_applied {
        return Err(Error::LossesAlreadyApplied);
    }
    eff.validate()?;
    let n = c.dim();
    if eff.eta_out.len() != n {
        return Err(Error::DimensionMismatch(format!("{} efficiencies for {n} sites", eff.eta_out.len())));
    }
    let (q, r) = c.input_pair;
    let input = eff.eta_in[q] * eff.eta_in[r];
    let mut gamma = DMatrix::from_fn(n, n, |i, j| c.gamma[(i, j)] * input * eff.eta_out[i] * eff.eta_out[j]);
    if renormalize {
        let total = unordered_total(&gamma);
        if !(total > T::zero()) {
            return Err(Error::ZeroMatrix);
        }
        gamma /= total;
    }
    Ok(CorrelationMatrix { gamma, loss_applied: true, ..c.clone() })
}

/// A named group of sites for branch summation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub name: String,
    pub sites: Vec<usize>,
}

impl Branch {
    pub fn new(name: impl Into<String>, sites: Vec<usize>) -> Self {
        Branch { name: name.into(), sites }
    }
}

/// Correlations coarse-grained onto branches.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchMatrix<T: Real> {
    pub names: Vec<String>,
    pub gamma: DMatrix<T>,
}

/// Sums coincidences over the unordered site pairs joining each pair of
/// branches. The partition must cover every site exactly once.
pub fn branch_sum<T: Real>(c: &CorrelationMatrix<T>, branches: &[Branch]) -> Result<BranchMatrix<T>> {
    let owner = branch_owners(c.dim(), branches)?;
    let gamma = sum_into_branches(&c.gamma, &owner, branches.len(), T::zero());
    Ok(BranchMatrix { names: branches.iter().map(|b| b.name.clone()).collect(), gamma })
}

/// Branch index of every site, after checking that `branches` partitions `0..n`.
pub(crate) fn branch_owners(n: usize, branches: &[Branch]) -> Result<Vec<usize>> {
    let mut owner = vec![None; n];
    for (b, branch) in branches.iter().enumerate() {
        if branch.sites.is_empty() {
            return Err(Error::InvalidPartition(format!("branch `{}` is empty", branch.name)));
        }
        for &s in &branch.sites {
            if s >= n {
                return Err(Error::InvalidPartition(format!("site {s} out of range in branch `{}`", branch.name)));
            }
            if owner[s].replace(b).is_some() {
                return Err(Error::InvalidPartition(format!("site {s} appears in more than one branch")));
            }
        }
    }
    if let Some(missing) = owner.iter().position(Option::is_none) {
        return Err(Error::InvalidPartition(format!("site {missing} belongs to no branch")));
    }
    Ok(owner.into_iter().map(Option::unwrap).collect())
}

/// Adds every unordered entry of a symmetric matrix into its branch pair.
pub(crate) fn sum_into_branches<X>(m: &DMatrix<X>, owner: &[usize], n_branches: usize, zero: X) -> DMatrix<X>
where
    X: nalgebra::Scalar + Copy + std::ops::AddAssign,
{
    let n = m.nrows();
    let mut out = DMatrix::from_element(n_branches, n_branches, zero);
    for i in 0..n {
        for j in i..n {
            let (bi, bj) = (owner[i], owner[j]);
            out[(bi.min(bj), bi.max(bj))] += m[(i, j)];
        }
    }
    for i in 0..n_branches {
        for j in (i + 1)..n_branches {
            out[(j, i)] = out[(i, j)];
        }
    }
    out
}
