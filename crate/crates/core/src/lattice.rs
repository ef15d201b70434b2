//! Waveguide lattices and their tight-binding Hamiltonians.
//!
//! A lattice is a set of labelled waveguides with transverse positions, a
//! propagation constant per guide and a symmetric coupling matrix. Couplings
//! are either given explicitly or generated from a [`CouplingModel`] that maps
//! guide separation to coupling strength.

use std::collections::HashSet;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default evanescent decay length of the coupling model, µm.
pub const DEFAULT_DECAY_UM: f64 = 6.0;

/// Default coupling cutoff, µm. Sits between the diagonal cross-arm distance
/// (≈26.2 µm for 18/19 µm spacings) and the next same-arm distance (36 µm).
pub const DEFAULT_CUTOFF_UM: f64 = 30.0;

/// Relative slack used when deciding whether a pair of guides is a
/// nearest-neighbour pair for coupling pinning.
pub const NEAREST_TOLERANCE: f64 = 0.1;

/// Site order of the swiss-cross preset.
pub const SWISS_CROSS_LABELS: [&str; 9] = ["X1", "X2", "C", "X3", "X4", "Y1", "Y2", "Y3", "Y4"];

#[derive(Debug, Clone, PartialEq)]
pub struct Waveguide<T> {
    pub label: String,
    pub x_um: T,
    pub y_um: T,
}

impl<T: Real> Waveguide<T> {
    pub fn new(label: impl Into<String>, x_um: T, y_um: T) -> Self {
        Waveguide { label: label.into(), x_um, y_um }
    }

    pub fn distance_um(&self, other: &Self) -> T {
        let dx = self.x_um - other.x_um;
        let dy = self.y_um - other.y_um;
        (dx * dx + dy * dy).sqrt()
    }
}

/// Exponential distance-to-coupling law `C(d) = c_ref · exp(-(d - d_ref)/decay)`,
/// zero beyond `cutoff_um`.
///
/// With `pin_nearest` set, every nearest-neighbour pair gets exactly `c_ref`
/// regardless of its separation, so slightly anisotropic spacings can share
/// one first-order coupling. A pair counts as nearest when its separation is
/// within [`NEAREST_TOLERANCE`] of either endpoint's smallest separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingModel<T> {
    pub c_ref: T,
    pub d_ref_um: T,
    pub decay_um: T,
    pub cutoff_um: T,
    pub pin_nearest: bool,
}

impl<T: Real> CouplingModel<T> {
    pub fn new(c_ref: T, d_ref_um: T, decay_um: T, cutoff_um: T, pin_nearest: bool) -> Result<Self> {
        let model = CouplingModel { c_ref, d_ref_um, decay_um, cutoff_um, pin_nearest };
        model.validate()?;
        Ok(model)
    }

    /// Model with the default decay length and cutoff, pinned nearest neighbours.
    pub fn evanescent(c_ref: T, d_ref_um: T) -> Result<Self> {
        Self::new(c_ref, d_ref_um, T::lit(DEFAULT_DECAY_UM), T::lit(DEFAULT_CUTOFF_UM), true)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c_ref > T::zero()) {
            return Err(Error::invalid("coupling model c_ref must be positive"));
        }
        if !(self.d_ref_um > T::zero()) {
            return Err(Error::invalid("coupling model d_ref must be positive"));
        }
        if !(self.decay_um > T::zero()) {
            return Err(Error::invalid("coupling model decay length must be positive"));
        }
        if !(self.cutoff_um >= self.d_ref_um) {
            return Err(Error::invalid("coupling model cutoff must be at least d_ref"));
        }
        Ok(())
    }

    /// Coupling at separation `d_um`, ignoring nearest-neighbour pinning.
    pub fn coupling_at(&self, d_um: T) -> T {
        if d_um > self.cutoff_um {
            T::zero()
        } else {
            self.c_ref * (-(d_um - self.d_ref_um) / self.decay_um).exp()
        }
    }

    /// Same decay law and cutoff, renormalised to `c_ref` at `d_ref_um`.
    pub fn normalized(&self, c_ref: T, d_ref_um: T) -> Result<Self> {
        Self::new(c_ref, d_ref_um, self.decay_um, self.cutoff_um.max(d_ref_um), self.pin_nearest)
    }

    /// Full coupling matrix for a set of guide positions.
    pub fn coupling_matrix(&self, sites: &[Waveguide<T>]) -> Result<DMatrix<T>> {
        self.validate()?;
        let n = sites.len();
        let dist = DMatrix::from_fn(n, n, |i, j| sites[i].distance_um(&sites[j]));
        let mut nearest = vec![T::max_value().unwrap_or_else(T::one); n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if !(dist[(i, j)] > T::zero()) {
                    return Err(Error::invalid(format!(
                        "sites `{}` and `{}` coincide",
                        sites[i].label, sites[j].label
                    )));
                }
                nearest[i] = nearest[i].min(dist[(i, j)]);
            }
        }
        let slack = T::one() + T::lit(NEAREST_TOLERANCE);
        let mut c = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let d = dist[(i, j)];
                let is_nearest = d <= slack * nearest[i] || d <= slack * nearest[j];
                let value = if self.pin_nearest && is_nearest { self.c_ref } else { self.coupling_at(d) };
                c[(i, j)] = value;
                c[(j, i)] = value;
            }
        }
        Ok(c)
    }
}

/// An array of evanescently coupled waveguides of common length.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveguideLattice<T> {
    sites: Vec<Waveguide<T>>,
    beta: Vec<T>,
    coupling: DMatrix<T>,
    length_cm: T,
    model: Option<CouplingModel<T>>,
}

impl<T: Real> WaveguideLattice<T> {
    /// Lattice with an explicit coupling matrix.
    pub fn new(sites: Vec<Waveguide<T>>, beta: Vec<T>, coupling: DMatrix<T>, length_cm: T) -> Result<Self> {
        let lattice = WaveguideLattice { sites, beta, coupling, length_cm, model: None };
        lattice.validate()?;
        Ok(lattice)
    }

    /// Lattice whose couplings follow `model` evaluated at the site positions.
    pub fn from_model(sites: Vec<Waveguide<T>>, beta: Vec<T>, model: CouplingModel<T>, length_cm: T) -> Result<Self> {
        let coupling = model.coupling_matrix(&sites)?;
        let lattice = WaveguideLattice { sites, beta, coupling, length_cm, model: Some(model) };
        lattice.validate()?;
        Ok(lattice)
    }

    fn validate(&self) -> Result<()> {
        let n = self.sites.len();
        if n == 0 {
            return Err(Error::invalid("lattice has no sites"));
        }
        let mut seen = HashSet::new();
        for site in &self.sites {
            if !seen.insert(site.label.as_str()) {
                return Err(Error::invalid(format!("duplicate site label `{}`", site.label)));
            }
        }
        if self.beta.len() != n {
            return Err(Error::invalid(format!("{} propagation constants for {n} sites", self.beta.len())));
        }
        if self.beta.iter().any(|b| !b.is_finite()) {
            return Err(Error::invalid("propagation constants must be finite"));
        }
        if self.coupling.shape() != (n, n) {
            return Err(Error::invalid(format!("coupling matrix shape {:?} for {n} sites", self.coupling.shape())));
        }
        for i in 0..n {
            if self.coupling[(i, i)] != T::zero() {
                return Err(Error::invalid("coupling matrix must have a zero diagonal"));
            }
            for j in 0..n {
                let c = self.coupling[(i, j)];
                if !(c >= T::zero()) || !c.is_finite() {
                    return Err(Error::invalid("couplings must be finite and non-negative"));
                }
                if c != self.coupling[(j, i)] {
                    return Err(Error::invalid("coupling matrix must be symmetric"));
                }
            }
        }
        if !(self.length_cm > T::zero()) {
            return Err(Error::invalid("lattice length must be positive"));
        }
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[Waveguide<T>] {
        &self.sites
    }

    pub fn labels(&self) -> Vec<String> {
        self.sites.iter().map(|s| s.label.clone()).collect()
    }

    pub fn beta(&self) -> &[T] {
        &self.beta
    }

    pub fn coupling(&self) -> &DMatrix<T> {
        &self.coupling
    }

    pub fn length_cm(&self) -> T {
        self.length_cm
    }

    /// The distance model that produced the couplings, if any.
    pub fn model(&self) -> Option<&CouplingModel<T>> {
        self.model.as_ref()
    }

    pub fn site_index(&self, label: &str) -> Result<usize> {
        self.sites.iter().position(|s| s.label == label).ok_or_else(|| Error::UnknownSite(label.to_string()))
    }

    /// Rebuilds the couplings from a new distance model.
    pub fn with_model(&self, model: CouplingModel<T>) -> Result<Self> {
        Self::from_model(self.sites.clone(), self.beta.clone(), model, self.length_cm)
    }

    /// Replaces the couplings with an explicit matrix; drops any model.
    pub fn with_coupling(&self, coupling: DMatrix<T>) -> Result<Self> {
        Self::new(self.sites.clone(), self.beta.clone(), coupling, self.length_cm)
    }

    pub fn with_beta(&self, beta: Vec<T>) -> Result<Self> {
        let mut lattice = self.clone();
        lattice.beta = beta;
        lattice.validate()?;
        Ok(lattice)
    }

    pub fn with_length(&self, length_cm: T) -> Result<Self> {
        let mut lattice = self.clone();
        lattice.length_cm = length_cm;
        lattice.validate()?;
        Ok(lattice)
    }

    /// Tight-binding Hamiltonian in cm⁻¹: propagation constants on the
    /// diagonal, couplings off it. Exactly symmetric.
    pub fn hamiltonian(&self) -> DMatrix<T> {
        let mut h = self.coupling.clone();
        for (i, &b) in self.beta.iter().enumerate() {
            h[(i, i)] = b;
        }
        h
    }

    /// Number of guides each guide is coupled to.
    pub fn degrees(&self) -> Vec<usize> {
        self.coupling.row_iter().map(|row| row.iter().filter(|&&c| c != T::zero()).count()).collect()
    }
}

fn check_positive<T: Real>(name: &str, value: T) -> Result<()> {
    if value > T::zero() && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive")))
    }
}

/// Nine-guide swiss cross: a horizontal arm X1–X4 and a vertical arm Y1–Y4
/// sharing the centre guide C.
///
/// Sites are ordered as [`SWISS_CROSS_LABELS`]. The X arm sits at
/// x = -2dx, -dx, dx, 2dx on y = 0 and the Y arm at y = 2dy, dy, -dy, -2dy on
/// x = 0. The model is renormalised so that both arm spacings give exactly
/// `c1`; farther pairs follow its decay law.
pub fn build_swiss_cross<T: Real>(
    dx_um: T,
    dy_um: T,
    c1: T,
    beta: T,
    length_cm: T,
    model: &CouplingModel<T>,
) -> Result<WaveguideLattice<T>> {
    check_positive("dx", dx_um)?;
    check_positive("dy", dy_um)?;
    check_positive("c1", c1)?;
    check_positive("length", length_cm)?;
    let two = T::lit(2.0);
    let zero = T::zero();
    let sites = vec![
        Waveguide::new("X1", -two * dx_um, zero),
        Waveguide::new("X2", -dx_um, zero),
        Waveguide::new("C", zero, zero),
        Waveguide::new("X3", dx_um, zero),
        Waveguide::new("X4", two * dx_um, zero),
        Waveguide::new("Y1", zero, two * dy_um),
        Waveguide::new("Y2", zero, dy_um),
        Waveguide::new("Y3", zero, -dy_um),
        Waveguide::new("Y4", zero, -two * dy_um),
    ];
    let mut model = model.normalized(c1, dx_um.min(dy_um))?;
    model.pin_nearest = true;
    WaveguideLattice::from_model(sites, vec![beta; 9], model, length_cm)
}

/// Straight chain of `n` guides labelled W1..Wn along x.
///
/// Without a model only nearest neighbours couple (with `c1`). A model is
/// renormalised to `c1` at `spacing_um` and adds longer-range couplings up to
/// its cutoff.
pub fn build_linear_chain<T: Real>(
    n: usize,
    spacing_um: T,
    c1: T,
    beta: T,
    length_cm: T,
    model: Option<&CouplingModel<T>>,
) -> Result<WaveguideLattice<T>> {
    if n == 0 {
        return Err(Error::invalid("chain needs at least one site"));
    }
    check_positive("spacing", spacing_um)?;
    check_positive("c1", c1)?;
    check_positive("length", length_cm)?;
    let sites = (0..n)
        .map(|i| Waveguide::new(format!("W{}", i + 1), T::from_usize(i).unwrap() * spacing_um, T::zero()))
        .collect();
    let model = match model {
        Some(m) => {
            let mut m = m.normalized(c1, spacing_um)?;
            m.pin_nearest = true;
            m
        }
        None => CouplingModel::new(c1, spacing_um, T::lit(DEFAULT_DECAY_UM), spacing_um, true)?,
    };
    WaveguideLattice::from_model(sites, vec![beta; n], model, length_cm)
}
