//! Continuous-time quantum walks of photon pairs in coupled waveguide lattices.
//!
//! The crate builds tight-binding lattices ([`lattice`]), propagates them
//! ([`evolution`]), evaluates two-photon coincidence matrices for
//! indistinguishable, distinguishable and partially distinguishable photons
//! ([`correlations`]), tests them against the classical-light bound
//! ([`nonclassicality`]), maps the two-photon problem onto a single walker on
//! the pair graph ([`configspace`]) and fits device parameters to classical
//! measurements ([`analysis`]).
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the scalar for the common cases.

// `!(x > 0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod configspace;
pub mod correlations;
pub mod error;
pub mod evolution;
pub mod io;
pub mod lattice;
pub mod nonclassicality;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub use analysis::{calibrate, hom_scan, hom_visibility, similarity, CalibrationProblem, CalibrationResult, HomScan};
pub use configspace::{expand, simulate_on_graph, ConfigGraph};
pub use correlations::{
    apply_losses, branch_sum, distinguishable_correlations, partial_correlations, quantum_correlations, Branch,
    BranchMatrix, CorrelationMatrix, PortEfficiencies,
};
pub use evolution::{propagator, single_photon_distribution, Propagator, Spectrum};
pub use lattice::{build_linear_chain, build_swiss_cross, CouplingModel, Waveguide, WaveguideLattice};
pub use nonclassicality::{sample_counts, violation_matrix, violation_significance, CountMatrix, ViolationReport};

pub type Lattice = WaveguideLattice<f64>;
pub type Lattice32 = WaveguideLattice<f32>;
pub type Propagator64 = Propagator<f64>;
pub type Propagator32 = Propagator<f32>;
pub type Correlations = CorrelationMatrix<f64>;
pub type Correlations32 = CorrelationMatrix<f32>;
pub type Graph = ConfigGraph<f64>;
pub type Graph32 = ConfigGraph<f32>;
pub type Violations = ViolationReport<f64>;
pub type Violations32 = ViolationReport<f32>;
pub type Efficiencies = PortEfficiencies<f64>;
