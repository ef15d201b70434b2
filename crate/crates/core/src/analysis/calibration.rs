//! Least-squares fit of lattice and facet parameters to classical intensity data.
//!
//! For each observed input guide `q` the model predicts output intensities
//! `eta_out[q'] · |U_{q',q}|² · eta_in[q]`; the fit minimises the summed squared
//! difference to the observations with a multi-start simplex search inside the
//! parameter bounds. The first start is always the template itself, so the
//! returned residual never exceeds the template's.

use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use super::simplex::{minimize, SimplexOptions};
use crate::correlations::PortEfficiencies;
use crate::error::{Error, Result};
use crate::evolution::Spectrum;
use crate::lattice::WaveguideLattice;
use crate::scalar::Real;

pub const DEFAULT_RESTARTS: usize = 16;

/// One adjustable quantity of the device model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FitParameter {
    /// First-order coupling `c_ref` of the lattice's distance model.
    CouplingScale,
    /// Decay length of the distance model, µm.
    DecayLength,
    /// One explicit coupling entry (symmetric).
    Coupling(usize, usize),
    /// Propagation constant of one guide, relative to the gauge guide.
    Beta(usize),
    EtaIn(usize),
    EtaOut(usize),
}

impl fmt::Display for FitParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitParameter::CouplingScale => write!(f, "c_ref"),
            FitParameter::DecayLength => write!(f, "decay_um"),
            FitParameter::Coupling(a, b) => write!(f, "coupling[{a},{b}]"),
            FitParameter::Beta(q) => write!(f, "beta[{q}]"),
            FitParameter::EtaIn(q) => write!(f, "eta_in[{q}]"),
            FitParameter::EtaOut(q) => write!(f, "eta_out[{q}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterBounds<T> {
    pub parameter: FitParameter,
    pub lower: T,
    pub upper: T,
}

/// Output intensity distribution recorded for light launched into `input`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation<T> {
    pub input: usize,
    pub intensities: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationProblem<T> {
    pub observed: Vec<Observation<T>>,
    pub free: Vec<ParameterBounds<T>>,
    /// Residual at or below which the fit counts as converged.
    pub tolerance: T,
    /// Starting facet efficiencies; unit efficiencies when `None`.
    pub efficiencies: Option<PortEfficiencies<T>>,
    pub restarts: usize,
    pub seed: u64,
    pub simplex: SimplexOptions<T>,
}

impl<T: Real> CalibrationProblem<T> {
    pub fn new(observed: Vec<Observation<T>>, free: Vec<ParameterBounds<T>>, tolerance: T) -> Self {
        CalibrationProblem {
            observed,
            free,
            tolerance,
            efficiencies: None,
            restarts: DEFAULT_RESTARTS,
            seed: 0,
            simplex: SimplexOptions::default(),
        }
    }

    pub fn n_observations(&self) -> usize {
        self.observed.iter().map(|o| o.intensities.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationResult<T: Real> {
    pub lattice: WaveguideLattice<T>,
    pub efficiencies: PortEfficiencies<T>,
    pub parameters: Vec<(FitParameter, T)>,
    pub residual: T,
    pub initial_residual: T,
    pub evaluations: usize,
    pub converged: bool,
}

/// Guide whose propagation constant is held fixed: `C` when present, else the first.
pub fn gauge_site<T: Real>(lattice: &WaveguideLattice<T>) -> usize {
    lattice.site_index("C").unwrap_or(0)
}

/// Predicted classical output intensities for light launched into `input`.
pub fn classical_intensities<T: Real>(
    lattice: &WaveguideLattice<T>,
    eff: &PortEfficiencies<T>,
    input: usize,
) -> Result<Vec<T>> {
    let spectrum = Spectrum::new(&lattice.hamiltonian())?;
    predict(&spectrum, lattice.length_cm(), eff, input)
}

fn predict<T: Real>(spectrum: &Spectrum<T>, z: T, eff: &PortEfficiencies<T>, input: usize) -> Result<Vec<T>> {
    let p = spectrum.propagator(z)?;
    p.check_index(input)?;
    Ok((0..p.dim()).map(|k| eff.eta_out[k] * p.amplitude(k, input).norm_sqr() * eff.eta_in[input]).collect())
}

struct Model<'a, T: Real> {
    template: &'a WaveguideLattice<T>,
    base_eff: PortEfficiencies<T>,
    free: &'a [ParameterBounds<T>],
    observed: &'a [Observation<T>],
    gauge: usize,
}

impl<'a, T: Real> Model<'a, T> {
    fn current_value(&self, p: FitParameter) -> Result<T> {
        Ok(match p {
            FitParameter::CouplingScale => self.require_model()?.c_ref,
            FitParameter::DecayLength => self.require_model()?.decay_um,
            FitParameter::Coupling(a, b) => self.template.coupling()[(a, b)],
            FitParameter::Beta(q) => self.template.beta()[q],
            FitParameter::EtaIn(q) => self.base_eff.eta_in[q],
            FitParameter::EtaOut(q) => self.base_eff.eta_out[q],
        })
    }

    fn require_model(&self) -> Result<&crate::lattice::CouplingModel<T>> {
        self.template
            .model()
            .ok_or_else(|| Error::invalid("model parameters need a lattice built from a coupling model"))
    }

    fn build(&self, values: &[T]) -> Result<(WaveguideLattice<T>, PortEfficiencies<T>)> {
        let mut lattice = self.template.clone();
        let mut eff = self.base_eff.clone();
        if let Some(mut model) = self.template.model().copied() {
            let mut touched = false;
            for (b, &v) in self.free.iter().zip(values) {
                match b.parameter {
                    FitParameter::CouplingScale => {
                        model.c_ref = v;
                        touched = true;
                    }
                    FitParameter::DecayLength => {
                        model.decay_um = v;
                        touched = true;
                    }
                    _ => {}
                }
            }
            if touched {
                lattice = lattice.with_model(model)?;
            }
        }
        let mut coupling: Option<DMatrix<T>> = None;
        let mut beta = lattice.beta().to_vec();
        for (b, &v) in self.free.iter().zip(values) {
            match b.parameter {
                FitParameter::Coupling(i, j) => {
                    let c = coupling.get_or_insert_with(|| lattice.coupling().clone());
                    c[(i, j)] = v;
                    c[(j, i)] = v;
                }
                FitParameter::Beta(q) => beta[q] = v,
                FitParameter::EtaIn(q) => eff.eta_in[q] = v,
                FitParameter::EtaOut(q) => eff.eta_out[q] = v,
                FitParameter::CouplingScale | FitParameter::DecayLength => {}
            }
        }
        if let Some(c) = coupling {
            lattice = lattice.with_coupling(c)?;
        }
        lattice = lattice.with_beta(beta)?;
        Ok((lattice, eff))
    }

    fn residual(&self, values: &[T]) -> Result<T> {
        let (lattice, eff) = self.build(values)?;
        let spectrum = Spectrum::new(&lattice.hamiltonian())?;
        let mut total = T::zero();
        for obs in self.observed {
            let pred = predict(&spectrum, lattice.length_cm(), &eff, obs.input)?;
            for (p, o) in pred.iter().zip(&obs.intensities) {
                let d = *p - *o;
                total += d * d;
            }
        }
        Ok(total)
    }

    fn params_at(&self, u: &[T]) -> Vec<T> {
        self.free.iter().zip(u).map(|(b, &x)| b.lower + x * (b.upper - b.lower)).collect()
    }

    fn to_unit(&self, values: &[T]) -> Vec<T> {
        self.free
            .iter()
            .zip(values)
            .map(|(b, &v)| if b.upper > b.lower { (v - b.lower) / (b.upper - b.lower) } else { T::zero() })
            .collect()
    }
}

fn validate<T: Real>(problem: &CalibrationProblem<T>, template: &WaveguideLattice<T>, gauge: usize) -> Result<()> {
    let n = template.n_sites();
    let observations = problem.n_observations();
    if observations < problem.free.len() {
        return Err(Error::Underdetermined { observations, parameters: problem.free.len() });
    }
    for obs in &problem.observed {
        if obs.input >= n {
            return Err(Error::IndexOutOfRange { index: obs.input, len: n });
        }
        if obs.intensities.len() != n {
            return Err(Error::DimensionMismatch(format!("{} intensities for {n} sites", obs.intensities.len())));
        }
        if obs.intensities.iter().any(|x| !(*x >= T::zero())) {
            return Err(Error::invalid("observed intensities must be non-negative"));
        }
        let total = obs.intensities.iter().fold(T::zero(), |a, &b| a + b);
        if total > T::one() + T::lit(1e-9) {
            return Err(Error::invalid("observed intensities for one input sum to more than one"));
        }
    }
    for (i, b) in problem.free.iter().enumerate() {
        if problem.free[..i].iter().any(|o| same_parameter(o.parameter, b.parameter)) {
            return Err(Error::invalid(format!("parameter {} listed twice", b.parameter)));
        }
        if !(b.lower <= b.upper) || !b.lower.is_finite() || !b.upper.is_finite() {
            return Err(Error::BoundsViolated(format!("empty interval for {}", b.parameter)));
        }
        let check_site = |q: usize| if q < n { Ok(()) } else { Err(Error::IndexOutOfRange { index: q, len: n }) };
        match b.parameter {
            FitParameter::CouplingScale | FitParameter::DecayLength => {
                if !(b.lower > T::zero()) {
                    return Err(Error::BoundsViolated(format!("{} must stay positive", b.parameter)));
                }
            }
            FitParameter::Coupling(x, y) => {
                check_site(x)?;
                check_site(y)?;
                if x == y {
                    return Err(Error::invalid("diagonal couplings cannot be fitted; use Beta"));
                }
                if !(b.lower >= T::zero()) {
                    return Err(Error::BoundsViolated(format!("{} must stay non-negative", b.parameter)));
                }
            }
            FitParameter::Beta(q) => {
                check_site(q)?;
                if q == gauge {
                    return Err(Error::invalid(format!("beta of gauge guide {q} is fixed")));
                }
            }
            FitParameter::EtaIn(q) | FitParameter::EtaOut(q) => {
                check_site(q)?;
                if !(b.lower > T::zero() && b.upper <= T::one()) {
                    return Err(Error::BoundsViolated(format!("{} must stay within (0, 1]", b.parameter)));
                }
            }
        }
    }
    Ok(())
}

fn same_parameter(a: FitParameter, b: FitParameter) -> bool {
    match (a, b) {
        (FitParameter::Coupling(a1, a2), FitParameter::Coupling(b1, b2)) => {
            (a1, a2) == (b1, b2) || (a1, a2) == (b2, b1)
        }
        _ => a == b,
    }
}

/// Fits the free parameters of `template` to classical intensity data.
pub fn calibrate<T: Real>(
    problem: &CalibrationProblem<T>,
    template: &WaveguideLattice<T>,
) -> Result<CalibrationResult<T>> {
    let n = template.n_sites();
    let gauge = gauge_site(template);
    validate(problem, template, gauge)?;
    let base_eff = match &problem.efficiencies {
        Some(e) => {
            e.validate()?;
            if e.eta_in.len() != n {
                return Err(Error::DimensionMismatch(format!("{} efficiencies for {n} sites", e.eta_in.len())));
            }
            e.clone()
        }
        None => PortEfficiencies::lossless(n),
    };
    let model = Model { template, base_eff, free: &problem.free, observed: &problem.observed, gauge };
    debug_assert!(model.gauge < n);

    let initial: Vec<T> = problem.free.iter().map(|b| model.current_value(b.parameter)).collect::<Result<_>>()?;
    for (b, v) in problem.free.iter().zip(&initial) {
        if *v < b.lower || *v > b.upper {
            return Err(Error::BoundsViolated(format!("template value of {} lies outside its bounds", b.parameter)));
        }
    }
    let initial_residual = model.residual(&initial)?;

    let k = problem.free.len();
    let starts: Vec<Vec<T>> = std::iter::once(model.to_unit(&initial))
        .chain((1..problem.restarts.max(1) as u64).map(|s| {
            let mut rng = ChaCha20Rng::seed_from_u64(problem.seed);
            rng.set_stream(s);
            (0..k).map(|_| T::lit(rng.random::<f64>())).collect()
        }))
        .collect();

    let objective =
        |u: &[T]| model.residual(&model.params_at(u)).unwrap_or_else(|_| T::max_value().unwrap_or_else(T::one));
    let runs: Vec<_> = starts.par_iter().map(|s| minimize(objective, s, &problem.simplex)).collect();
    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let best = runs
        .into_iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.value.partial_cmp(&b.value).unwrap().then(ia.cmp(ib)))
        .map(|(_, r)| r)
        .expect("at least one start");

    let values = model.params_at(&best.x);
    let (lattice, efficiencies) = model.build(&values)?;
    let residual = best.value.min(initial_residual);
    let (lattice, efficiencies, values, residual) = if best.value <= initial_residual {
        (lattice, efficiencies, values, residual)
    } else {
        let (l, e) = model.build(&initial)?;
        (l, e, initial, initial_residual)
    };
    Ok(CalibrationResult {
        lattice,
        efficiencies,
        parameters: problem.free.iter().map(|b| b.parameter).zip(values).collect(),
        residual,
        initial_residual,
        evaluations,
        converged: residual <= problem.tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_linear_chain, build_swiss_cross, CouplingModel};

    #[test]
    fn two_site_coupling_is_recovered() {
        let truth = build_linear_chain(2, 18.0_f64, 1.234, 0.0, 1.0, None).unwrap();
        let eff = PortEfficiencies::lossless(2);
        let observed = vec![Observation { input: 0, intensities: classical_intensities(&truth, &eff, 0).unwrap() }];
        let template = build_linear_chain(2, 18.0_f64, 1.0, 0.0, 1.0, None).unwrap();
        // Cz stays below π/2 inside these bounds, so the fit is unique
        let free = vec![ParameterBounds { parameter: FitParameter::CouplingScale, lower: 0.5, upper: 1.5 }];
        let fit = calibrate(&CalibrationProblem::new(observed, free, 1e-20), &template).unwrap();
        assert!((fit.parameters[0].1 - 1.234).abs() < 1e-6, "{:?}", fit.parameters);
        assert!(fit.converged);
        assert!(fit.residual <= fit.initial_residual);
        assert!((fit.lattice.coupling()[(0, 1)] - 1.234).abs() < 1e-6);
    }

    #[test]
    fn efficiencies_and_beta_are_recovered() {
        let truth_lat =
            build_linear_chain(3, 18.0_f64, 1.1, 0.0, 1.2, None).unwrap().with_beta(vec![0.0, 0.0, 0.3]).unwrap();
        let truth_eff = PortEfficiencies::new(vec![1.0; 3], vec![0.7, 1.0, 1.0]).unwrap();
        let observed: Vec<_> = (0..3)
            .map(|q| Observation { input: q, intensities: classical_intensities(&truth_lat, &truth_eff, q).unwrap() })
            .collect();
        let template = build_linear_chain(3, 18.0_f64, 1.1, 0.0, 1.2, None).unwrap();
        let free = vec![
            ParameterBounds { parameter: FitParameter::Beta(2), lower: -0.5, upper: 0.5 },
            ParameterBounds { parameter: FitParameter::EtaOut(0), lower: 0.2, upper: 1.0 },
        ];
        let fit = calibrate(&CalibrationProblem::new(observed, free, 1e-16), &template).unwrap();
        assert!((fit.parameters[0].1 - 0.3).abs() < 1e-4, "{:?}", fit.parameters);
        assert!((fit.efficiencies.eta_out[0] - 0.7).abs() < 1e-5);
    }

    #[test]
    fn problem_validation() {
        let template = build_linear_chain(3, 18.0_f64, 1.0, 0.0, 1.0, None).unwrap();
        let obs = vec![Observation { input: 0, intensities: vec![0.5, 0.3, 0.2] }];
        let bound = |parameter, lower, upper| ParameterBounds { parameter, lower, upper };

        let many = (0..4).map(|q| bound(FitParameter::EtaOut(q % 3), 0.1, 1.0)).collect();
        assert!(matches!(
            calibrate(
                &CalibrationProblem::new(vec![Observation { input: 0, intensities: vec![0.1; 3] }], many, 0.0),
                &template
            ),
            Err(Error::Underdetermined { .. }) | Err(Error::InvalidArgument(_))
        ));
        let under = (0..3)
            .map(|q| bound(FitParameter::EtaOut(q), 0.1, 1.0))
            .chain([bound(FitParameter::EtaIn(0), 0.1, 1.0)])
            .collect();
        assert!(matches!(
            calibrate(&CalibrationProblem::new(obs.clone(), under, 0.0), &template),
            Err(Error::Underdetermined { observations: 3, parameters: 4 })
        ));
        let gauge = vec![bound(FitParameter::Beta(0), -1.0, 1.0)];
        assert!(calibrate(&CalibrationProblem::new(obs.clone(), gauge, 0.0), &template).is_err());
        let outside = vec![bound(FitParameter::CouplingScale, 1.5, 2.0)];
        assert!(matches!(
            calibrate(&CalibrationProblem::new(obs.clone(), outside, 0.0), &template),
            Err(Error::BoundsViolated(_))
        ));
        let inverted = vec![bound(FitParameter::CouplingScale, 2.0, 0.5)];
        assert!(matches!(
            calibrate(&CalibrationProblem::new(obs.clone(), inverted, 0.0), &template),
            Err(Error::BoundsViolated(_))
        ));
        let too_bright = vec![Observation { input: 0, intensities: vec![0.5, 0.5, 0.5] }];
        let ok = vec![bound(FitParameter::CouplingScale, 0.5, 2.0)];
        assert!(calibrate(&CalibrationProblem::new(too_bright, ok.clone(), 0.0), &template).is_err());
        let explicit = template.with_coupling(template.coupling().clone()).unwrap();
        assert!(calibrate(&CalibrationProblem::new(obs, ok, 0.0), &explicit).is_err());
    }

    #[test]
    fn swiss_cross_explicit_coupling_fit() {
        let model = CouplingModel::evanescent(1.5, 18.0).unwrap();
        let truth = build_swiss_cross(18.0_f64, 19.0, 1.5, 0.0, 1.4, &model).unwrap();
        let mut c = truth.coupling().clone();
        c[(0, 1)] = 1.62;
        c[(1, 0)] = 1.62;
        let truth = truth.with_coupling(c).unwrap();
        let eff = PortEfficiencies::lossless(9);
        let observed: Vec<_> = [0, 4, 5]
            .iter()
            .map(|&q| Observation { input: q, intensities: classical_intensities(&truth, &eff, q).unwrap() })
            .collect();
        let template = build_swiss_cross(18.0_f64, 19.0, 1.5, 0.0, 1.4, &model).unwrap();
        let free = vec![ParameterBounds { parameter: FitParameter::Coupling(0, 1), lower: 1.0, upper: 2.0 }];
        let mut problem = CalibrationProblem::new(observed, free, 1e-18);
        problem.restarts = 4;
        let fit = calibrate(&problem, &template).unwrap();
        assert!((fit.parameters[0].1 - 1.62).abs() < 1e-6, "{:?}", fit.parameters);
        assert!(fit.lattice.model().is_none());
    }
}
