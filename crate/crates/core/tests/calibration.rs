mod common;

use photonwalk::analysis::{classical_intensities, FitParameter, Observation, ParameterBounds};
use photonwalk::lattice::DEFAULT_CUTOFF_UM;
use photonwalk::{
    build_linear_chain, build_swiss_cross, calibrate, CalibrationProblem, CouplingModel, Efficiencies, Lattice,
};
use rand::Rng;

fn swiss_cross(c1: f64, decay: f64) -> Lattice {
    let model = CouplingModel::new(c1, 18.0, decay, DEFAULT_CUTOFF_UM, true).unwrap();
    build_swiss_cross(18.0, 19.0, c1, 0.0, 1.4, &model).unwrap()
}

fn observations(truth: &Lattice) -> Vec<Observation<f64>> {
    let eff = Efficiencies::lossless(truth.n_sites());
    (0..truth.n_sites())
        .map(|q| Observation { input: q, intensities: classical_intensities(truth, &eff, q).unwrap() })
        .collect()
}

#[test]
fn single_coupling_is_recovered_exactly() {
    let mut g = common::rng(31);
    for _ in 0..10 {
        let c = g.random_range(0.6..1.4);
        let z = g.random_range(0.5..1.0);
        let truth = build_linear_chain(2, 18.0, c, 0.0, z, None).unwrap();
        let template = build_linear_chain(2, 18.0, 1.0, 0.0, z, None).unwrap();
        // keeps Cz below π/2, where the transfer is one-to-one
        let free = vec![ParameterBounds { parameter: FitParameter::CouplingScale, lower: 0.5, upper: 1.5 }];
        let fit =
            calibrate(&CalibrationProblem::new(observations(&truth)[..1].to_vec(), free, 1e-20), &template).unwrap();
        assert!((fit.parameters[0].1 - c).abs() < 1e-6, "{c} vs {:?}", fit.parameters);
    }
}

#[test]
fn swiss_cross_model_parameters_are_recovered() {
    let truth = swiss_cross(1.5, 6.0);
    let template = swiss_cross(1.2, 8.0);
    let free = vec![
        ParameterBounds { parameter: FitParameter::CouplingScale, lower: 0.8, upper: 2.5 },
        ParameterBounds { parameter: FitParameter::DecayLength, lower: 3.0, upper: 12.0 },
    ];
    let fit = calibrate(&CalibrationProblem::new(observations(&truth), free, 1e-16), &template).unwrap();
    assert!(fit.converged, "{fit:?}");
    assert!((fit.parameters[0].1 / 1.5 - 1.0).abs() < 1e-3);
    assert!((fit.parameters[1].1 / 6.0 - 1.0).abs() < 1e-3);
    assert!(fit.residual <= fit.initial_residual);
}

#[test]
fn fit_never_ends_above_the_template() {
    let truth = swiss_cross(1.5, 6.0);
    let template = swiss_cross(1.5, 6.0);
    let free = vec![ParameterBounds { parameter: FitParameter::CouplingScale, lower: 1.0, upper: 2.0 }];
    let mut problem = CalibrationProblem::new(observations(&truth), free, 0.0);
    problem.restarts = 3;
    let fit = calibrate(&problem, &template).unwrap();
    assert!(fit.residual <= fit.initial_residual);
    assert!(fit.initial_residual < 1e-28);
}

#[test]
fn calibration_is_deterministic() {
    let truth = swiss_cross(1.4, 6.0);
    let template = swiss_cross(1.0, 6.0);
    let free = vec![ParameterBounds { parameter: FitParameter::CouplingScale, lower: 0.5, upper: 2.0 }];
    let mut problem = CalibrationProblem::new(observations(&truth), free, 1e-14);
    problem.seed = 4;
    problem.restarts = 6;
    let a = calibrate(&problem, &template).unwrap();
    let b = calibrate(&problem, &template).unwrap();
    assert_eq!(a.parameters, b.parameters);
    assert_eq!(a.residual, b.residual);
}
