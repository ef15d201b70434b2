//! Checks against reference implementations that share no code with the crate.

mod common;

use common::*;
use nalgebra::DMatrix;
use photonwalk::configspace::pair_index;
use photonwalk::correlations::path_amplitudes;
use photonwalk::evolution::unitarity_error;
use photonwalk::{
    distinguishable_correlations, expand, partial_correlations, propagator, quantum_correlations, simulate_on_graph,
    Propagator64,
};
use std::f64::consts::PI;

#[test]
fn propagator_matches_taylor_exponential() {
    let mut rng = rng(11);
    for n in 1..=10 {
        for _ in 0..5 {
            let h = random_hamiltonian(n, &mut rng);
            let z = 0.37 * n as f64;
            let p = propagator(&h, z).unwrap();
            let reference = reference_propagator(&h, z);
            assert!(max_abs_diff_c(p.matrix(), &reference) < 1e-11, "n = {n}");
        }
    }
}

#[test]
fn coupler_matches_closed_form() {
    for &(c, b0, b1, z) in &[(1.0, 0.0, 0.0, 0.4), (1.5, 0.3, -0.2, 1.4), (0.7, 2.0, 0.0, 3.1), (0.0, 0.5, 0.1, 2.0)] {
        let h = DMatrix::from_row_slice(2, 2, &[b0, c, c, b1]);
        let p = propagator(&h, z).unwrap();
        assert!(max_abs_diff_c(p.matrix(), &coupler_propagator(c, b0, b1, z)) < 1e-13);
    }
}

#[test]
fn balanced_coupler_gives_textbook_hom_matrices() {
    let h = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let p = propagator(&h, PI / 4.0).unwrap();
    let q = quantum_correlations(&p, 0, 1).unwrap().gamma;
    let d = distinguishable_correlations(&p, 0, 1).unwrap().gamma;
    let expect_q = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]);
    let expect_d = DMatrix::from_row_slice(2, 2, &[0.25, 0.5, 0.5, 0.25]);
    assert!(max_abs_diff(&q, &expect_q) < 1e-12);
    assert!(max_abs_diff(&d, &expect_d) < 1e-12);
}

#[test]
fn correlations_match_two_particle_evolution() {
    let mut rng = rng(12);
    for n in 2..=6 {
        for _ in 0..4 {
            let h = random_hamiltonian(n, &mut rng);
            let z = 1.3;
            let p = propagator(&h, z).unwrap();
            for q in 0..n {
                for r in q..n {
                    let quantum = quantum_correlations(&p, q, r).unwrap().gamma;
                    assert!(max_abs_diff(&quantum, &two_photon_reference(&h, z, q, r, 1.0)) < 1e-11);
                    if q != r {
                        let dist = distinguishable_correlations(&p, q, r).unwrap().gamma;
                        assert!(max_abs_diff(&dist, &two_photon_reference(&h, z, q, r, 0.0)) < 1e-11);
                        let partial = partial_correlations(&p, q, r, 0.62).unwrap().gamma;
                        assert!(max_abs_diff(&partial, &two_photon_reference(&h, z, q, r, 0.62)) < 1e-11);
                    }
                }
            }
        }
    }
}

#[test]
fn pair_graph_walk_matches_two_particle_evolution() {
    let mut rng = rng(13);
    for n in 1..=5 {
        let lattice = random_lattice(n, &mut rng);
        let g = expand(&lattice);
        let h = lattice.hamiltonian();
        for q in 0..n {
            for r in q..n {
                let probs = simulate_on_graph(&g, (q, r), lattice.length_cm()).unwrap();
                let reference = two_photon_reference(&h, lattice.length_cm(), q, r, 1.0);
                for a in 0..n {
                    for b in a..n {
                        assert!((probs[pair_index(n, a, b)] - reference[(a, b)]).abs() < 1e-11);
                    }
                }
            }
        }
    }
}

#[test]
fn interference_term_is_a_permanent() {
    let mut rng = rng(14);
    for _ in 0..100 {
        let u = random_unitary(4, &mut rng);
        assert!(unitarity_error(&u) < 1e-12);
        let p = Propagator64::from_unitary(u.clone(), 1e-12).unwrap();
        for (q, r) in [(0, 1), (1, 3), (2, 3)] {
            let gamma = quantum_correlations(&p, q, r).unwrap().gamma;
            for a in 0..4 {
                for b in a..4 {
                    let sub = DMatrix::from_fn(2, 2, |i, j| u[([a, b][i], [q, r][j])]);
                    let perm = permanent(&sub).norm_sqr();
                    let (x, y) = path_amplitudes(&p, q, r, a, b);
                    assert!(((x + y).norm_sqr() - perm).abs() < 1e-12);
                    let bunched = if a == b { 2.0 } else { 1.0 };
                    assert!((gamma[(a, b)] * bunched - perm).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn ryser_permanent_known_values() {
    let ones = DMatrix::from_element(3, 3, C64::new(1.0, 0.0));
    assert!((permanent(&ones) - C64::new(6.0, 0.0)).norm() < 1e-12);
    let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]).map(|x| C64::new(x, 0.0));
    assert!((permanent(&m) - C64::new(10.0, 0.0)).norm() < 1e-12);
}
