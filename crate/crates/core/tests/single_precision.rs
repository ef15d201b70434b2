//! The same pipeline in `f32`, compared against `f64`.

use photonwalk::lattice::{DEFAULT_CUTOFF_UM, DEFAULT_DECAY_UM};
use photonwalk::nonclassicality::violation_values;
use photonwalk::{
    build_swiss_cross, distinguishable_correlations, expand, propagator, quantum_correlations, simulate_on_graph,
    CouplingModel, Lattice, Lattice32,
};

#[test]
fn single_precision_tracks_double_precision() {
    let m32 = CouplingModel::new(1.5f32, 18.0, DEFAULT_DECAY_UM as f32, DEFAULT_CUTOFF_UM as f32, true).unwrap();
    let m64 = CouplingModel::new(1.5f64, 18.0, DEFAULT_DECAY_UM, DEFAULT_CUTOFF_UM, true).unwrap();
    let l32: Lattice32 = build_swiss_cross(18.0, 19.0, 1.5, 0.0, 1.4, &m32).unwrap();
    let l64: Lattice = build_swiss_cross(18.0, 19.0, 1.5, 0.0, 1.4, &m64).unwrap();

    let p32 = propagator(&l32.hamiltonian(), 1.4).unwrap();
    let p64 = propagator(&l64.hamiltonian(), 1.4).unwrap();
    let q32 = quantum_correlations(&p32, 0, 4).unwrap();
    let q64 = quantum_correlations(&p64, 0, 4).unwrap();
    assert!((q32.unordered_total() - 1.0).abs() < 1e-5);
    assert!(q32.gamma.iter().zip(q64.gamma.iter()).all(|(a, b)| (*a as f64 - b).abs() < 1e-5));
    let d32 = distinguishable_correlations(&p32, 0, 4).unwrap();
    assert!(violation_values(&d32.gamma).max() <= 1e-6);

    let v32 = violation_values(&q32.gamma);
    let v64 = violation_values(&q64.gamma);
    for (a, b) in v32.iter().zip(v64.iter()) {
        if b.abs() > 1e-4 {
            assert_eq!(a.signum() as f64, b.signum());
        }
    }

    let g = expand(&l32);
    let walk = simulate_on_graph(&g, (0, 4), 1.4f32).unwrap();
    assert!((walk.iter().sum::<f32>() - 1.0).abs() < 1e-5);
}
