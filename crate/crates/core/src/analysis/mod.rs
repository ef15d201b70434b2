//! Comparison metrics, delay scans and device calibration.

mod calibration;
mod metrics;
mod simplex;

pub use calibration::{
    calibrate, classical_intensities, gauge_site, CalibrationProblem, CalibrationResult, FitParameter, Observation,
    ParameterBounds, DEFAULT_RESTARTS,
};
pub use metrics::{gaussian_overlap, hom_scan, hom_scan_with_peak, hom_visibility, similarity, HomScan};
pub use simplex::{minimize, SimplexOptions, SimplexOutcome};
