//! Exact and closed-form near-field range ambiguity functions for antenna arrays.
//!
//! Lengths are measured in wavelengths and bandwidths are fractional, so
//! `B/c` is simply `b_frac`. The exact matched filter sums over every element
//! pair; the closed forms factor the ambiguity into a bandwidth term times one
//! near-field array factor per aperture.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with the bad range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_form;
pub mod curve;
pub mod error;
pub mod exact_mf;
pub mod export;
pub mod geometry;
pub mod metrics;
pub mod specfun;
pub mod waveform;

mod sum;

pub use closed_form::{
    af_closed, af_closed_normalized, af_closed_offaxis, ambiguity_approx, separability_constraint, AfSource,
    ApproxOptions, BandwidthModel, ConstraintReport,
};
pub use curve::{AmbiguityCurve, Provenance, RadialGrid};
pub use error::{Error, Result};
pub use exact_mf::{ambiguity_exact, ambiguity_exact_ofdm, array_factor_exact, SensingConfig};
pub use geometry::{
    effective_aperture, fraunhofer_distance, max_correction_term, vergence, ArrayGeometry, GeometryKind, GeometrySpec,
    Point, Position, Processing, Ray,
};
pub use metrics::{
    bd_min_asymptotic, beamdepth, boundary_nf_bw, db_rmse, half_power_width, isl, min_aperture, min_bw_for_psl,
    min_fbw, psl, solve_alpha, BandwidthRatio, Beamdepth, SidelobeLevel,
};
pub use waveform::{chi_ofdm, chi_rect, chi_windowed, make_window, WindowKind, WindowSpec};

/// Size the global rayon pool from `NF_THREADS`, if set.
///
/// Returns the thread count in effect. Calling this after the pool has been
/// initialized leaves the existing pool untouched.
pub fn init_threads_from_env() -> usize {
    if let Some(n) = std::env::var("NF_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    rayon::current_num_threads()
}
