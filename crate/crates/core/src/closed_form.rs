//! Closed-form near-field array factors and the separable ambiguity model.
//!
//! Every normalized array factor depends on range only through
//! `x = d_FA · |1/d − 1/d′|`:
//!
//! | kind | `f(x)`                                   | first null |
//! |------|------------------------------------------|------------|
//! | ULA  | `(4/x)(C² + S²)(√(x/4))`                 | none       |
//! | UCA  | `J0²(πx/16)`                             | 12.24      |
//! | URA  | `[(8/x)(C² + S²)(√(x/8))]²` at broadside | none       |
//! | UPCA | `sinc²(x/16)`                            | 16         |

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{AmbiguityCurve, Provenance, RadialGrid};
use crate::error::{Error, Result};
use crate::exact_mf::{array_factor_exact, SensingConfig};
use crate::geometry::{
    effective_aperture, fraunhofer_distance, max_correction_term, vergence, ArrayGeometry, EffectiveAperture,
    GeometryKind, Processing,
};
use crate::specfun::{bessel_j0_unchecked, fresnel_unchecked, sinc};
use crate::waveform::{chi_rect_monostatic, WindowSpec};

/// Below this argument the closed forms return their limit value 1.
const X_SINGULAR: f64 = 1e-8;

/// Angular tolerance when matching a ray against a supported cut.
const ANGLE_TOL: f64 = 1e-9;

fn fresnel_factor(x: f64) -> f64 {
    if x < X_SINGULAR {
        return 1.0;
    }
    (4.0 / x) * fresnel_unchecked((x / 4.0).sqrt()).norm_sqr()
}

/// Normalized `|AF|²` (peak 1) as a function of `x = d_FA · d_ver` along the boresight cut.
pub fn af_closed_normalized(kind: GeometryKind, x: f64) -> f64 {
    let x = x.abs();
    if x < X_SINGULAR {
        return 1.0;
    }
    match kind {
        GeometryKind::Ula => fresnel_factor(x),
        GeometryKind::Uca => {
            let j = bessel_j0_unchecked(PI * x / 16.0);
            j * j
        }
        GeometryKind::Ura => {
            let f = fresnel_factor(x / 2.0);
            f * f
        }
        GeometryKind::Upca => {
            let s = sinc(x / 16.0);
            s * s
        }
    }
}

/// Un-normalized `|AF|²` (peak `m_elements`) along the boresight cut.
pub fn af_closed(kind: GeometryKind, d_prime: f64, d: f64, d_fa: f64, m_elements: usize) -> f64 {
    m_elements as f64 * af_closed_normalized(kind, d_fa * vergence(d, d_prime))
}

/// Un-normalized `|AF|²` toward `(theta_p, phi_p)` using effective apertures.
///
/// ULA and URA accept any direction. UCA is limited to rays in the array
/// plane and UPCA to the array normal, the only cuts their closed forms cover.
pub fn af_closed_offaxis(d_prime: f64, d: f64, theta_p: f64, phi_p: f64, geometry: &ArrayGeometry) -> Result<f64> {
    let kind = geometry.kind();
    let m = geometry.len() as f64;
    let v = vergence(d, d_prime);
    let normalized = match kind {
        GeometryKind::Ula | GeometryKind::Ura => {
            match effective_aperture(kind, geometry.aperture_d(), theta_p, phi_p) {
                EffectiveAperture::Single(de) => fresnel_factor(fraunhofer_distance(de) * v),
                EffectiveAperture::PerAxis { x, y } => {
                    fresnel_factor(fraunhofer_distance(x) * v) * fresnel_factor(fraunhofer_distance(y) * v)
                }
            }
        }
        GeometryKind::Uca => {
            if (theta_p - FRAC_PI_2).abs() > ANGLE_TOL {
                return Err(Error::UnsupportedCut(format!(
                    "UCA closed form holds only in the array plane (θ = π/2), got θ = {theta_p}"
                )));
            }
            af_closed_normalized(kind, fraunhofer_distance(geometry.aperture_d()) * v)
        }
        GeometryKind::Upca => {
            if theta_p.abs() > ANGLE_TOL {
                return Err(Error::UnsupportedCut(format!(
                    "UPCA closed form holds only on the array normal (θ = 0), got θ = {theta_p}"
                )));
            }
            af_closed_normalized(kind, fraunhofer_distance(geometry.aperture_d()) * v)
        }
    };
    Ok(m * normalized)
}

/// Bandwidth factor used in the separable model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandwidthModel {
    /// `K`-subcarrier OFDM with the configured window.
    Ofdm,
    /// Continuous rectangular spectrum, the `K → ∞` limit.
    Sinc,
}

/// Where the array-factor terms of the separable model come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AfSource {
    ClosedForm,
    /// Brute-force element sums: isolates the error of the bandwidth factorization.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxOptions {
    pub bandwidth: BandwidthModel,
    pub af_source: AfSource,
}

impl Default for ApproxOptions {
    fn default() -> Self {
        Self { bandwidth: BandwidthModel::Ofdm, af_source: AfSource::ClosedForm }
    }
}

/// `|χ_B(d − d′)|²` sampled on the grid.
pub fn bandwidth_power(cfg: &SensingConfig, grid: &RadialGrid, model: BandwidthModel) -> Result<Vec<f64>> {
    let d0 = grid.d_prime;
    match model {
        BandwidthModel::Sinc => Ok(grid
            .samples()
            .iter()
            .map(|d| {
                let c = chi_rect_monostatic(cfg.b_frac, d - d0);
                c * c
            })
            .collect()),
        BandwidthModel::Ofdm => {
            let w: WindowSpec = cfg.window_spec()?;
            Ok(grid
                .samples()
                .iter()
                .map(|d| {
                    let c = w.chi(cfg.b_frac, d - d0);
                    c * c
                })
                .collect())
        }
    }
}

/// Normalized closed-form `|AF|²` of one aperture sampled on the grid.
pub fn af_closed_curve(geometry: &ArrayGeometry, grid: &RadialGrid) -> Result<Vec<f64>> {
    let m = geometry.len() as f64;
    grid.samples()
        .par_iter()
        .map(|&d| af_closed_offaxis(grid.d_prime, d, grid.theta, grid.phi, geometry).map(|v| v / m))
        .collect()
}

/// Bandwidth-only curve: the waveform factor alone.
pub fn ambiguity_bandwidth_only(
    cfg: &SensingConfig,
    grid: &RadialGrid,
    model: BandwidthModel,
) -> Result<AmbiguityCurve> {
    let raw = bandwidth_power(cfg, grid, model)?;
    Ok(AmbiguityCurve::from_raw(grid.clone(), raw, 1.0, Provenance::BandwidthOnly))
}

/// Array-factor-only curve from the closed forms, raised to the mode's power.
pub fn array_factor_closed(geometry: &ArrayGeometry, mode: Processing, grid: &RadialGrid) -> Result<AmbiguityCurve> {
    let p = mode.af_power();
    let raw: Vec<f64> = af_closed_curve(geometry, grid)?.into_iter().map(|v| v.powi(p)).collect();
    Ok(AmbiguityCurve::from_raw(grid.clone(), raw, 1.0, Provenance::AfOnly)
        .with_warnings(grid.validity_warnings(geometry.aperture_d())))
}

/// Separable approximation `|χ_B|² · |AF|²` (SIMO/MISO) or `|χ_B|² · |AF|⁴` (MIMO),
/// with the OFDM bandwidth factor and closed-form array factors.
pub fn ambiguity_approx(cfg: &SensingConfig, grid: &RadialGrid) -> Result<AmbiguityCurve> {
    ambiguity_approx_with(cfg, grid, ApproxOptions::default())
}

/// [`ambiguity_approx`] with a choice of bandwidth model and array-factor source.
pub fn ambiguity_approx_with(cfg: &SensingConfig, grid: &RadialGrid, opts: ApproxOptions) -> Result<AmbiguityCurve> {
    cfg.validate()?;
    let chi = bandwidth_power(cfg, grid, opts.bandwidth)?;
    let af = match opts.af_source {
        AfSource::ClosedForm => af_closed_curve(&cfg.array, grid)?,
        AfSource::Exact => array_factor_exact(&cfg.array, grid).values_linear,
    };
    let p = cfg.mode.af_power();
    let raw: Vec<f64> = chi.iter().zip(&af).map(|(c, a)| c * a.powi(p)).collect();
    let peak = (cfg.array.len() as f64).powi(p);
    let mut curve = AmbiguityCurve::from_raw(grid.clone(), raw, 1.0, Provenance::Approx);
    curve.peak_gain = peak;
    Ok(curve.with_warnings(grid.validity_warnings(cfg.array.aperture_d())))
}

/// Bandwidth-aperture constraint for a geometry and processing mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub kind: GeometryKind,
    pub mode: Processing,
    /// `B_f · D_λ` being checked, if any.
    pub product: Option<f64>,
    /// Tabulated bound on `B_f · D_λ`.
    pub limit: f64,
    /// `D / max|Δδ|` from the brute-force correction term.
    pub recomputed_limit: f64,
    /// `product ≤ limit / 4`, if a product was given.
    pub satisfied_quarter: Option<bool>,
}

impl ConstraintReport {
    pub fn check(mut self, product: f64) -> Self {
        self.product = Some(product);
        self.satisfied_quarter = Some(product <= self.limit / 4.0);
        self
    }

    pub fn exceeded(&self) -> bool {
        self.product.is_some_and(|p| p > self.limit)
    }
}

/// Aperture used to recompute constraint limits from a discrete array.
pub const CONSTRAINT_APERTURE: f64 = 1000.0;

/// Tabulated limit on `B_f · D_λ`: 10 (9.615 for UCA) for one aperture, halved for MIMO.
pub fn tabulated_limit(kind: GeometryKind, mode: Processing) -> f64 {
    let simo = match kind {
        GeometryKind::Uca => 9.615,
        _ => 10.0,
    };
    simo / mode.af_power() as f64
}

/// Constraint report with the limit recomputed on a `D = 1000 λ` array.
pub fn separability_constraint(kind: GeometryKind, mode: Processing) -> Result<ConstraintReport> {
    separability_constraint_at(kind, mode, CONSTRAINT_APERTURE)
}

/// Constraint report with the limit recomputed on an array of aperture `aperture_d`.
pub fn separability_constraint_at(kind: GeometryKind, mode: Processing, aperture_d: f64) -> Result<ConstraintReport> {
    let g = ArrayGeometry::build(kind, aperture_d, 0.5)?;
    let recomputed_limit = aperture_d / max_correction_term(&g, mode);
    Ok(ConstraintReport {
        kind,
        mode,
        product: None,
        limit: tabulated_limit(kind, mode),
        recomputed_limit,
        satisfied_quarter: None,
    })
}
