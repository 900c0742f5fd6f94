//! Resolution and sidelobe metrics derived from the closed forms and from sampled curves.

use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::closed_form::{
    af_closed_normalized, ambiguity_approx_with, ambiguity_bandwidth_only, ApproxOptions, BandwidthModel,
};
use crate::curve::{AmbiguityCurve, RadialGrid};
use crate::error::{Error, Result};
use crate::exact_mf::SensingConfig;
use crate::geometry::{fraunhofer_distance, GeometryKind, Processing, MIN_DISTANCE_FACTOR};
use crate::waveform::{make_window, WindowKind, WindowSpec};

/// `BD_min = 1.44 α` in wavelengths.
pub const BD_MIN_COEFF: f64 = 1.44;

/// One-way 3 dB range resolution of a rectangular spectrum, `0.443 / B_f`.
pub const RANGE_RES_COEFF: f64 = 0.443;

/// `B_f,min = η · 0.308 / α`: bandwidth whose range resolution equals `BD_min`.
pub const FBW_COEFF: f64 = 0.308;

/// `D_min = 0.6 α √(η/(η−1))`.
pub const APERTURE_COEFF: f64 = 0.6;

/// Floor applied to both curves before the dB-RMSE.
pub const RMSE_FLOOR_DB: f64 = -120.0;

fn serialize_inf<S: Serializer>(v: f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v == f64::INFINITY {
        s.serialize_str("inf")
    } else if v == f64::NEG_INFINITY {
        s.serialize_str("-inf")
    } else {
        s.serialize_f64(v)
    }
}

/// Serialize an `f64`, writing infinities as the strings `"inf"` / `"-inf"`.
pub fn serialize_f64_inf<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    serialize_inf(*v, s)
}

fn serialize_opt_f64_inf<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => serialize_inf(*x, s),
        None => s.serialize_none(),
    }
}

/// Half-power argument `x = d_FA d_ver` of the normalized closed-form AF.
///
/// SIMO/MISO solves `f(x) = 1/2`; MIMO squares the AF and solves `f(x) = 2^(−1/2)`.
pub fn solve_alpha(kind: GeometryKind, mode: Processing) -> f64 {
    let target = match mode {
        Processing::SimoMiso => 0.5,
        Processing::Mimo => std::f64::consts::FRAC_1_SQRT_2,
    };
    // upper brackets sit below each kind's first null
    let hi = match kind {
        GeometryKind::Uca => 12.0,
        GeometryKind::Upca => 15.9,
        GeometryKind::Ula | GeometryKind::Ura => 20.0,
    };
    bisect(|x| af_closed_normalized(kind, x) - target, 1e-9, hi, 1e-12)
}

/// Root of a function that changes sign once on `[lo, hi]`.
pub(crate) fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let flo = f(lo);
    while hi - lo > tol * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// A beamdepth, which becomes infinite beyond `d_FA / α`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub enum Beamdepth {
    Finite(f64),
    Infinite,
}

impl Beamdepth {
    pub fn value(self) -> f64 {
        match self {
            Self::Finite(v) => v,
            Self::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Self::Infinite)
    }
}

impl Serialize for Beamdepth {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_inf(self.value(), s)
    }
}

/// `BD = 2α d_FA d′² / (d_FA² − α² d′²)` with `d_FA = 2 D²`.
pub fn beamdepth(d_ap: f64, d_prime: f64, alpha: f64) -> Beamdepth {
    let d_fa = fraunhofer_distance(d_ap);
    let denom = d_fa * d_fa - alpha * alpha * d_prime * d_prime;
    if denom <= 0.0 {
        Beamdepth::Infinite
    } else {
        Beamdepth::Finite(2.0 * alpha * d_fa * d_prime * d_prime / denom)
    }
}

/// Beamdepth at `1.2 D` in the large-aperture limit: `1.44 α`.
pub fn bd_min_asymptotic(alpha: f64) -> f64 {
    BD_MIN_COEFF * alpha
}

/// Smallest aperture whose `BD(1.2D)` is within a factor `eta` of `BD_min`.
pub fn min_aperture(eta: f64, alpha: f64) -> Result<f64> {
    if !(eta > 1.0) {
        return Err(Error::Domain(format!("eta must exceed 1, got {eta}")));
    }
    Ok(APERTURE_COEFF * alpha * (eta / (eta - 1.0)).sqrt())
}

/// Fractional bandwidth whose range resolution is `eta · BD_min`-matched: `η · 0.308 / α`.
pub fn min_fbw(eta: f64, alpha: f64) -> Result<f64> {
    if !(eta >= 1.0) {
        return Err(Error::Domain(format!("eta must be at least 1, got {eta}")));
    }
    Ok(eta * FBW_COEFF / alpha)
}

/// `B_f,min · D_min`, independent of α: `0.185 η √(η/(η−1))`.
pub fn min_product(eta: f64) -> Result<f64> {
    Ok(min_aperture(eta, 1.0)? * min_fbw(eta, 1.0)?)
}

/// Distance where beamfocusing and bandwidth give equal resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NfBwBoundary {
    /// Closed-form root of `BD(D, d) = 0.443 / B_f`.
    pub raw: f64,
    /// `raw` clamped into the near-field region `[1.2D, d_FA/α]`.
    pub clamped: f64,
}

/// `d = √(1.772 D⁴ / (4 α B_f D² + 0.443 α²))`.
pub fn boundary_nf_bw(d_ap: f64, b_frac: f64, alpha: f64) -> NfBwBoundary {
    let d2 = d_ap * d_ap;
    let raw = (4.0 * RANGE_RES_COEFF * d2 * d2 / (4.0 * alpha * b_frac * d2 + RANGE_RES_COEFF * alpha * alpha)).sqrt();
    let (lo, hi) = nf_region(d_ap, alpha);
    NfBwBoundary { raw, clamped: raw.clamp(lo, hi) }
}

/// Radiative near-field region `[1.2 D, d_FA / α]`.
pub fn nf_region(d_ap: f64, alpha: f64) -> (f64, f64) {
    (MIN_DISTANCE_FACTOR * d_ap, fraunhofer_distance(d_ap) / alpha)
}

/// Sidelobe level of a curve; `NoSidelobes` when nothing lies outside the mainlobe.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub enum SidelobeLevel {
    Db(f64),
    NoSidelobes,
}

impl SidelobeLevel {
    pub fn db(self) -> f64 {
        match self {
            Self::Db(v) => v,
            Self::NoSidelobes => f64::NEG_INFINITY,
        }
    }
}

impl Serialize for SidelobeLevel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_inf(self.db(), s)
    }
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

/// Mainlobe bounds `[l, r]` (inclusive): walk from the global peak down to the
/// first local minimum on each side.
pub fn mainlobe_bounds(values: &[f64]) -> (usize, usize) {
    let p = argmax(values);
    let mut l = p;
    while l > 0 && values[l - 1] <= values[l] {
        l -= 1;
    }
    let mut r = p;
    while r + 1 < values.len() && values[r + 1] <= values[r] {
        r += 1;
    }
    (l, r)
}

/// Contiguous index range around the peak where the curve stays at or above `level_db`.
pub fn mainlobe_above(curve: &AmbiguityCurve, level_db: f64) -> Range<usize> {
    let v = &curve.values_db;
    let p = curve.peak_index();
    let mut l = p;
    while l > 0 && v[l - 1] >= level_db {
        l -= 1;
    }
    let mut r = p;
    while r + 1 < v.len() && v[r + 1] >= level_db {
        r += 1;
    }
    l..r + 1
}

/// Full width of the region around the peak that stays at or above half the
/// peak value, with both crossings linearly interpolated.
///
/// `None` when the curve does not fall to half power on both sides.
pub fn half_power_width(curve: &AmbiguityCurve) -> Option<f64> {
    let v = &curve.values_linear;
    let x = curve.grid.samples();
    let p = curve.peak_index();
    let half = 0.5 * v[p];
    let cross = |i: usize, j: usize| x[i] + (half - v[i]) * (x[j] - x[i]) / (v[j] - v[i]);
    let mut l = p;
    while l > 0 && v[l - 1] >= half {
        l -= 1;
    }
    let mut r = p;
    while r + 1 < v.len() && v[r + 1] >= half {
        r += 1;
    }
    if l == 0 || r + 1 == v.len() {
        return None;
    }
    Some(cross(r, r + 1) - cross(l - 1, l))
}

/// PSL in dB of raw (not necessarily normalized) samples.
pub fn psl_of(values: &[f64]) -> SidelobeLevel {
    if values.is_empty() {
        return SidelobeLevel::NoSidelobes;
    }
    let (l, r) = mainlobe_bounds(values);
    let peak = values[argmax(values)];
    let side = values[..l].iter().chain(&values[r + 1..]).copied().fold(0.0, f64::max);
    if side <= 0.0 || peak <= 0.0 {
        SidelobeLevel::NoSidelobes
    } else {
        SidelobeLevel::Db(10.0 * (side / peak).log10())
    }
}

fn trapz(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1])).sum()
}

/// ISL in dB of raw samples over abscissae `x`.
pub fn isl_of(x: &[f64], values: &[f64]) -> SidelobeLevel {
    if values.len() < 2 {
        return SidelobeLevel::NoSidelobes;
    }
    let (l, r) = mainlobe_bounds(values);
    let main = trapz(&x[l..=r], &values[l..=r]);
    let side = trapz(&x[..=l], &values[..=l]) + trapz(&x[r..], &values[r..]);
    if side <= 0.0 || main <= 0.0 {
        SidelobeLevel::NoSidelobes
    } else {
        SidelobeLevel::Db(10.0 * (side / main).log10())
    }
}

/// Peak-to-highest-sidelobe ratio of a curve, mainlobe bounded by the first minima.
pub fn psl(curve: &AmbiguityCurve) -> SidelobeLevel {
    psl_of(&curve.values_linear)
}

/// Sidelobe-to-mainlobe energy ratio, trapezoid-integrated over the grid.
pub fn isl(curve: &AmbiguityCurve) -> SidelobeLevel {
    isl_of(curve.grid.samples(), &curve.values_linear)
}

fn same_grid(a: &AmbiguityCurve, b: &AmbiguityCurve) -> Result<()> {
    if a.grid.samples() != b.grid.samples() || a.grid.d_prime != b.grid.d_prime {
        return Err(Error::GridMismatch(format!(
            "curves sampled on different grids ({} vs {} points)",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// RMS difference of two curves in dB, each floored at −120 dB.
pub fn db_rmse(a: &AmbiguityCurve, b: &AmbiguityCurve) -> Result<f64> {
    db_rmse_over(a, b, 0..a.len())
}

/// [`db_rmse`] restricted to an index range.
pub fn db_rmse_over(a: &AmbiguityCurve, b: &AmbiguityCurve, range: Range<usize>) -> Result<f64> {
    same_grid(a, b)?;
    if range.is_empty() || range.end > a.len() {
        return Err(Error::InvalidGrid(format!("range {range:?} is empty or out of bounds")));
    }
    let n = range.len() as f64;
    let ss: f64 = range
        .map(|i| {
            let x = a.values_db[i].max(RMSE_FLOOR_DB);
            let y = b.values_db[i].max(RMSE_FLOOR_DB);
            (x - y) * (x - y)
        })
        .sum();
    Ok((ss / n).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SidelobeMetric {
    Psl,
    Isl,
}

impl SidelobeMetric {
    pub fn of(self, curve: &AmbiguityCurve) -> SidelobeLevel {
        match self {
            Self::Psl => psl(curve),
            Self::Isl => isl(curve),
        }
    }
}

/// One point of a gain-versus-distance sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GainPoint {
    pub d_prime: f64,
    pub composite_db: SidelobeLevel,
    pub bandwidth_only_db: SidelobeLevel,
    /// `metric(bandwidth-only) − metric(composite)`; positive when the array factor helps.
    #[serde(serialize_with = "serialize_f64_inf")]
    pub gain_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GainSweep {
    pub metric: SidelobeMetric,
    pub points: Vec<GainPoint>,
    /// Requested distances outside `[1.2D, d_FA/α]`, with the reason.
    pub excluded: Vec<(f64, String)>,
}

/// Sampling of the range window used by [`gain_vs_distance`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainGrid {
    /// Half width in bandwidth resolution cells `0.443 / B_f`.
    pub half_width_cells: f64,
    /// Samples per resolution cell.
    pub samples_per_cell: f64,
}

impl Default for GainGrid {
    fn default() -> Self {
        Self { half_width_cells: 10.0, samples_per_cell: 400.0 }
    }
}

/// Sidelobe gain of the composite (array factor × bandwidth) curve over the
/// bandwidth-only curve at each target distance.
pub fn gain_vs_distance(
    cfg: &SensingConfig,
    metric: SidelobeMetric,
    d_primes: &[f64],
    sampling: GainGrid,
) -> Result<GainSweep> {
    cfg.validate()?;
    if !(cfg.b_frac > 0.0) {
        return Err(Error::InvalidConfig("gain sweeps need a positive bandwidth".into()));
    }
    let kind = cfg.array.kind();
    let d_ap = cfg.array.aperture_d();
    let alpha = solve_alpha(kind, cfg.mode);
    let (lo, hi) = nf_region(d_ap, alpha);
    let cell = RANGE_RES_COEFF / cfg.b_frac;
    let half = sampling.half_width_cells * cell;
    let step = cell / sampling.samples_per_cell;
    let ray = crate::geometry::Ray::boresight(kind);
    let opts = ApproxOptions { bandwidth: BandwidthModel::Ofdm, ..ApproxOptions::default() };

    let mut excluded = Vec::new();
    let mut inside = Vec::new();
    for &dp in d_primes {
        if dp < lo * (1.0 - 1e-12) || dp > hi * (1.0 + 1e-12) {
            excluded.push((dp, format!("outside the near-field region [{lo}, {hi}]")));
        } else {
            inside.push(dp);
        }
    }
    let points = inside
        .par_iter()
        .map(|&dp| {
            let grid = RadialGrid::centered(dp, ray, half, step, 0.1 * dp)?;
            let composite = ambiguity_approx_with(cfg, &grid, opts)?;
            let bw = ambiguity_bandwidth_only(cfg, &grid, BandwidthModel::Ofdm)?;
            let c = metric.of(&composite);
            let b = metric.of(&bw);
            Ok(GainPoint { d_prime: dp, composite_db: c, bandwidth_only_db: b, gain_db: b.db() - c.db() })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GainSweep { metric, points, excluded })
}

/// Bandwidth that matches the single-aperture `BD_min`: `0.308 / α_SIMO`.
pub fn matched_bandwidth(kind: GeometryKind) -> f64 {
    FBW_COEFF / solve_alpha(kind, Processing::SimoMiso)
}

/// Bandwidth saving relative to `B_f,min`, infinite when the array factor alone suffices.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub enum BandwidthRatio {
    Finite(f64),
    Infinite,
}

impl BandwidthRatio {
    pub fn value(self) -> f64 {
        match self {
            Self::Finite(v) => v,
            Self::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Self::Infinite)
    }
}

impl Serialize for BandwidthRatio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_inf(self.value(), s)
    }
}

/// Search settings for [`min_bw_for_psl`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinBwSearch {
    /// Near-field sizing factor; the aperture is `min_aperture(eta, α)`.
    pub eta: f64,
    pub k_subcarriers: usize,
    /// Log-spaced target distances across `[1.2D, d_FA/α]`.
    pub n_distances: usize,
    /// Half width of the range window in units of `BD_min`.
    pub half_width_bd: f64,
    /// Samples per `BD_min`.
    pub samples_per_bd: f64,
    /// Relative bisection tolerance on `B_f`.
    pub rel_tol: f64,
}

impl Default for MinBwSearch {
    fn default() -> Self {
        Self {
            eta: 1.01,
            k_subcarriers: 1024,
            n_distances: 64,
            half_width_bd: 30.0,
            samples_per_bd: 1000.0,
            rel_tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinBwResult {
    pub kind: GeometryKind,
    pub mode: Processing,
    pub window: WindowKind,
    pub alpha: f64,
    pub aperture_d: f64,
    /// PSL the composite must reach: the window's own far-field PSL.
    pub target_psl_db: f64,
    /// `relative_resolution · 0.308 / α`.
    pub b_f_min: f64,
    /// Smallest bandwidth meeting the target at every distance; infinite if none is needed.
    #[serde(serialize_with = "serialize_f64_inf")]
    pub b_f_min_psl: f64,
    pub ratio: BandwidthRatio,
}

/// Smallest fractional bandwidth for which the composite windowed ambiguity
/// reaches the window's far-field PSL at every distance of the near-field region.
///
/// Works in the large-aperture regime, where the array factor depends on
/// `x = d_FA |d − d′| / d′²`.
pub fn min_bw_for_psl(kind: GeometryKind, mode: Processing, window: WindowKind) -> Result<MinBwResult> {
    min_bw_for_psl_with(kind, mode, window, MinBwSearch::default())
}

/// [`min_bw_for_psl`] with explicit search settings.
pub fn min_bw_for_psl_with(
    kind: GeometryKind,
    mode: Processing,
    window: WindowKind,
    search: MinBwSearch,
) -> Result<MinBwResult> {
    let alpha = solve_alpha(kind, mode);
    let d_ap = min_aperture(search.eta, alpha)?;
    let d_fa = fraunhofer_distance(d_ap);
    let (lo, hi) = nf_region(d_ap, alpha);
    let spec: WindowSpec = make_window(window, search.k_subcarriers)?;
    let target = spec.measured_psl_db();
    let b_f_min = window.relative_resolution() * FBW_COEFF / alpha;

    let bd = bd_min_asymptotic(alpha);
    let half = search.half_width_bd * bd;
    let n_half = (search.half_width_bd * search.samples_per_bd).round() as i64;
    let deltas: Vec<f64> = (-n_half..=n_half).map(|i| half * i as f64 / n_half as f64).collect();
    let n_d = search.n_distances.max(2);
    let distances: Vec<f64> = (0..n_d).map(|i| lo * (hi / lo).powf(i as f64 / (n_d - 1) as f64)).collect();
    let p = mode.af_power();
    let afs: Vec<Vec<f64>> = distances
        .par_iter()
        .map(|dp| deltas.iter().map(|dl| af_closed_normalized(kind, d_fa * dl.abs() / (dp * dp)).powi(p)).collect())
        .collect();

    let meets = |v: &[f64]| psl_of(v).db() <= target;
    let mut result = MinBwResult {
        kind,
        mode,
        window,
        alpha,
        aperture_d: d_ap,
        target_psl_db: target,
        b_f_min,
        b_f_min_psl: f64::INFINITY,
        ratio: BandwidthRatio::Infinite,
    };
    if afs.iter().all(|af| meets(af)) {
        return Ok(result);
    }

    let feasible = |b: f64| {
        let chi2: Vec<f64> = deltas
            .iter()
            .map(|d| {
                let c = spec.chi(b, *d);
                c * c
            })
            .collect();
        let mut buf = vec![0.0; deltas.len()];
        afs.iter().all(|af| {
            for ((o, a), c) in buf.iter_mut().zip(af).zip(&chi2) {
                *o = a * c;
            }
            meets(&buf)
        })
    };
    let mut b_lo = 1e-4;
    let mut b_hi = 1.5 * b_f_min;
    if !feasible(b_hi) {
        return Err(Error::Domain(format!(
            "no bandwidth up to {b_hi} reaches {target:.3} dB PSL for {kind} {mode} {window}"
        )));
    }
    while b_hi - b_lo > search.rel_tol * b_hi {
        let mid = 0.5 * (b_lo + b_hi);
        if feasible(mid) {
            b_hi = mid;
        } else {
            b_lo = mid;
        }
    }
    result.b_f_min_psl = b_hi;
    result.ratio = BandwidthRatio::Finite(b_f_min / b_hi);
    Ok(result)
}

/// Summary metrics for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub kind: GeometryKind,
    pub mode: Processing,
    pub aperture_d: f64,
    pub alpha: f64,
    pub bd_min: f64,
    pub nf_region: (f64, f64),
    #[serde(serialize_with = "serialize_opt_f64_inf")]
    pub psl_db: Option<f64>,
    #[serde(serialize_with = "serialize_opt_f64_inf")]
    pub isl_db: Option<f64>,
    #[serde(serialize_with = "serialize_opt_f64_inf")]
    pub psl_gain_db: Option<f64>,
    #[serde(serialize_with = "serialize_opt_f64_inf")]
    pub isl_gain_db: Option<f64>,
    pub db_rmse: Option<f64>,
    #[serde(serialize_with = "serialize_opt_f64_inf")]
    pub b_f_min_psl: Option<f64>,
}

impl MetricsReport {
    /// Report with the geometry-only quantities filled in.
    pub fn new(kind: GeometryKind, mode: Processing, aperture_d: f64) -> Self {
        let alpha = solve_alpha(kind, mode);
        Self {
            kind,
            mode,
            aperture_d,
            alpha,
            bd_min: bd_min_asymptotic(alpha),
            nf_region: nf_region(aperture_d, alpha),
            psl_db: None,
            isl_db: None,
            psl_gain_db: None,
            isl_gain_db: None,
            db_rmse: None,
            b_f_min_psl: None,
        }
    }

    /// Fill PSL and ISL from a curve.
    pub fn with_sidelobes(mut self, curve: &AmbiguityCurve) -> Self {
        self.psl_db = Some(psl(curve).db());
        self.isl_db = Some(isl(curve).db());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Provenance;
    use crate::geometry::Ray;

    #[test]
    fn alpha_values() {
        assert!((solve_alpha(GeometryKind::Ula, Processing::SimoMiso) - 6.952).abs() < 0.01);
        assert!((solve_alpha(GeometryKind::Uca, Processing::Mimo) - 4.148).abs() < 0.01);
        assert!((solve_alpha(GeometryKind::Upca, Processing::SimoMiso) - 7.087).abs() < 0.01);
    }

    #[test]
    fn beamdepth_limits() {
        let a = 6.952;
        assert!(beamdepth(50.0, 5000.0 / a, a).is_infinite());
        assert!(beamdepth(50.0, 1e4, a).is_infinite());
        let small = beamdepth(50.0, 1e-3, a).value();
        assert!((small / (2.0 * a * 1e-6 / 5000.0) - 1.0).abs() < 1e-6);
        assert!((beamdepth(50.0, 60.0, a).value() - 10.08).abs() < 0.01);
        assert!((bd_min_asymptotic(a) - 10.01).abs() < 0.01);
        assert_eq!(serde_json::to_string(&Beamdepth::Infinite).unwrap(), "\"inf\"");
    }

    #[test]
    fn sizing() {
        let a = 6.952;
        assert!((min_aperture(1.01, a).unwrap() - 41.9).abs() < 0.15);
        assert!((min_fbw(1.01, a).unwrap() - 0.045).abs() < 0.001);
        assert!((min_product(1.01).unwrap() - 1.88).abs() < 0.01);
        assert!((min_product(1.1).unwrap() - 0.67).abs() < 0.01);
        assert!(min_aperture(1.0, a).is_err());
        assert!((min_aperture(1e12, a).unwrap() - 0.6 * a).abs() < 1e-9);
    }

    #[test]
    fn boundary_at_zero_bandwidth() {
        let b = boundary_nf_bw(50.0, 0.0, 6.952);
        assert!((b.raw - 5000.0 / 6.952).abs() < 1e-9);
        let far = boundary_nf_bw(50.0, 1e9, 6.952);
        assert!(far.raw < 1e-3);
        assert_eq!(far.clamped, 60.0);
    }

    fn curve(x: Vec<f64>, v: Vec<f64>) -> AmbiguityCurve {
        let g = RadialGrid::new(x[argmax(&v)], Ray::boresight(GeometryKind::Ula), x).unwrap();
        AmbiguityCurve::from_raw_max(g, v, Provenance::Approx)
    }

    #[test]
    fn psl_isl_of_sinc() {
        let x: Vec<f64> = (0..20001).map(|i| 1.0 + i as f64 * 1e-3).collect();
        let v: Vec<f64> = x.iter().map(|d| crate::specfun::sinc(d - 11.0).powi(2)).collect();
        let c = curve(x, v);
        assert!((psl(&c).db() + 13.26).abs() < 0.01);
        assert!(isl(&c).db() < -9.0);
    }

    #[test]
    fn monotone_curve_has_no_sidelobes() {
        let x: Vec<f64> = (1..50).map(f64::from).collect();
        let v: Vec<f64> = x.iter().map(|d| (-d / 10.0).exp()).collect();
        let c = curve(x, v);
        assert_eq!(psl(&c), SidelobeLevel::NoSidelobes);
        assert_eq!(isl(&c), SidelobeLevel::NoSidelobes);
    }

    #[test]
    fn rmse_basics() {
        let x: Vec<f64> = (1..50).map(f64::from).collect();
        let v: Vec<f64> = x.iter().map(|d| 1.0 / (1.0 + (d - 20.0).powi(2))).collect();
        let a = curve(x.clone(), v.clone());
        assert_eq!(db_rmse(&a, &a).unwrap(), 0.0);
        let mut b = a.clone();
        for db in &mut b.values_db {
            *db -= 3.0;
        }
        assert!((db_rmse(&a, &b).unwrap() - 3.0).abs() < 1e-12);
        let other = curve(x[1..].to_vec(), v[1..].to_vec());
        assert!(matches!(db_rmse(&a, &other), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn half_power_width_of_sinc_squared() {
        let x: Vec<f64> = (0..4001).map(|i| 5.0 + 0.0025 * i as f64).collect();
        let v: Vec<f64> = x.iter().map(|d| crate::specfun::sinc(d - 10.0).powi(2)).collect();
        let w = half_power_width(&curve(x.clone(), v)).unwrap();
        assert!((w - 0.8859).abs() < 1e-3);
        let ramp: Vec<f64> = x.iter().map(|d| 1.0 / d).collect();
        assert!(half_power_width(&curve(x, ramp)).is_none());
    }
}
