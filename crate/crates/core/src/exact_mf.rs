//! Brute-force matched-filter ambiguity over every TX/RX element pair.
//!
//! For a hypothesis `p` and target `p′` each element contributes the one-way
//! difference `Δd_m = d_m(p) − d_m(p′)`, computed from exact Euclidean
//! distances. With a rectangular spectrum of fractional width `B_f` the
//! frequency integral of each pair collapses to
//! `exp(−j2π Δd_mn) · sinc(B_f Δd_mn)`, `Δd_mn = Δd_m + Δd_n`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::curve::{AmbiguityCurve, Provenance, RadialGrid};
use crate::error::{Error, Result};
use crate::geometry::{ArrayGeometry, Position, Processing};
use crate::specfun::sinc;
use crate::sum::pairwise;
use crate::waveform::{make_window, subcarrier_offsets, WindowKind, WindowSpec};

/// Elements accumulated sequentially before partial spectra are combined pairwise.
const OFDM_CHUNK: usize = 256;

/// Phasor recurrences are re-seeded from `exp` after this many subcarriers.
const RESEED: usize = 128;

/// A sensing setup: the aperture, how it is used, and the waveform.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingConfig {
    /// The aperture. In MIMO mode it both transmits and receives.
    pub array: ArrayGeometry,
    pub mode: Processing,
    pub b_frac: f64,
    pub k_subcarriers: usize,
    pub window: WindowKind,
}

impl SensingConfig {
    pub fn new(array: ArrayGeometry, mode: Processing, b_frac: f64) -> Self {
        Self { array, mode, b_frac, k_subcarriers: 1024, window: WindowKind::Rect }
    }

    pub fn with_subcarriers(mut self, k: usize) -> Self {
        self.k_subcarriers = k;
        self
    }

    pub fn with_window(mut self, window: WindowKind) -> Self {
        self.window = window;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b_frac.is_finite() && self.b_frac >= 0.0) {
            return Err(Error::InvalidConfig(format!("b_frac {} must be non-negative", self.b_frac)));
        }
        if self.k_subcarriers < 1 {
            return Err(Error::InvalidConfig("k_subcarriers must be at least 1".into()));
        }
        Ok(())
    }

    pub fn tx_elements(&self) -> &[Position] {
        self.array.elements()
    }

    /// Receive elements: the aperture itself for MIMO, a single isotropic
    /// element at the origin for SIMO/MISO.
    pub fn rx_elements(&self) -> &[Position] {
        match self.mode {
            Processing::Mimo => self.array.elements(),
            Processing::SimoMiso => std::slice::from_ref(&Position::ORIGIN),
        }
    }

    /// Subcarrier weights for the configured window.
    pub fn window_spec(&self) -> Result<WindowSpec> {
        match self.window {
            WindowKind::Rect => Ok(WindowSpec::rect(self.k_subcarriers)),
            kind => make_window(kind, self.k_subcarriers),
        }
    }

    /// Bandwidth-aperture product `B_f · D_λ`.
    pub fn product(&self) -> f64 {
        self.b_frac * self.array.aperture_d()
    }
}

fn one_way_differences(elements: &[Position], p: &Position, target: &Position) -> Vec<f64> {
    elements.iter().map(|e| e.distance(p) - e.distance(target)).collect()
}

/// Raw `|A|²` with the `1/√(MN)` normalization for arbitrary element sets.
///
/// Peak value is `M·N` at `p = p′`.
pub fn ambiguity_pairs_raw(tx: &[Position], rx: &[Position], b_frac: f64, grid: &RadialGrid) -> Vec<f64> {
    let target = grid.target().to_cartesian();
    let ray = grid.ray();
    let mn = (tx.len() * rx.len()) as f64;
    grid.samples()
        .par_iter()
        .map(|&d| {
            let p = ray.at(d);
            let dt = one_way_differences(tx, &p, &target);
            let dr = one_way_differences(rx, &p, &target);
            let a = if b_frac == 0.0 {
                let st = pairwise(dt.len(), &|m| Complex64::from_polar(1.0, -2.0 * PI * dt[m]));
                let sr = pairwise(dr.len(), &|n| Complex64::from_polar(1.0, -2.0 * PI * dr[n]));
                st * sr
            } else {
                pairwise(dt.len(), &|m| {
                    pairwise(dr.len(), &|n| {
                        let dmn = dt[m] + dr[n];
                        Complex64::from_polar(sinc(b_frac * dmn), -2.0 * PI * dmn)
                    })
                })
            };
            a.norm_sqr() / mn
        })
        .collect()
}

/// Exact matched-filter ambiguity with a rectangular spectrum.
pub fn ambiguity_exact(cfg: &SensingConfig, grid: &RadialGrid) -> Result<AmbiguityCurve> {
    cfg.validate()?;
    let tx = cfg.tx_elements();
    let rx = cfg.rx_elements();
    let raw = ambiguity_pairs_raw(tx, rx, cfg.b_frac, grid);
    let peak = (tx.len() * rx.len()) as f64;
    Ok(AmbiguityCurve::from_raw(grid.clone(), raw, peak, Provenance::Exact)
        .with_warnings(grid.validity_warnings(cfg.array.aperture_d())))
}

/// `|Σ_m exp(−j2π Δd_m)|² / M` with exact distances; peak `M` at `d = d′`.
pub fn array_factor_exact(geometry: &ArrayGeometry, grid: &RadialGrid) -> AmbiguityCurve {
    let target = grid.target().to_cartesian();
    let ray = grid.ray();
    let els = geometry.elements();
    let m = els.len() as f64;
    let raw: Vec<f64> = grid
        .samples()
        .par_iter()
        .map(|&d| {
            let dt = one_way_differences(els, &ray.at(d), &target);
            pairwise(dt.len(), &|i| Complex64::from_polar(1.0, -2.0 * PI * dt[i])).norm_sqr() / m
        })
        .collect();
    AmbiguityCurve::from_raw(grid.clone(), raw, m, Provenance::AfOnly)
        .with_warnings(grid.validity_warnings(geometry.aperture_d()))
}

/// Per-subcarrier array response `S_k = Σ_m exp(−j2π(1 + f_k) Δd_m)`.
fn subcarrier_response(deltas: &[f64], offsets: &[f64], df: f64) -> Vec<Complex64> {
    let k = offsets.len();
    let partial = |chunk: &[f64]| {
        let mut s = vec![Complex64::new(0.0, 0.0); k];
        for &dd in chunk {
            let step = Complex64::from_polar(1.0, -2.0 * PI * df * dd);
            let mut z = Complex64::new(0.0, 0.0);
            for (i, acc) in s.iter_mut().enumerate() {
                if i % RESEED == 0 {
                    z = Complex64::from_polar(1.0, -2.0 * PI * (1.0 + offsets[i]) * dd);
                }
                *acc += z;
                z *= step;
            }
        }
        s
    };
    let mut parts: Vec<Vec<Complex64>> = deltas.chunks(OFDM_CHUNK).map(partial).collect();
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x += y;
                }
            }
            next.push(a);
        }
        parts = next;
    }
    parts.pop().unwrap_or_else(|| vec![Complex64::new(0.0, 0.0); k])
}

/// Raw OFDM `|A|²` for arbitrary element sets; peak `M·N`.
pub fn ambiguity_pairs_ofdm_raw(
    tx: &[Position],
    rx: &[Position],
    b_frac: f64,
    window: &WindowSpec,
    grid: &RadialGrid,
) -> Vec<f64> {
    let target = grid.target().to_cartesian();
    let ray = grid.ray();
    let offsets = subcarrier_offsets(b_frac, window.k);
    let df = b_frac / window.k as f64;
    let wsum: f64 = window.weights.iter().sum();
    let mn = (tx.len() * rx.len()) as f64;
    let same = std::ptr::eq(tx, rx);
    grid.samples()
        .par_iter()
        .map(|&d| {
            let p = ray.at(d);
            let st = subcarrier_response(&one_way_differences(tx, &p, &target), &offsets, df);
            let sr = if same {
                st.clone()
            } else {
                subcarrier_response(&one_way_differences(rx, &p, &target), &offsets, df)
            };
            let a = pairwise(window.k, &|i| st[i] * sr[i] * window.weights[i]) / wsum;
            a.norm_sqr() / mn
        })
        .collect()
}

/// Exact ambiguity with the spectrum discretized into `K` weighted subcarriers.
pub fn ambiguity_exact_ofdm(cfg: &SensingConfig, grid: &RadialGrid) -> Result<AmbiguityCurve> {
    cfg.validate()?;
    if cfg.k_subcarriers < 2 {
        return Err(Error::InvalidConfig("OFDM needs at least two subcarriers".into()));
    }
    let window = cfg.window_spec()?;
    let tx = cfg.tx_elements();
    let rx = cfg.rx_elements();
    let raw = ambiguity_pairs_ofdm_raw(tx, rx, cfg.b_frac, &window, grid);
    let peak = (tx.len() * rx.len()) as f64;
    Ok(AmbiguityCurve::from_raw(grid.clone(), raw, peak, Provenance::Exact)
        .with_warnings(grid.validity_warnings(cfg.array.aperture_d())))
}
