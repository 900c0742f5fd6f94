//! Radial hypothesis grids and sampled ambiguity curves.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{fmt_sig9, Point, Ray, MIN_DISTANCE_FACTOR};

/// Floor applied when converting normalized power to dB.
pub const DB_FLOOR: f64 = -300.0;

/// Power ratio in dB, floored at [`DB_FLOOR`].
#[inline]
pub fn to_db(v: f64) -> f64 {
    if v > 0.0 {
        (10.0 * v.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

/// Hypothesis distances along a fixed ray, together with the true target distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub d_prime: f64,
    pub theta: f64,
    pub phi: f64,
    samples: Vec<f64>,
}

impl RadialGrid {
    /// Grid from explicit samples. Samples must be positive, finite and strictly increasing.
    pub fn new(d_prime: f64, ray: Ray, samples: Vec<f64>) -> Result<Self> {
        if !(d_prime.is_finite() && d_prime > 0.0) {
            return Err(Error::InvalidGrid(format!("target distance {d_prime} must be positive")));
        }
        if samples.is_empty() {
            return Err(Error::InvalidGrid("grid is empty".into()));
        }
        if samples.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            return Err(Error::InvalidGrid("grid samples must be positive and finite".into()));
        }
        if samples.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("grid samples must be strictly increasing".into()));
        }
        Ok(Self { d_prime, theta: ray.theta, phi: ray.phi, samples })
    }

    /// `n` evenly spaced samples on `[start, stop]`, with `d_prime` inserted if absent.
    pub fn linspace(d_prime: f64, ray: Ray, start: f64, stop: f64, n: usize) -> Result<Self> {
        if n < 2 || !(stop > start) {
            return Err(Error::InvalidGrid(format!(
                "need at least two samples on a non-empty interval, got n={n} on [{start}, {stop}]"
            )));
        }
        let step = (stop - start) / (n - 1) as f64;
        let samples = (0..n).map(|i| start + step * i as f64).collect();
        Self::new(d_prime, ray, with_point(samples, d_prime))
    }

    /// Samples spaced by `step` on `[d_prime − half_width, d_prime + half_width]`,
    /// aligned so that `d_prime` is a sample, clipped below at `min_d`.
    pub fn centered(d_prime: f64, ray: Ray, half_width: f64, step: f64, min_d: f64) -> Result<Self> {
        if !(step > 0.0 && half_width > 0.0) {
            return Err(Error::InvalidGrid("step and half width must be positive".into()));
        }
        let n = (half_width / step).round() as i64;
        let samples: Vec<f64> =
            (-n..=n).map(|i| d_prime + step * i as f64).filter(|d| *d >= min_d.max(f64::MIN_POSITIVE)).collect();
        Self::new(d_prime, ray, samples)
    }

    pub fn ray(&self) -> Ray {
        Ray::new(self.theta, self.phi)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn target(&self) -> Point {
        Point::on_ray(self.ray(), self.d_prime)
    }

    pub fn point(&self, i: usize) -> Point {
        Point::on_ray(self.ray(), self.samples[i])
    }

    /// Index of the sample closest to `d_prime`.
    pub fn nearest_to_target(&self) -> usize {
        let mut best = 0;
        for (i, d) in self.samples.iter().enumerate() {
            if (d - self.d_prime).abs() < (self.samples[best] - self.d_prime).abs() {
                best = i;
            }
        }
        best
    }

    /// Warnings for samples (or the target) inside `1.2 D`, where the
    /// second-order distance expansion stops being accurate.
    pub fn validity_warnings(&self, aperture_d: f64) -> Vec<String> {
        let limit = MIN_DISTANCE_FACTOR * aperture_d;
        let mut out = Vec::new();
        let below = self.samples.iter().filter(|d| **d < limit).count();
        if below > 0 {
            out.push(format!("{below} grid samples lie below 1.2D = {limit} λ"));
        }
        if self.d_prime < limit {
            out.push(format!("target distance {} λ lies below 1.2D = {limit} λ", self.d_prime));
        }
        out
    }
}

/// Insert `p` into a sorted sample list unless an equal value is present.
pub(crate) fn with_point(mut samples: Vec<f64>, p: f64) -> Vec<f64> {
    match samples.binary_search_by(|v| v.total_cmp(&p)) {
        Ok(_) => {}
        Err(i) => samples.insert(i, p),
    }
    samples
}

/// How a curve was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Exact,
    Approx,
    BandwidthOnly,
    AfOnly,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Approx => "approx",
            Self::BandwidthOnly => "bandwidth_only",
            Self::AfOnly => "af_only",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Peak-normalized `|A|²` samples over a radial grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmbiguityCurve {
    pub grid: RadialGrid,
    pub values_linear: Vec<f64>,
    pub values_db: Vec<f64>,
    pub provenance: Provenance,
    /// Un-normalized `|A|²` at the peak.
    pub peak_gain: f64,
    pub warnings: Vec<String>,
}

impl AmbiguityCurve {
    /// Normalize raw `|A|²` samples by `peak_gain`, clamping rounding excursions into `[0, 1]`.
    pub fn from_raw(grid: RadialGrid, raw: Vec<f64>, peak_gain: f64, provenance: Provenance) -> Self {
        debug_assert_eq!(grid.len(), raw.len());
        let values_linear: Vec<f64> = raw.iter().map(|v| (v / peak_gain).clamp(0.0, 1.0)).collect();
        let values_db = values_linear.iter().map(|v| to_db(*v)).collect();
        Self { grid, values_linear, values_db, provenance, peak_gain, warnings: Vec::new() }
    }

    /// Normalize by the largest sample.
    pub fn from_raw_max(grid: RadialGrid, raw: Vec<f64>, provenance: Provenance) -> Self {
        let peak = raw.iter().copied().fold(0.0, f64::max);
        let peak = if peak > 0.0 { peak } else { 1.0 };
        Self::from_raw(grid, raw, peak, provenance)
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings.extend(warnings);
        self
    }

    pub fn len(&self) -> usize {
        self.values_linear.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values_linear.is_empty()
    }

    /// Index of the largest sample (first one on ties).
    pub fn peak_index(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.values_linear.iter().enumerate() {
            if *v > self.values_linear[best] {
                best = i;
            }
        }
        best
    }

    /// Write `d_lambda,value_linear,value_db,provenance` rows with a config-hash comment header.
    pub fn write_csv<W: Write>(&self, mut out: W, config_hash: &str) -> Result<()> {
        writeln!(out, "# config_hash={config_hash}")?;
        writeln!(out, "d_lambda,value_linear,value_db,provenance")?;
        for ((d, v), db) in self.grid.samples().iter().zip(&self.values_linear).zip(&self.values_db) {
            writeln!(out, "{},{},{},{}", fmt_sig9(*d), fmt_sig9(*v), fmt_sig9(*db), self.provenance)?;
        }
        Ok(())
    }
}
