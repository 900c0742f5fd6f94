//! Bandwidth-domain ambiguity functions.
//!
//! `δ` denotes a one-way range offset `d − d′` in wavelengths; a monostatic
//! pair sees the bistatic difference `2δ`. OFDM subcarriers sit at
//! `f_n = (n − (K−1)/2)·B_f/K`, symmetric about the carrier, which makes every
//! range profile real-valued.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::fmt_sig9;
use crate::specfun::{dirichlet, sinc};

/// Smallest subcarrier count accepted by [`make_window`].
pub const MIN_WINDOW_LEN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    Rect,
    Hamming,
    Hann,
    Blackman,
}

impl WindowKind {
    pub const ALL: [WindowKind; 4] = [Self::Rect, Self::Hamming, Self::Hann, Self::Blackman];

    pub fn name(self) -> &'static str {
        match self {
            Self::Rect => "rect",
            Self::Hamming => "hamming",
            Self::Hann => "hann",
            Self::Blackman => "blackman",
        }
    }

    /// Generalized cosine coefficients: `w(n) = Σ_l c_l cos(2π l n / (K−1))`.
    fn cosine_coefficients(self) -> &'static [f64] {
        match self {
            Self::Rect => &[1.0],
            Self::Hamming => &[0.54, -0.46],
            Self::Hann => &[0.5, -0.5],
            Self::Blackman => &[0.42, -0.5, 0.08],
        }
    }

    /// Mainlobe null-to-null width relative to the rectangular window.
    pub fn relative_resolution(self) -> f64 {
        match self {
            Self::Rect => 1.0,
            Self::Hamming | Self::Hann => 2.0,
            Self::Blackman => 3.0,
        }
    }

    /// Nominal peak sidelobe level of the windowed range profile, dB.
    pub fn nominal_psl_db(self) -> f64 {
        match self {
            Self::Rect => -13.26,
            Self::Hamming => -43.68,
            Self::Hann => -31.47,
            Self::Blackman => -58.11,
        }
    }
}

impl fmt::Display for WindowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WindowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rect" | "rectangular" | "none" => Ok(Self::Rect),
            "hamming" => Ok(Self::Hamming),
            "hann" | "hanning" => Ok(Self::Hann),
            "blackman" => Ok(Self::Blackman),
            other => Err(Error::InvalidConfig(format!("unsupported window `{other}`"))),
        }
    }
}

/// Per-subcarrier weights for a window of length `k`, scaled to unit mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub kind: WindowKind,
    pub k: usize,
    pub weights: Vec<f64>,
    pub relative_resolution: f64,
    pub psl_db: f64,
}

/// Symmetric window of length `k` (denominator `k − 1`), weights summing to `k`.
pub fn make_window(kind: WindowKind, k: usize) -> Result<WindowSpec> {
    if k < MIN_WINDOW_LEN {
        return Err(Error::InvalidConfig(format!("window length {k} is below the minimum of {MIN_WINDOW_LEN}")));
    }
    let coeffs = kind.cosine_coefficients();
    let denom = (k - 1) as f64;
    let mut weights: Vec<f64> = (0..k)
        .map(|n| coeffs.iter().enumerate().map(|(l, c)| c * (2.0 * PI * (l * n) as f64 / denom).cos()).sum())
        .collect();
    let mean = weights.iter().sum::<f64>() / k as f64;
    for w in &mut weights {
        *w /= mean;
    }
    Ok(WindowSpec { kind, k, weights, relative_resolution: kind.relative_resolution(), psl_db: kind.nominal_psl_db() })
}

impl WindowSpec {
    /// Rectangular weights of any length `k ≥ 1`.
    pub fn rect(k: usize) -> Self {
        Self {
            kind: WindowKind::Rect,
            k,
            weights: vec![1.0; k],
            relative_resolution: 1.0,
            psl_db: WindowKind::Rect.nominal_psl_db(),
        }
    }

    /// Windowed range profile at one-way offset `delta`, via shifted Dirichlet kernels.
    ///
    /// Each cosine term of the window shifts the rectangular kernel by
    /// `±l/(K−1)` in normalized frequency; the result is normalized so that the
    /// value at `delta = 0` is 1.
    pub fn chi(&self, b_frac: f64, delta: f64) -> f64 {
        let s = 2.0 * b_frac * delta / self.k as f64;
        self.kernel(s) / self.kernel(0.0)
    }

    fn kernel(&self, s: f64) -> f64 {
        let k = self.k;
        if k == 1 {
            return 1.0;
        }
        let shift = 1.0 / (k - 1) as f64;
        let mut acc = 0.0;
        for (l, c) in self.kind.cosine_coefficients().iter().enumerate() {
            if l == 0 {
                acc += c * dirichlet(k, s);
            } else {
                let sign = if l % 2 == 1 { -1.0 } else { 1.0 };
                let ls = l as f64 * shift;
                acc += sign * c * 0.5 * (dirichlet(k, s - ls) + dirichlet(k, s + ls));
            }
        }
        acc
    }

    /// Same profile as [`WindowSpec::chi`] by direct weighted subcarrier summation.
    pub fn chi_direct(&self, b_frac: f64, delta: f64) -> f64 {
        let center = (self.k as f64 - 1.0) / 2.0;
        let s = 2.0 * b_frac * delta / self.k as f64;
        let mut num = 0.0;
        let mut den = 0.0;
        for (n, w) in self.weights.iter().enumerate() {
            num += w * (2.0 * PI * (n as f64 - center) * s).cos();
            den += w;
        }
        num / den
    }

    /// Weights as CSV: `index,weight`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "index,weight")?;
        for (i, w) in self.weights.iter().enumerate() {
            writeln!(out, "{i},{}", fmt_sig9(*w))?;
        }
        Ok(())
    }

    /// Peak sidelobe level of `|χ|²` in dB, located to sub-sample precision.
    ///
    /// Scans the unambiguous half period in resolution cells `v = 2 B_f δ`,
    /// skips the mainlobe up to its first minimum and refines the highest
    /// sample by golden-section search.
    pub fn measured_psl_db(&self) -> f64 {
        let p = |v: f64| {
            let c = self.chi(1.0, v / 2.0);
            c * c
        };
        let step = 0.01;
        let vmax = self.k as f64 / 2.0;
        let n = (vmax / step) as usize;
        let mut i = 1;
        while i < n && p(i as f64 * step) <= p((i - 1) as f64 * step) {
            i += 1;
        }
        let mut best = (0.0, i);
        for j in i..=n {
            let v = p(j as f64 * step);
            if v > best.0 {
                best = (v, j);
            }
        }
        let c = best.1 as f64 * step;
        let peak = golden_max(&p, c - step, c + step, 1e-10).max(best.0);
        10.0 * peak.log10()
    }

    /// Offset `v = 2 B_f δ` of the first minimum of `|χ|`, in resolution cells.
    pub fn first_null(&self) -> f64 {
        let a = |v: f64| self.chi(1.0, v / 2.0).abs();
        let step = 1e-3;
        let mut v = step;
        while a(v + step) < a(v) {
            v += step;
        }
        v
    }
}

/// Maximum of a unimodal function on `[lo, hi]`.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    f1.max(f2)
}

/// Subcarrier offsets `f_n / f_c` for `k` subcarriers across `b_frac`.
pub fn subcarrier_offsets(b_frac: f64, k: usize) -> Vec<f64> {
    let center = (k as f64 - 1.0) / 2.0;
    let df = b_frac / k as f64;
    (0..k).map(|n| (n as f64 - center) * df).collect()
}

/// Rectangular-spectrum ambiguity for a bistatic path difference.
#[inline]
pub fn chi_rect(b_frac: f64, delta_bistatic: f64) -> f64 {
    sinc(b_frac * delta_bistatic)
}

/// Rectangular-spectrum ambiguity for a one-way (monostatic) offset.
#[inline]
pub fn chi_rect_monostatic(b_frac: f64, delta_oneway: f64) -> f64 {
    chi_rect(b_frac, 2.0 * delta_oneway)
}

/// OFDM range profile `sinc(2B_fδ) / sinc(2B_fδ/K)` for `k` rectangular-weighted subcarriers.
///
/// At range repetitions `δ = nK/(2B_f)` the magnitude returns to 1; the sign
/// there is `(−1)^n` when `k` is even.
#[inline]
pub fn chi_ofdm(b_frac: f64, k: usize, delta_oneway: f64) -> f64 {
    dirichlet(k, 2.0 * b_frac * delta_oneway / k as f64)
}

/// Windowed OFDM range profile sampled at each one-way offset in `deltas`.
pub fn chi_windowed(b_frac: f64, window: &WindowSpec, deltas: &[f64]) -> Vec<f64> {
    deltas.iter().map(|d| window.chi(b_frac, *d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_values() {
        assert_eq!(chi_rect(0.1, 0.0), 1.0);
        assert!(chi_rect(0.1, 10.0).abs() < 1e-15);
        let b = 0.05;
        // half power at half the 0.443/B_f full width
        let v = chi_rect_monostatic(b, 0.443 / (2.0 * b));
        assert!((v * v - 0.5).abs() < 2e-3);
    }

    #[test]
    fn ofdm_values() {
        assert_eq!(chi_ofdm(0.1, 64, 0.0), 1.0);
        let rep = chi_ofdm(0.1, 64, 64.0 / 0.2);
        assert!((rep.abs() - 1.0).abs() < 1e-12);
        let rep_odd = chi_ofdm(0.1, 65, 65.0 / 0.2);
        assert!((rep_odd - 1.0).abs() < 1e-12);
        for &d in &[0.3, 3.7, 12.9] {
            let a = chi_ofdm(0.05, 1_000_000, d);
            let b = chi_rect_monostatic(0.05, d);
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn window_weights() {
        let r = make_window(WindowKind::Rect, 16).unwrap();
        assert!(r.weights.iter().all(|w| *w == 1.0));
        for kind in WindowKind::ALL {
            let w = make_window(kind, 257).unwrap();
            let sum: f64 = w.weights.iter().sum();
            assert!((sum - 257.0).abs() < 1e-9);
            for n in 0..257 {
                assert!((w.weights[n] - w.weights[256 - n]).abs() < 1e-12);
            }
        }
        assert!(make_window(WindowKind::Hann, 4).is_err());
        assert!("kaiser".parse::<WindowKind>().is_err());
    }

    #[test]
    fn kernel_matches_direct_sum() {
        for kind in WindowKind::ALL {
            let w = make_window(kind, 1024).unwrap();
            for i in 0..400 {
                let d = -37.0 + 0.19 * i as f64;
                let a = w.chi(0.03, d);
                let b = w.chi_direct(0.03, d);
                assert!((a - b).abs() < 1e-9, "{kind} δ={d}: {a} vs {b}");
            }
            assert!((w.chi(0.03, 0.0) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rect_window_is_ofdm() {
        let w = make_window(WindowKind::Rect, 128).unwrap();
        let deltas: Vec<f64> = (0..500).map(|i| -900.0 + 3.7 * i as f64).collect();
        for (d, v) in deltas.iter().zip(chi_windowed(0.1, &w, &deltas)) {
            assert!((v - chi_ofdm(0.1, 128, *d)).abs() < 1e-12);
        }
    }

    #[test]
    fn weights_csv() {
        let w = make_window(WindowKind::Hann, 8).unwrap();
        let mut buf = Vec::new();
        w.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 9);
        assert!(text.starts_with("index,weight\n0,0\n"));
    }
}
