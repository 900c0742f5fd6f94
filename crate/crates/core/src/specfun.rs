//! Special functions used by the closed-form array factors.
//!
//! All routines are pure and allocation free so that grid sweeps can call them
//! from any number of threads.
//!
//! - Fresnel integrals: power series for `|x| <= 1.5`, modified Lentz continued
//!   fraction for the complementary error function beyond.
//! - Bessel `J0`: power series for `|x| <= 5`, Miller backward recurrence up to
//!   25 and the Hankel asymptotic expansion above.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values of the Fresnel cosine and sine integrals at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelPair {
    /// `C(x) = ∫₀ˣ cos(π t²/2) dt`
    pub c: f64,
    /// `S(x) = ∫₀ˣ sin(π t²/2) dt`
    pub s: f64,
}

impl FresnelPair {
    /// `C² + S²`, the squared modulus that appears in the linear-aperture factors.
    pub fn norm_sqr(&self) -> f64 {
        self.c * self.c + self.s * self.s
    }
}

/// Switch point between the power series and the continued fraction.
pub(crate) const FRESNEL_SERIES_LIMIT: f64 = 1.5;

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 400;

/// Fresnel integrals `C(x)` and `S(x)`.
pub fn fresnel(x: f64) -> Result<FresnelPair> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("fresnel argument {x} is not finite")));
    }
    Ok(fresnel_unchecked(x))
}

/// Fresnel integrals without the finiteness check. NaN propagates.
#[inline]
pub fn fresnel_unchecked(x: f64) -> FresnelPair {
    let ax = x.abs();
    let pair = if ax <= FRESNEL_SERIES_LIMIT {
        fresnel_series(ax)
    } else if ax < 1e150 {
        fresnel_continued_fraction(ax)
    } else {
        FresnelPair { c: 0.5, s: 0.5 }
    };
    if x < 0.0 {
        FresnelPair { c: -pair.c, s: -pair.s }
    } else {
        pair
    }
}

/// Interleaved power series for `C` and `S`, valid for small non-negative `x`.
pub(crate) fn fresnel_series(ax: f64) -> FresnelPair {
    if ax < 1e-150 {
        return FresnelPair { c: ax, s: 0.0 };
    }
    // term_k = (π x²/2)^k / k! · x ; C takes even k with alternating sign,
    // S takes odd k, each divided by (2k+1).
    let fact = FRAC_PI_2 * ax * ax;
    let mut term = ax;
    let mut c = ax;
    let mut s = 0.0;
    let mut k = 1usize;
    loop {
        term *= fact / k as f64;
        let contrib = term / (2 * k + 1) as f64;
        // sign pattern over k = 1, 2, 3, 4, ... : S+, C-, S-, C+
        match k % 4 {
            1 => s += contrib,
            2 => c -= contrib,
            3 => s -= contrib,
            _ => c += contrib,
        }
        if term < EPS * c.abs().max(s.abs()).max(1e-300) || k > MAX_ITER {
            break;
        }
        k += 1;
    }
    FresnelPair { c, s }
}

/// `cos` and `sin` of `π x² / 2` with the argument reduced exactly modulo 4.
fn half_pi_square_phase(ax: f64) -> (f64, f64) {
    let p = ax * ax;
    let e = ax.mul_add(ax, -p);
    let t = p.rem_euclid(4.0) + e;
    let phase = FRAC_PI_2 * t;
    (phase.cos(), phase.sin())
}

/// Continued fraction for `erfc` of the complex argument, valid for `x > ~1`.
pub(crate) fn fresnel_continued_fraction(ax: f64) -> FresnelPair {
    let pix2 = PI * ax * ax;
    let one = Complex64::new(1.0, 0.0);
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, -pix2);
    let mut cc = Complex64::new(1.0 / tiny, 0.0);
    let mut d = one / b;
    let mut h = d;
    let mut n = -1.0f64;
    for _ in 2..=MAX_ITER {
        n += 2.0;
        let a = -n * (n + 1.0);
        b += Complex64::new(4.0, 0.0);
        d = one / (d * a + b);
        cc = b + Complex64::new(a, 0.0) / cc;
        let del = cc * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < EPS {
            break;
        }
    }
    h *= Complex64::new(ax, -ax);
    let (cos_p, sin_p) = half_pi_square_phase(ax);
    let cs = Complex64::new(0.5, 0.5) * (one - Complex64::new(cos_p, sin_p) * h);
    FresnelPair { c: cs.re, s: cs.im }
}

/// Zero-order Bessel function of the first kind.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("bessel_j0 argument {x} is not finite")));
    }
    Ok(bessel_j0_unchecked(x))
}

/// `J0` without the finiteness check.
#[inline]
pub fn bessel_j0_unchecked(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 5.0 {
        j0_series(ax)
    } else if ax < 25.0 {
        j0_miller(ax)
    } else {
        j0_hankel(ax)
    }
}

pub(crate) fn j0_series(ax: f64) -> f64 {
    let q = -0.25 * ax * ax;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term.abs() < EPS * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

pub(crate) fn j0_miller(ax: f64) -> f64 {
    // Start well above x; J_N(x) is negligible there.
    let start = (ax + 30.0 + 8.0 * ax.cbrt()).ceil() as usize;
    let start = start + (start % 2);
    let two_over_x = 2.0 / ax;
    let mut j_next = 0.0; // J_{k+1}
    let mut j_cur = 1e-30; // J_k
    let mut norm = 0.0;
    let mut j0 = 0.0;
    let mut k = start;
    while k > 0 {
        let j_prev = k as f64 * two_over_x * j_cur - j_next; // J_{k-1}
        j_next = j_cur;
        j_cur = j_prev;
        let idx = k - 1;
        if idx > 0 && idx.is_multiple_of(2) {
            norm += 2.0 * j_cur;
        }
        if idx == 0 {
            j0 = j_cur;
        }
        if j_cur.abs() > 1e200 {
            j_cur *= 1e-200;
            j_next *= 1e-200;
            norm *= 1e-200;
        }
        k -= 1;
    }
    norm += j0;
    j0 / norm
}

pub(crate) fn j0_hankel(ax: f64) -> f64 {
    // P ~ Σ (-1)^k a_{2k} / x^{2k}, Q ~ Σ (-1)^(k+1) a_{2k+1} / x^{2k+1}
    // with a_k = Π_{i=1..k} (2i-1)² / (k! 8^k).
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..60usize {
        if k > 0 {
            let t = (2 * k - 1) as f64;
            a *= t * t / (8.0 * k as f64 * ax);
        }
        if a.abs() > prev {
            break; // asymptotic series started to diverge
        }
        prev = a.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q -= sign * a;
        }
        if a.abs() < EPS {
            break;
        }
    }
    let chi = ax - FRAC_PI_4;
    (2.0 / (PI * ax)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Normalized sinc, `sin(πx)/(πx)`.
#[inline]
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        let px = PI * x;
        1.0 - px * px / 6.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

/// Normalized Dirichlet kernel `sin(πKs) / (K sin(πs))`, analytic at integer `s`.
///
/// Equals `sinc(K s) / sinc(s)` and has period 1 (K odd) or 2 (K even) in `s`.
#[inline]
pub fn dirichlet(k: usize, s: f64) -> f64 {
    let kf = k as f64;
    let n = s.round();
    let r = s - n;
    if r.abs() < 1e-9 {
        // sin(πK(n+r)) / sin(π(n+r)) → K cos(πKn)/cos(πn) ≈ K (-1)^{n(K-1)}
        let sign = if (n as i64).rem_euclid(2) == 1 && k.is_multiple_of(2) { -1.0 } else { 1.0 };
        let pr = PI * r;
        let pkr = kf * pr;
        // second-order expansion of sin(K pr)/(K sin(pr))
        return sign * (1.0 - (pkr * pkr - pr * pr) / 6.0);
    }
    (PI * kf * s).sin() / (kf * (PI * s).sin())
}
