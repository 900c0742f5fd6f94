//! Independent reference implementations used only by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use nearfield_core::curve::RadialGrid;
use nearfield_core::geometry::Position;
use num_complex::Complex64;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                let (mut q0, mut q1) = (1.0, z);
                for k in 2..=n {
                    let q2 = ((2 * k - 1) as f64 * z * q1 - (k - 1) as f64 * q0) / k as f64;
                    q0 = q1;
                    q1 = q2;
                }
                let dq = n as f64 * (z * q1 - q0) / (z * z - 1.0);
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * dq * dq);
                break;
            }
        }
    }
    (x, w)
}

/// Fresnel C and S at each of the sorted abscissae, by cumulative
/// composite Gauss-Legendre quadrature of the defining integrals.
pub fn fresnel_quadrature(xs: &[f64]) -> Vec<(f64, f64)> {
    let (gx, gw) = gauss_legendre(20);
    let mut out = Vec::with_capacity(xs.len());
    let (mut c, mut s, mut t) = (0.0, 0.0, 0.0);
    for &x in xs {
        assert!(x >= t, "abscissae must be sorted");
        while t < x {
            // keep the phase change per panel near one radian
            let h = (1.0 / (PI * t + 1.0)).min(0.1).min(x - t);
            let mid = t + 0.5 * h;
            for (n, wt) in gx.iter().zip(&gw) {
                let u = mid + 0.5 * h * n;
                let ph = 0.5 * PI * u * u;
                c += 0.5 * h * wt * ph.cos();
                s += 0.5 * h * wt * ph.sin();
            }
            t += h;
        }
        out.push((c, s));
    }
    out
}

/// `J0(x) = (1/π) ∫_0^π cos(x sin θ) dθ` by the trapezoid rule, which is
/// spectrally accurate for this periodic integrand.
pub fn j0_trapezoid(x: f64) -> f64 {
    let n = 4000;
    let h = PI / n as f64;
    let mut acc = 0.5 * (1.0 + 1.0);
    for i in 1..n {
        acc += (x * (i as f64 * h).sin()).cos();
    }
    acc * h / PI
}

/// Normalized `|A|²` from trapezoid integration over the band of the
/// per-pair matched-filter response `exp(−j2π(1 + f)Δd_mn)`.
pub fn mf_frequency_trapezoid(
    tx: &[Position],
    rx: &[Position],
    b_frac: f64,
    grid: &RadialGrid,
    n_freq: usize,
) -> Vec<f64> {
    let target = grid.target().to_cartesian();
    let ray = grid.ray();
    let mn = (tx.len() * rx.len()) as f64;
    grid.samples()
        .iter()
        .map(|&d| {
            let p = ray.at(d);
            let mut a = Complex64::new(0.0, 0.0);
            for m in tx {
                for n in rx {
                    let dd = (m.distance(&p) - m.distance(&target)) + (n.distance(&p) - n.distance(&target));
                    let h = b_frac / (n_freq - 1) as f64;
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..n_freq {
                        let f = -0.5 * b_frac + h * i as f64;
                        let w = if i == 0 || i == n_freq - 1 { 0.5 } else { 1.0 };
                        acc += Complex64::from_polar(w, -2.0 * PI * (1.0 + f) * dd);
                    }
                    a += acc * h / b_frac;
                }
            }
            a.norm_sqr() / (mn * mn)
        })
        .collect()
}
