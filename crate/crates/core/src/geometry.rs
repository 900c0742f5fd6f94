//! Antenna array layouts and the geometric quantities derived from them.
//!
//! All lengths are in wavelengths. The origin is the array centroid, and the
//! spherical convention is `p = d (sinθ cosφ, sinθ sinφ, cosθ)`.
//!
//! | kind | layout                        | boresight ray        |
//! |------|-------------------------------|----------------------|
//! | ULA  | X axis                        | +Y (θ = π/2, φ = π/2) |
//! | UCA  | circle in the XY plane        | +X (θ = π/2, φ = 0)   |
//! | URA  | square grid in the XY plane   | +Z (θ = 0)            |
//! | UPCA | concentric rings, XY plane    | +Z (θ = 0)            |
//!
//! The UCA ray runs in the array plane through element 0 (the front element).

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest element spacing for which the sum-to-integral step holds.
pub const NYQUIST_SPACING: f64 = 0.5;

/// Lower limit of the near-field region as a multiple of the aperture.
pub const MIN_DISTANCE_FACTOR: f64 = 1.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GeometryKind {
    Ula,
    Uca,
    Ura,
    Upca,
}

impl GeometryKind {
    pub const ALL: [GeometryKind; 4] = [Self::Ula, Self::Uca, Self::Ura, Self::Upca];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ula => "ULA",
            Self::Uca => "UCA",
            Self::Ura => "URA",
            Self::Upca => "UPCA",
        }
    }
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeometryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "ULA" => Ok(Self::Ula),
            "UCA" => Ok(Self::Uca),
            "URA" => Ok(Self::Ura),
            "UPCA" => Ok(Self::Upca),
            other => Err(Error::InvalidConfig(format!("unknown geometry kind `{other}`"))),
        }
    }
}

/// Single-aperture (SIMO/MISO) or collocated identical TX/RX apertures (MIMO).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Processing {
    #[serde(rename = "SIMO_MISO")]
    SimoMiso,
    #[serde(rename = "MIMO")]
    Mimo,
}

impl Processing {
    pub const ALL: [Processing; 2] = [Self::SimoMiso, Self::Mimo];

    /// Number of array-factor terms in the separable product.
    pub fn af_power(self) -> i32 {
        match self {
            Self::SimoMiso => 1,
            Self::Mimo => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::SimoMiso => "SIMO_MISO",
            Self::Mimo => "MIMO",
        }
    }
}

impl fmt::Display for Processing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Processing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace(['-', '/'], "_").as_str() {
            "SIMO" | "MISO" | "SIMO_MISO" => Ok(Self::SimoMiso),
            "MIMO" => Ok(Self::Mimo),
            other => Err(Error::InvalidConfig(format!("unknown processing mode `{other}`"))),
        }
    }
}

/// Cartesian position in wavelengths.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position {
    pub const ORIGIN: Position = Position { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn distance(&self, other: &Position) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    #[inline]
    pub fn dot(&self, other: &Position) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn translated(&self, by: &Position) -> Position {
        Position::new(self.x + by.x, self.y + by.y, self.z + by.z)
    }
}

/// Direction of a radial cut, in spherical angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    /// Elevation from +Z, radians.
    pub theta: f64,
    /// Azimuth from +X, radians.
    pub phi: f64,
}

impl Ray {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// Ray along which each geometry's closed form is stated.
    pub fn boresight(kind: GeometryKind) -> Self {
        match kind {
            GeometryKind::Ula => Self::new(FRAC_PI_2, FRAC_PI_2),
            GeometryKind::Uca => Self::new(FRAC_PI_2, 0.0),
            GeometryKind::Ura | GeometryKind::Upca => Self::new(0.0, 0.0),
        }
    }

    pub fn unit(&self) -> Position {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Position::new(st * cp, st * sp, ct)
    }

    pub fn at(&self, d: f64) -> Position {
        let u = self.unit();
        Position::new(d * u.x, d * u.y, d * u.z)
    }
}

/// A point in spherical coordinates about the array centroid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub d: f64,
    pub theta: f64,
    pub phi: f64,
}

impl Point {
    pub fn new(d: f64, theta: f64, phi: f64) -> Self {
        Self { d, theta, phi }
    }

    pub fn on_ray(ray: Ray, d: f64) -> Self {
        Self::new(d, ray.theta, ray.phi)
    }

    pub fn to_cartesian(&self) -> Position {
        Ray::new(self.theta, self.phi).at(self.d)
    }
}

/// Serializable description of an array: enough to rebuild it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    pub kind: GeometryKind,
    pub aperture_d: f64,
    #[serde(default = "default_spacing")]
    pub spacing: f64,
}

fn default_spacing() -> f64 {
    NYQUIST_SPACING
}

impl GeometrySpec {
    pub fn build(&self) -> Result<ArrayGeometry> {
        ArrayGeometry::build(self.kind, self.aperture_d, self.spacing)
    }
}

/// An immutable array of isotropic elements.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    kind: GeometryKind,
    elements: Vec<Position>,
    aperture_d: f64,
    spacing: f64,
}

impl ArrayGeometry {
    /// Lay out an array of the given kind and aperture.
    ///
    /// The realized element spacing never exceeds `spacing`; element counts
    /// are rounded up to odd for the linear and rectangular layouts and the
    /// circle so that element 0 sits on the symmetry axis.
    pub fn build(kind: GeometryKind, aperture_d: f64, spacing: f64) -> Result<Self> {
        if !(aperture_d.is_finite() && spacing.is_finite()) || aperture_d <= 0.0 || spacing <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "aperture ({aperture_d}) and spacing ({spacing}) must be positive and finite"
            )));
        }
        if spacing > NYQUIST_SPACING {
            return Err(Error::NyquistViolation { spacing });
        }
        if aperture_d < spacing {
            return Err(Error::DegenerateArray { aperture: aperture_d, spacing });
        }
        let (elements, realized) = match kind {
            GeometryKind::Ula => {
                let m = odd_up((aperture_d / spacing - 1e-9).ceil() as usize + 1);
                let step = aperture_d / (m - 1) as f64;
                let half = (m / 2) as i64;
                let els = (-half..=half).map(|i| Position::new(i as f64 * step, 0.0, 0.0)).collect();
                (els, step)
            }
            GeometryKind::Uca => {
                let m = odd_up((PI * aperture_d / spacing - 1e-9).ceil() as usize);
                let r = aperture_d / 2.0;
                let els = (0..m)
                    .map(|i| {
                        let a = 2.0 * PI * i as f64 / m as f64;
                        Position::new(r * a.cos(), r * a.sin(), 0.0)
                    })
                    .collect();
                (els, PI * aperture_d / m as f64)
            }
            GeometryKind::Ura => {
                let side = aperture_d * FRAC_1_SQRT_2;
                if side < spacing {
                    return Err(Error::DegenerateArray { aperture: aperture_d, spacing });
                }
                let n = odd_up((side / spacing - 1e-9).ceil() as usize + 1);
                let step = side / (n - 1) as f64;
                let half = (n / 2) as i64;
                let mut els = Vec::with_capacity(n * n);
                for iy in -half..=half {
                    for ix in -half..=half {
                        els.push(Position::new(ix as f64 * step, iy as f64 * step, 0.0));
                    }
                }
                (els, step)
            }
            GeometryKind::Upca => {
                let r = aperture_d / 2.0;
                let rings = (r / spacing - 1e-9).ceil().max(1.0) as usize;
                let dr = r / rings as f64;
                let mut els = vec![Position::ORIGIN];
                for q in 1..=rings {
                    let rq = q as f64 * dr;
                    let mq = ((2.0 * PI * rq / spacing) - 1e-9).ceil().max(3.0) as usize;
                    for i in 0..mq {
                        let a = 2.0 * PI * i as f64 / mq as f64;
                        els.push(Position::new(rq * a.cos(), rq * a.sin(), 0.0));
                    }
                }
                (els, dr)
            }
        };
        Ok(Self { kind, elements, aperture_d, spacing: realized })
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn elements(&self) -> &[Position] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Largest dimension: end-to-end (ULA), diameter (UCA, UPCA), diagonal (URA).
    pub fn aperture_d(&self) -> f64 {
        self.aperture_d
    }

    /// Realized element spacing (radial ring spacing for UPCA, arc spacing for UCA).
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn spec(&self) -> GeometrySpec {
        GeometrySpec { kind: self.kind, aperture_d: self.aperture_d, spacing: self.spacing }
    }

    /// The element distances are referenced to: the front element for UCA,
    /// the centroid otherwise.
    pub fn reference_position(&self) -> Position {
        match self.kind {
            GeometryKind::Uca => self.elements[0],
            _ => Position::ORIGIN,
        }
    }

    pub fn centroid(&self) -> Position {
        let n = self.elements.len() as f64;
        let s = self.elements.iter().fold(Position::ORIGIN, |acc, p| acc.translated(p));
        Position::new(s.x / n, s.y / n, s.z / n)
    }

    /// Largest pairwise element distance, by brute force over the hull candidates.
    pub fn measured_aperture(&self) -> f64 {
        // The maximum is attained between elements of maximal radius.
        let rmax = self.elements.iter().map(Position::norm).fold(0.0, f64::max);
        let outer: Vec<&Position> = self.elements.iter().filter(|p| p.norm() > rmax - self.spacing - 1e-9).collect();
        let mut best: f64 = 0.0;
        for (i, a) in outer.iter().enumerate() {
            for b in &outer[i + 1..] {
                best = best.max(a.distance(b));
            }
        }
        best
    }

    /// Exact Euclidean distance from element `index` to `p`.
    pub fn distance(&self, index: usize, p: &Point) -> f64 {
        self.elements[index].distance(&p.to_cartesian())
    }

    /// Effective aperture seen from direction `(theta, phi)`.
    pub fn effective_aperture(&self, theta: f64, phi: f64) -> EffectiveAperture {
        effective_aperture(self.kind, self.aperture_d, theta, phi)
    }

    /// Positions as CSV: `index,x,y,z`.
    pub fn write_positions_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "index,x,y,z")?;
        for (i, p) in self.elements.iter().enumerate() {
            writeln!(out, "{i},{},{},{}", fmt_sig9(p.x), fmt_sig9(p.y), fmt_sig9(p.z))?;
        }
        Ok(())
    }
}

fn odd_up(m: usize) -> usize {
    if m.is_multiple_of(2) {
        m + 1
    } else {
        m
    }
}

/// Effective aperture for a direction; URA reports one value per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EffectiveAperture {
    Single(f64),
    PerAxis { x: f64, y: f64 },
}

impl EffectiveAperture {
    /// Fraunhofer distance per axis, `2 D_eff²`.
    pub fn fraunhofer(&self) -> (f64, f64) {
        match *self {
            Self::Single(d) => (fraunhofer_distance(d), fraunhofer_distance(d)),
            Self::PerAxis { x, y } => (fraunhofer_distance(x), fraunhofer_distance(y)),
        }
    }
}

/// Effective aperture of a `kind` array with aperture `aperture_d` at `(theta, phi)`.
///
/// ULA: `D sqrt(1 − sin²θ cos²φ)` (i.e. `D sin φ` in the XY plane). URA: per
/// axis, with `D_x = D_y = D/√2`. UCA and UPCA: `D` (their closed forms only
/// cover the boresight cuts).
pub fn effective_aperture(kind: GeometryKind, aperture_d: f64, theta: f64, phi: f64) -> EffectiveAperture {
    let st = theta.sin();
    match kind {
        GeometryKind::Ula => {
            let c = st * phi.cos();
            EffectiveAperture::Single(aperture_d * (1.0 - c * c).max(0.0).sqrt())
        }
        GeometryKind::Ura => {
            let side = aperture_d * FRAC_1_SQRT_2;
            let cx = st * phi.cos();
            let cy = st * phi.sin();
            EffectiveAperture::PerAxis {
                x: side * (1.0 - cx * cx).max(0.0).sqrt(),
                y: side * (1.0 - cy * cy).max(0.0).sqrt(),
            }
        }
        GeometryKind::Uca | GeometryKind::Upca => EffectiveAperture::Single(aperture_d),
    }
}

/// `2 D_eff² / λ` with λ = 1.
pub fn fraunhofer_distance(d_eff: f64) -> f64 {
    2.0 * d_eff * d_eff
}

/// Absolute vergence difference `|1/d − 1/d′|`.
pub fn vergence(d: f64, d_prime: f64) -> f64 {
    if d_prime.is_infinite() {
        return 1.0 / d;
    }
    if d.is_infinite() {
        return 1.0 / d_prime;
    }
    (d - d_prime).abs() / (d * d_prime)
}

/// Worst-case distance-correction term `max_m |Δδ_m(p_min, p_max)|`.
///
/// `p_min` sits at 1.2 D from the centroid along the geometry's boresight and
/// `p_max` is the far-field limit, where `δ_m → −(p_m − p_ref)·u`. MIMO
/// doubles the single-aperture value.
pub fn max_correction_term(geometry: &ArrayGeometry, mode: Processing) -> f64 {
    max_correction_term_with_arg(geometry, mode).0
}

/// As [`max_correction_term`], also returning the maximizing element index.
pub fn max_correction_term_with_arg(geometry: &ArrayGeometry, mode: Processing) -> (f64, usize) {
    let ray = Ray::boresight(geometry.kind);
    let u = ray.unit();
    let p_min = ray.at(MIN_DISTANCE_FACTOR * geometry.aperture_d);
    let reference = geometry.reference_position();
    let d_ref = p_min.distance(&reference);
    let mut best = (0.0f64, 0usize);
    for (i, pm) in geometry.elements.iter().enumerate() {
        let delta_min = p_min.distance(pm) - d_ref;
        let rel = Position::new(pm.x - reference.x, pm.y - reference.y, pm.z - reference.z);
        let delta_max = -rel.dot(&u);
        let v = (delta_min - delta_max).abs();
        if v > best.0 {
            best = (v, i);
        }
    }
    let factor = mode.af_power() as f64;
    (factor * best.0, best.1)
}

/// Nine significant digits in scientific notation, stable across platforms.
pub fn fmt_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{v:.8e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ula_layout() {
        let g = ArrayGeometry::build(GeometryKind::Ula, 50.0, 0.5).unwrap();
        assert_eq!(g.len(), 101);
        let xs: Vec<f64> = g.elements().iter().map(|p| p.x).collect();
        assert!((xs[0] + 25.0).abs() < 1e-12);
        assert!((xs[100] - 25.0).abs() < 1e-12);
        assert_eq!(g.elements()[50], Position::ORIGIN);
    }

    #[test]
    fn uca_layout() {
        let g = ArrayGeometry::build(GeometryKind::Uca, 50.0, 0.5).unwrap();
        assert_eq!(g.len() % 2, 1);
        for p in g.elements() {
            assert!((p.norm() - 25.0).abs() < 1e-12);
        }
        assert!(g.centroid().norm() < 1e-9 * 50.0);
        assert!(g.spacing() <= 0.5);
        assert_eq!(g.reference_position(), Position::new(25.0, 0.0, 0.0));
    }

    #[test]
    fn ura_layout() {
        let g = ArrayGeometry::build(GeometryKind::Ura, 50.0, 0.5).unwrap();
        let side = g.elements().iter().map(|p| p.x).fold(f64::MIN, f64::max) * 2.0;
        assert!((side - 50.0 / 2f64.sqrt()).abs() < 1e-9);
        assert!((side - 35.36).abs() < 0.01);
        assert!((g.measured_aperture() - 50.0).abs() < 1e-9);
    }

    #[test]
    fn upca_layout() {
        let g = ArrayGeometry::build(GeometryKind::Upca, 41.9, 0.5).unwrap();
        assert!(g.centroid().norm() < 1e-9 * 41.9);
        assert!(g.spacing() <= 0.5);
        assert!((g.measured_aperture() - 41.9).abs() <= g.spacing());
        assert_eq!(g.elements()[0], Position::ORIGIN);
    }

    #[test]
    fn invalid_builds() {
        assert!(matches!(ArrayGeometry::build(GeometryKind::Ula, 50.0, 0.6), Err(Error::NyquistViolation { .. })));
        assert!(matches!(ArrayGeometry::build(GeometryKind::Uca, 0.3, 0.5), Err(Error::DegenerateArray { .. })));
        assert!(ArrayGeometry::build(GeometryKind::Ura, -1.0, 0.5).is_err());
    }

    #[test]
    fn distances() {
        let g = ArrayGeometry::build(GeometryKind::Ula, 50.0, 0.5).unwrap();
        let p = Point::new(60.0, FRAC_PI_2, FRAC_PI_2);
        assert!((g.distance(50, &p) - 60.0).abs() < 1e-12);
        assert!((g.distance(100, &p) - 65.0).abs() < 1e-12);
        assert!((g.distance(0, &p) - g.distance(100, &p)).abs() < 1e-12);

        let c = ArrayGeometry::build(GeometryKind::Uca, 50.0, 0.5).unwrap();
        let q = Point::new(30.0, FRAC_PI_2, 0.0);
        assert!((c.distance(0, &q) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn effective_apertures() {
        let d = 50.0;
        match effective_aperture(GeometryKind::Ula, d, FRAC_PI_2, FRAC_PI_2) {
            EffectiveAperture::Single(v) => assert!((v - d).abs() < 1e-12),
            _ => unreachable!(),
        }
        match effective_aperture(GeometryKind::Ula, d, FRAC_PI_2, PI / 6.0) {
            EffectiveAperture::Single(v) => assert!((v - d / 2.0).abs() < 1e-12),
            _ => unreachable!(),
        }
        match effective_aperture(GeometryKind::Ura, d, 0.0, FRAC_PI_2) {
            EffectiveAperture::PerAxis { x, y } => {
                assert!((x - d * FRAC_1_SQRT_2).abs() < 1e-12);
                assert!((y - d * FRAC_1_SQRT_2).abs() < 1e-12);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn fraunhofer_and_vergence() {
        assert_eq!(fraunhofer_distance(50.0), 5000.0);
        assert_eq!(fraunhofer_distance(25.0), 1250.0);
        assert_eq!(fraunhofer_distance(0.5), 0.5);
        assert_eq!(vergence(60.0, 60.0), 0.0);
        assert!((vergence(30.0, 60.0) - 1.0 / 60.0).abs() < 1e-15);
        assert!((vergence(40.0, f64::INFINITY) - 1.0 / 40.0).abs() < 1e-15);
    }

    #[test]
    fn correction_terms() {
        let ula = ArrayGeometry::build(GeometryKind::Ula, 50.0, 0.5).unwrap();
        let v = max_correction_term(&ula, Processing::SimoMiso);
        assert!((v / 50.0 - 0.1).abs() < 0.001, "{v}");
        assert!((max_correction_term(&ula, Processing::Mimo) - 2.0 * v).abs() < 1e-12);

        let uca = ArrayGeometry::build(GeometryKind::Uca, 50.0, 0.5).unwrap();
        let (v, arg) = max_correction_term_with_arg(&uca, Processing::SimoMiso);
        assert!((v / 50.0 - 0.104).abs() < 0.00104, "{v}");
        // maximizer close to arccos(5/24) on either side of the axis
        let p = uca.elements()[arg];
        let angle = p.y.atan2(p.x).abs();
        let arc = (angle - (5.0f64 / 24.0).acos()).abs() * 25.0;
        assert!(arc <= uca.spacing(), "arc offset {arc}");
    }

    #[test]
    fn positions_csv() {
        let g = ArrayGeometry::build(GeometryKind::Ula, 1.0, 0.5).unwrap();
        let mut buf = Vec::new();
        g.write_positions_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("index,x,y,z"));
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn spec_round_trip() {
        let spec: GeometrySpec = serde_json::from_str(r#"{"kind":"URA","aperture_d":20.0,"spacing":0.5}"#).unwrap();
        assert_eq!(spec.kind, GeometryKind::Ura);
        assert!(serde_json::from_str::<GeometrySpec>(r#"{"kind":"URA","aperture_d":2,"bogus":1}"#).is_err());
        let g = spec.build().unwrap();
        assert_eq!(g.spec().kind, GeometryKind::Ura);
    }
}
