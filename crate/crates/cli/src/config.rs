//! Command-line flags, the optional TOML config file, and their merge.
//!
//! Precedence: flags override config-file values, which override defaults.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nearfield_core::{AfSource, GeometryKind, Processing, WindowKind};
use serde::{Deserialize, Serialize};

use crate::CliError;

fn parse_from_str<T: FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "nfamb", version, about = "Near-field range ambiguity functions for antenna arrays")]
pub struct Cli {
    /// TOML file with default values for any flag.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact and closed-form array factors on a shared distance grid.
    Af(AfArgs),
    /// Exact OFDM ambiguity against the separable approximation at several B_f·D products.
    Compare(CompareArgs),
    /// Resolution tables and beamdepth curves.
    Metrics(MetricsArgs),
    /// Distance sweeps of sidelobe gain or resolution, and minimum-bandwidth tables.
    Sweep(SweepArgs),
    /// Minimum bandwidth for far-field-equivalent PSL.
    Minbw(MinbwArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Af(_) => "af",
            Self::Compare(_) => "compare",
            Self::Metrics(_) => "metrics",
            Self::Sweep(_) => "sweep",
            Self::Minbw(_) => "minbw",
        }
    }

    pub fn common(&self) -> &CommonArgs {
        match self {
            Self::Af(a) => &a.common,
            Self::Compare(a) => &a.common,
            Self::Metrics(a) => &a.common,
            Self::Sweep(a) => &a.common,
            Self::Minbw(a) => &a.common,
        }
    }
}

/// Flags shared by every subcommand. Distances are in wavelengths.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Array geometry (ULA, UCA, URA, UPCA); repeatable.
    #[arg(long = "kind", value_parser = parse_from_str::<GeometryKind>)]
    pub kinds: Vec<GeometryKind>,
    /// Use all four geometries.
    #[arg(long)]
    pub all_kinds: bool,
    /// Processing mode (SIMO, MISO, SIMO_MISO, MIMO); repeatable.
    #[arg(long = "mode", value_parser = parse_from_str::<Processing>)]
    pub modes: Vec<Processing>,
    /// Aperture D in wavelengths; repeatable where a command sweeps apertures.
    #[arg(long = "d-ap")]
    pub d_ap: Vec<f64>,
    /// Maximum element spacing in wavelengths.
    #[arg(long)]
    pub spacing: Option<f64>,
    /// Fractional bandwidth; repeatable where a command sweeps bandwidths.
    #[arg(long = "bf", num_args = 1..)]
    pub b_frac: Vec<f64>,
    /// Number of OFDM subcarriers.
    #[arg(long = "k")]
    pub k: Option<usize>,
    /// Subcarrier window (rect, hamming, hann, blackman); repeatable.
    #[arg(long = "window", value_parser = parse_from_str::<WindowKind>)]
    pub windows: Vec<WindowKind>,
    /// Target distance d′.
    #[arg(long)]
    pub d_prime: Option<f64>,
    /// Lower end of the distance grid.
    #[arg(long)]
    pub d_min: Option<f64>,
    /// Upper end of the distance grid.
    #[arg(long)]
    pub d_max: Option<f64>,
    /// Number of grid samples or sweep points.
    #[arg(long)]
    pub points: Option<usize>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AfArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// B_f·D products to compare; defaults to a quarter, half and all of the constraint limit.
    #[arg(long = "product", num_args = 1..)]
    pub products: Vec<f64>,
    /// Array-factor source of the approximation.
    #[arg(long, value_enum)]
    pub af_source: Option<AfSourceArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AfSourceArg {
    ClosedForm,
    Exact,
}

impl From<AfSourceArg> for AfSource {
    fn from(a: AfSourceArg) -> Self {
        match a {
            AfSourceArg::ClosedForm => AfSource::ClosedForm,
            AfSourceArg::Exact => AfSource::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Table {
    /// Half-power arguments and minimum beamdepths.
    Alpha,
    /// Bandwidth-aperture product limits.
    Constraint,
    /// Minimum aperture and fractional bandwidth.
    Sizing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Curve {
    /// Beamdepth against distance.
    Bd,
    /// Minimum aperture and bandwidth against the sizing factor.
    Sizing,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long = "table", value_enum)]
    pub tables: Vec<Table>,
    #[arg(long = "curve", value_enum)]
    pub curves: Vec<Curve>,
    /// Near-field sizing factor η > 1.
    #[arg(long)]
    pub eta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMetric {
    Psl,
    Isl,
    /// Resolution against distance.
    Res,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long = "metric", value_enum)]
    pub metrics: Vec<SweepMetric>,
    /// Also write the minimum-bandwidth tables.
    #[arg(long)]
    pub min_bw: bool,
    #[arg(long)]
    pub eta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MinbwArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub eta: Option<f64>,
}

/// A scalar or a list in the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            Self::One(v) => vec![v],
            Self::Many(v) => v,
        }
    }
}

/// Keys accepted in the config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub kinds: Option<OneOrMany<String>>,
    pub modes: Option<OneOrMany<String>>,
    pub d_ap: Option<OneOrMany<f64>>,
    pub spacing: Option<f64>,
    pub b_frac: Option<OneOrMany<f64>>,
    pub k: Option<usize>,
    pub windows: Option<OneOrMany<String>>,
    pub d_prime: Option<f64>,
    pub d_min: Option<f64>,
    pub d_max: Option<f64>,
    pub points: Option<usize>,
    pub out: Option<PathBuf>,
    pub products: Option<OneOrMany<f64>>,
    pub af_source: Option<AfSourceArg>,
    pub tables: Option<OneOrMany<Table>>,
    pub curves: Option<OneOrMany<Curve>>,
    pub metrics: Option<OneOrMany<SweepMetric>>,
    pub min_bw: Option<bool>,
    pub eta: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

fn parse_list<T: FromStr>(v: Option<OneOrMany<String>>) -> Result<Vec<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    v.map(OneOrMany::into_vec)
        .unwrap_or_default()
        .iter()
        .map(|s| s.parse::<T>().map_err(|e| CliError::Usage(format!("config: {e}"))))
        .collect()
}

fn pick<T>(flag: Vec<T>, file: Option<OneOrMany<T>>) -> Vec<T> {
    if flag.is_empty() {
        file.map(OneOrMany::into_vec).unwrap_or_default()
    } else {
        flag
    }
}

/// Fully merged settings. Empty lists and `None` mean "use the command's default".
///
/// Serialized (without the output directory) to form the config hash.
#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub command: &'static str,
    pub kinds: Vec<GeometryKind>,
    pub modes: Vec<Processing>,
    pub d_ap: Vec<f64>,
    pub spacing: f64,
    pub b_frac: Vec<f64>,
    pub k: usize,
    pub windows: Vec<WindowKind>,
    pub d_prime: Option<f64>,
    pub d_min: Option<f64>,
    pub d_max: Option<f64>,
    pub points: Option<usize>,
    pub products: Vec<f64>,
    pub af_source: AfSourceArg,
    pub tables: Vec<Table>,
    pub curves: Vec<Curve>,
    pub metrics: Vec<SweepMetric>,
    pub min_bw: bool,
    pub eta: f64,
    #[serde(skip)]
    pub out: PathBuf,
}

impl Settings {
    pub fn resolve(command: &Command, file: FileConfig) -> Result<Self, CliError> {
        let c = command.common().clone();
        let file_kinds: Vec<GeometryKind> = parse_list(file.kinds)?;
        let file_modes: Vec<Processing> = parse_list(file.modes)?;
        let file_windows: Vec<WindowKind> = parse_list(file.windows)?;
        let kinds = if c.all_kinds {
            GeometryKind::ALL.to_vec()
        } else if !c.kinds.is_empty() {
            c.kinds
        } else {
            file_kinds
        };
        let (products, af_source, tables, curves, metrics, min_bw, eta) = match command {
            Command::Compare(a) => (a.products.clone(), a.af_source, vec![], vec![], vec![], false, None),
            Command::Metrics(a) => (vec![], None, a.tables.clone(), a.curves.clone(), vec![], false, a.eta),
            Command::Sweep(a) => (vec![], None, vec![], vec![], a.metrics.clone(), a.min_bw, a.eta),
            Command::Minbw(a) => (vec![], None, vec![], vec![], vec![], false, a.eta),
            Command::Af(_) => (vec![], None, vec![], vec![], vec![], false, None),
        };
        let s = Self {
            command: command.name(),
            kinds: dedup(kinds),
            modes: dedup(if c.modes.is_empty() { file_modes } else { c.modes }),
            d_ap: pick(c.d_ap, file.d_ap),
            spacing: c.spacing.or(file.spacing).unwrap_or(0.5),
            b_frac: pick(c.b_frac, file.b_frac),
            k: c.k.or(file.k).unwrap_or(1024),
            windows: dedup(if c.windows.is_empty() { file_windows } else { c.windows }),
            d_prime: c.d_prime.or(file.d_prime),
            d_min: c.d_min.or(file.d_min),
            d_max: c.d_max.or(file.d_max),
            points: c.points.or(file.points),
            products: pick(products, file.products),
            af_source: af_source.or(file.af_source).unwrap_or(AfSourceArg::ClosedForm),
            tables: dedup(pick(tables, file.tables)),
            curves: dedup(pick(curves, file.curves)),
            metrics: dedup(pick(metrics, file.metrics)),
            min_bw: min_bw || file.min_bw.unwrap_or(false),
            eta: eta.or(file.eta).unwrap_or(1.01),
            out: c.out.or(file.out).unwrap_or_else(|| PathBuf::from(".")),
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), CliError> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(CliError::Usage(format!("{name} must be positive and finite, got {v}")))
            }
        };
        for &d in &self.d_ap {
            positive("--d-ap", d)?;
        }
        positive("--spacing", self.spacing)?;
        for &b in &self.b_frac {
            if !(b.is_finite() && b >= 0.0) {
                return Err(CliError::Usage(format!("--bf must be non-negative, got {b}")));
            }
        }
        for &p in &self.products {
            positive("--product", p)?;
        }
        for (name, v) in [("--d-prime", self.d_prime), ("--d-min", self.d_min), ("--d-max", self.d_max)] {
            if let Some(v) = v {
                positive(name, v)?;
            }
        }
        if let (Some(lo), Some(hi)) = (self.d_min, self.d_max) {
            if lo >= hi {
                return Err(CliError::Usage(format!("--d-min ({lo}) must be below --d-max ({hi})")));
            }
        }
        if self.points.is_some_and(|n| n < 2) {
            return Err(CliError::Usage("--points must be at least 2".into()));
        }
        if self.k < 2 {
            return Err(CliError::Usage("--k must be at least 2".into()));
        }
        if !(self.eta > 1.0) {
            return Err(CliError::Usage(format!("--eta must exceed 1, got {}", self.eta)));
        }
        Ok(())
    }

    pub fn kinds_or_all(&self) -> Vec<GeometryKind> {
        if self.kinds.is_empty() {
            GeometryKind::ALL.to_vec()
        } else {
            self.kinds.clone()
        }
    }

    pub fn modes_or(&self, default: &[Processing]) -> Vec<Processing> {
        if self.modes.is_empty() {
            default.to_vec()
        } else {
            self.modes.clone()
        }
    }

    pub fn windows_or_all(&self) -> Vec<WindowKind> {
        if self.windows.is_empty() {
            WindowKind::ALL.to_vec()
        } else {
            self.windows.clone()
        }
    }

    /// The single aperture a command works with.
    pub fn one_d_ap(&self, default: f64) -> Result<f64, CliError> {
        match self.d_ap.as_slice() {
            [] => Ok(default),
            [d] => Ok(*d),
            _ => Err(CliError::Usage(format!("{} takes a single --d-ap", self.command))),
        }
    }
}

fn dedup<T: PartialEq>(v: Vec<T>) -> Vec<T> {
    let mut out = Vec::with_capacity(v.len());
    for x in v {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}
