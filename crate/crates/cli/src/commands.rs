//! The five subcommands. Each writes its files through [`Outputs`].

use nearfield_core::closed_form::{
    ambiguity_approx_with, ambiguity_bandwidth_only, array_factor_closed, separability_constraint, tabulated_limit,
    ApproxOptions, BandwidthModel,
};
use nearfield_core::curve::{AmbiguityCurve, Provenance, RadialGrid};
use nearfield_core::exact_mf::{ambiguity_exact_ofdm, array_factor_exact, SensingConfig};
use nearfield_core::geometry::{fraunhofer_distance, ArrayGeometry, GeometryKind, Processing, Ray};
use nearfield_core::metrics::{
    bd_min_asymptotic, beamdepth, boundary_nf_bw, db_rmse, db_rmse_over, gain_vs_distance, half_power_width,
    mainlobe_above, matched_bandwidth, min_aperture, min_bw_for_psl_with, min_fbw, nf_region, solve_alpha, GainGrid,
    MetricsReport, MinBwSearch, SidelobeMetric, RANGE_RES_COEFF,
};
use nearfield_core::waveform::WindowKind;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Curve, Settings, SweepMetric, Table};
use crate::output::{f, Outputs};
use crate::CliError;

const BOTH_MODES: [Processing; 2] = [Processing::SimoMiso, Processing::Mimo];

/// Mainlobe used for the dB-RMSE summaries: where the reference stays above −10 dB.
const MAINLOBE_DB: f64 = -10.0;

fn build(kind: GeometryKind, d_ap: f64, spacing: f64) -> Result<ArrayGeometry, CliError> {
    ArrayGeometry::build(kind, d_ap, spacing).map_err(|e| CliError::Usage(e.to_string()))
}

fn grid(d_prime: f64, kind: GeometryKind, lo: f64, hi: f64, n: usize) -> Result<RadialGrid, CliError> {
    RadialGrid::linspace(d_prime, Ray::boresight(kind), lo, hi, n).map_err(|e| CliError::Usage(e.to_string()))
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1).max(1) as f64)).collect()
}

fn one_window(s: &Settings) -> Result<WindowKind, CliError> {
    match s.windows.as_slice() {
        [] => Ok(WindowKind::Rect),
        [w] => Ok(*w),
        _ => Err(CliError::Usage(format!("{} takes a single --window", s.command))),
    }
}

fn peak_distance(c: &AmbiguityCurve) -> f64 {
    c.grid.samples()[c.peak_index()]
}

fn wide_rows(x: &[f64], curves: &[&AmbiguityCurve]) -> Vec<Vec<String>> {
    x.iter()
        .enumerate()
        .map(|(i, d)| {
            let mut row = vec![f(*d)];
            for c in curves {
                row.push(f(c.values_linear[i]));
                row.push(f(c.values_db[i]));
            }
            row
        })
        .collect()
}

pub fn af(s: &Settings, hash: &str, out: &mut Outputs) -> Result<(), CliError> {
    if s.kinds.is_empty() {
        return Err(CliError::Usage("af needs --kind or --all-kinds".into()));
    }
    let d_prime = s.d_prime.ok_or_else(|| CliError::Usage("af needs --d-prime".into()))?;
    let d_ap = s.one_d_ap(50.0)?;
    let (lo, hi) = (s.d_min.unwrap_or(0.5 * d_prime), s.d_max.unwrap_or(2.0 * d_prime));
    let n = s.points.unwrap_or(1001);
    let mut summary = Vec::new();
    for &kind in &s.kinds {
        let g = build(kind, d_ap, s.spacing)?;
        let grid = grid(d_prime, kind, lo, hi, n)?;
        let single = array_factor_exact(&g, &grid);
        for mode in s.modes_or(&[Processing::SimoMiso]) {
            let p = mode.af_power();
            let raw = single.values_linear.iter().map(|v| v.powi(p)).collect();
            let exact = AmbiguityCurve::from_raw(grid.clone(), raw, 1.0, Provenance::AfOnly);
            let closed = array_factor_closed(&g, mode, &grid)?;
            out.csv(
                &format!("af_{kind}_{mode}.csv"),
                hash,
                &["d_lambda", "exact_linear", "exact_db", "closed_form_linear", "closed_form_db"],
                &wide_rows(grid.samples(), &[&exact, &closed]),
            )?;
            summary.push(json!({
                "kind": kind,
                "mode": mode,
                "elements": g.len(),
                "db_rmse": db_rmse(&exact, &closed)?,
                "db_rmse_mainlobe": db_rmse_over(&exact, &closed, mainlobe_above(&exact, MAINLOBE_DB))?,
                "peak_d_exact": peak_distance(&exact),
                "peak_d_closed_form": peak_distance(&closed),
                "warnings": closed.warnings,
            }));
        }
    }
    out.json("af_summary.json", &json!({ "config_hash": hash, "d_ap": d_ap, "d_prime": d_prime, "curves": summary }))
}

pub fn compare(s: &Settings, hash: &str, out: &mut Outputs) -> Result<(), CliError> {
    if s.kinds.is_empty() {
        return Err(CliError::Usage("compare needs --kind or --all-kinds".into()));
    }
    let window = one_window(s)?;
    let opts = ApproxOptions { bandwidth: BandwidthModel::Ofdm, af_source: s.af_source.into() };
    for mode in s.modes_or(&[Processing::SimoMiso]) {
        let d_ap = s.one_d_ap(if mode == Processing::Mimo { 25.0 } else { 50.0 })?;
        let d_prime = s.d_prime.unwrap_or(1.2 * d_ap);
        for &kind in &s.kinds {
            let g = build(kind, d_ap, s.spacing)?;
            let report = separability_constraint(kind, mode)?;
            let limit = tabulated_limit(kind, mode);
            let products =
                if s.products.is_empty() { vec![limit / 4.0, limit / 2.0, limit] } else { s.products.clone() };
            let bd = match beamdepth(d_ap, d_prime, solve_alpha(kind, mode)).value() {
                v if v.is_finite() => v,
                _ => d_prime,
            };
            let lo = s.d_min.unwrap_or((d_prime - 3.0 * bd).max(0.25 * d_prime));
            let hi = s.d_max.unwrap_or(d_prime + 3.0 * bd);
            let grid = grid(d_prime, kind, lo, hi, s.points.unwrap_or(401))?;
            let mut header = vec!["d_lambda".to_string()];
            let mut curves = Vec::new();
            let mut panels = Vec::new();
            for &product in &products {
                let cfg = SensingConfig::new(g.clone(), mode, product / d_ap).with_subcarriers(s.k).with_window(window);
                let exact = ambiguity_exact_ofdm(&cfg, &grid)?;
                let approx = ambiguity_approx_with(&cfg, &grid, opts)?;
                let checked = report.check(product);
                panels.push(json!({
                    "product": product,
                    "b_frac": cfg.b_frac,
                    "db_rmse": db_rmse(&exact, &approx)?,
                    "db_rmse_mainlobe": db_rmse_over(&exact, &approx, mainlobe_above(&exact, MAINLOBE_DB))?,
                    "within_quarter_limit": checked.satisfied_quarter,
                    "constraint_warning": checked.exceeded().then(|| {
                        format!("B_f·D = {product} exceeds the separability limit {limit}")
                    }),
                    "warnings": approx.warnings,
                }));
                for name in ["exact", "approx"] {
                    header.push(format!("{name}_linear_p{product}"));
                    header.push(format!("{name}_db_p{product}"));
                }
                curves.push(exact);
                curves.push(approx);
            }
            let refs: Vec<&AmbiguityCurve> = curves.iter().collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            out.csv(&format!("compare_{kind}_{mode}.csv"), hash, &header, &wide_rows(grid.samples(), &refs))?;
            out.json(
                &format!("compare_{kind}_{mode}.json"),
                &json!({
                    "config_hash": hash,
                    "kind": kind,
                    "mode": mode,
                    "d_ap": d_ap,
                    "d_prime": d_prime,
                    "k_subcarriers": s.k,
                    "window": window,
                    "af_source": s.af_source,
                    "constraint": report,
                    "panels": panels,
                }),
            )?;
        }
    }
    Ok(())
}

pub fn metrics(s: &Settings, hash: &str, out: &mut Outputs) -> Result<(), CliError> {
    let kinds = s.kinds_or_all();
    let modes = s.modes_or(&BOTH_MODES);
    let pairs: Vec<(GeometryKind, Processing)> =
        kinds.iter().flat_map(|k| modes.iter().map(move |m| (*k, *m))).collect();
    let tables = if s.tables.is_empty() && s.curves.is_empty() {
        vec![Table::Alpha, Table::Constraint, Table::Sizing]
    } else {
        s.tables.clone()
    };
    let n = s.points.unwrap_or(200);
    for table in tables {
        match table {
            Table::Alpha => {
                let rows = pairs
                    .iter()
                    .map(|&(k, m)| {
                        let a = solve_alpha(k, m);
                        vec![k.to_string(), m.to_string(), f(a), f(bd_min_asymptotic(a))]
                    })
                    .collect::<Vec<_>>();
                out.csv("table_alpha.csv", hash, &["kind", "mode", "alpha", "bd_min_lambda"], &rows)?;
            }
            Table::Constraint => {
                let mut rows = Vec::new();
                for &(k, m) in &pairs {
                    let r = separability_constraint(k, m)?;
                    rows.push(vec![k.to_string(), m.to_string(), f(r.limit), f(r.recomputed_limit)]);
                }
                out.csv("table_constraint.csv", hash, &["kind", "mode", "limit", "recomputed_limit"], &rows)?;
            }
            Table::Sizing => {
                let mut rows = Vec::new();
                for &(k, m) in &pairs {
                    let a = solve_alpha(k, m);
                    let (d, b) = (min_aperture(s.eta, a)?, min_fbw(s.eta, a)?);
                    rows.push(vec![k.to_string(), m.to_string(), f(s.eta), f(d), f(b), f(d * b)]);
                }
                out.csv(
                    "table_sizing.csv",
                    hash,
                    &["kind", "mode", "eta", "d_min_lambda", "b_f_min", "product"],
                    &rows,
                )?;
            }
        }
    }
    let apertures = if s.d_ap.is_empty() { vec![50.0] } else { s.d_ap.clone() };
    for curve in &s.curves {
        match curve {
            Curve::Bd => {
                let mut rows = Vec::new();
                for &d_ap in &apertures {
                    for &(k, m) in &pairs {
                        let a = solve_alpha(k, m);
                        let (lo, hi) = nf_region(d_ap, a);
                        let (lo, hi) = (s.d_min.unwrap_or(lo), s.d_max.unwrap_or(hi));
                        for d in log_space(lo, hi, n) {
                            let bd = beamdepth(d_ap, d, a).value();
                            rows.push(vec![k.to_string(), m.to_string(), f(d_ap), f(d), f(bd)]);
                        }
                    }
                }
                out.csv("curve_bd.csv", hash, &["kind", "mode", "d_ap", "d_lambda", "beamdepth_lambda"], &rows)?;
            }
            Curve::Sizing => {
                let mut rows = Vec::new();
                for &(k, m) in &pairs {
                    let a = solve_alpha(k, m);
                    for x in log_space(1e-3, 1.0, n) {
                        let eta = 1.0 + x;
                        let (d, b) = (min_aperture(eta, a)?, min_fbw(eta, a)?);
                        rows.push(vec![k.to_string(), m.to_string(), f(eta), f(d), f(b)]);
                    }
                }
                out.csv("curve_sizing.csv", hash, &["kind", "mode", "eta", "d_min_lambda", "b_f_min"], &rows)?;
            }
        }
    }
    let mut reports = Vec::new();
    for &d_ap in &apertures {
        for &(k, m) in &pairs {
            reports.push(MetricsReport::new(k, m, d_ap));
        }
    }
    out.json("metrics.json", &json!({ "config_hash": hash, "reports": reports }))
}

pub fn sweep(s: &Settings, hash: &str, out: &mut Outputs) -> Result<(), CliError> {
    if s.metrics.is_empty() && !s.min_bw {
        return Err(CliError::Usage("sweep needs --metric or --min-bw".into()));
    }
    let kinds = s.kinds_or_all();
    let modes = s.modes_or(&BOTH_MODES);
    let d_ap = s.one_d_ap(50.0)?;
    let n = s.points.unwrap_or(24);
    for metric in &s.metrics {
        match metric {
            SweepMetric::Psl | SweepMetric::Isl => {
                let (which, name) = match metric {
                    SweepMetric::Psl => (SidelobeMetric::Psl, "psl"),
                    _ => (SidelobeMetric::Isl, "isl"),
                };
                let window = one_window(s)?;
                let mut rows = Vec::new();
                let mut sweeps = Vec::new();
                for &kind in &kinds {
                    let g = build(kind, d_ap, s.spacing)?;
                    let bands = if s.b_frac.is_empty() { vec![matched_bandwidth(kind)] } else { s.b_frac.clone() };
                    for (&b, &mode) in bands.iter().flat_map(|b| modes.iter().map(move |m| (b, m))) {
                        let (lo, hi) = nf_region(d_ap, solve_alpha(kind, mode));
                        let cfg = SensingConfig::new(g.clone(), mode, b).with_subcarriers(s.k).with_window(window);
                        let sw = gain_vs_distance(&cfg, which, &log_space(lo, hi, n), GainGrid::default())?;
                        for p in &sw.points {
                            rows.push(vec![
                                kind.to_string(),
                                mode.to_string(),
                                f(b),
                                f(p.d_prime),
                                f(p.composite_db.db()),
                                f(p.bandwidth_only_db.db()),
                                f(p.gain_db),
                            ]);
                        }
                        sweeps.push(json!({ "kind": kind, "mode": mode, "b_frac": b, "sweep": sw }));
                    }
                }
                out.csv(
                    &format!("sweep_{name}.csv"),
                    hash,
                    &["kind", "mode", "b_frac", "d_prime", "composite_db", "bandwidth_only_db", "gain_db"],
                    &rows,
                )?;
                out.json(
                    &format!("sweep_{name}.json"),
                    &json!({ "config_hash": hash, "d_ap": d_ap, "window": window, "sweeps": sweeps }),
                )?;
            }
            SweepMetric::Res => {
                let bands = if s.b_frac.is_empty() { vec![0.01, 0.05] } else { s.b_frac.clone() };
                let mut rows = Vec::new();
                for &kind in &kinds {
                    let g = build(kind, d_ap, s.spacing)?;
                    for &mode in &modes {
                        for &b in &bands {
                            rows.extend(resolution_rows(&g, mode, b, n)?);
                        }
                    }
                }
                out.csv(
                    "sweep_res.csv",
                    hash,
                    &[
                        "kind",
                        "mode",
                        "b_frac",
                        "d_prime",
                        "beamdepth",
                        "bandwidth_resolution",
                        "composite_resolution",
                        "nf_bw_boundary",
                    ],
                    &rows,
                )?;
            }
        }
    }
    if s.min_bw {
        min_bw_tables(s, hash, out)?;
    }
    Ok(())
}

/// Beamdepth, bandwidth resolution and the measured 3 dB width of the
/// composite (continuous spectrum × closed-form AF) at log-spaced distances.
fn resolution_rows(g: &ArrayGeometry, mode: Processing, b: f64, n: usize) -> Result<Vec<Vec<String>>, CliError> {
    let kind = g.kind();
    let d_ap = g.aperture_d();
    let alpha = solve_alpha(kind, mode);
    let (lo, hi) = nf_region(d_ap, alpha);
    let bw_res = if b > 0.0 { RANGE_RES_COEFF / b } else { f64::INFINITY };
    let boundary = boundary_nf_bw(d_ap, b, alpha).raw;
    let cfg = SensingConfig::new(g.clone(), mode, b);
    let opts = ApproxOptions { bandwidth: BandwidthModel::Sinc, ..ApproxOptions::default() };
    log_space(lo, hi, n)
        .par_iter()
        .map(|&dp| {
            let bd = beamdepth(d_ap, dp, alpha).value();
            let mut half = 1.5 * bd.min(bw_res).min(fraunhofer_distance(d_ap));
            let mut width = f64::NAN;
            for _ in 0..6 {
                let grid = RadialGrid::linspace(dp, Ray::boresight(kind), (dp - half).max(0.05 * dp), dp + half, 2001)?;
                if let Some(w) = half_power_width(&ambiguity_approx_with(&cfg, &grid, opts)?) {
                    width = w;
                    break;
                }
                half *= 2.0;
            }
            Ok(vec![kind.to_string(), mode.to_string(), f(b), f(dp), f(bd), f(bw_res), f(width), f(boundary)])
        })
        .collect()
}

fn min_bw_tables(s: &Settings, hash: &str, out: &mut Outputs) -> Result<Vec<Value>, CliError> {
    let search = MinBwSearch { eta: s.eta, k_subcarriers: s.k, ..MinBwSearch::default() };
    let mut rows = Vec::new();
    let mut results = Vec::new();
    for window in s.windows_or_all() {
        for kind in s.kinds_or_all() {
            for mode in s.modes_or(&BOTH_MODES) {
                let r = min_bw_for_psl_with(kind, mode, window, search)?;
                rows.push(vec![
                    kind.to_string(),
                    mode.to_string(),
                    window.to_string(),
                    f(r.alpha),
                    f(r.aperture_d),
                    f(r.target_psl_db),
                    f(r.b_f_min),
                    f(r.b_f_min_psl),
                    f(r.ratio.value()),
                ]);
                results.push(serde_json::to_value(r).map_err(nearfield_core::Error::from)?);
            }
        }
    }
    out.csv(
        "minbw.csv",
        hash,
        &["kind", "mode", "window", "alpha", "aperture_d", "target_psl_db", "b_f_min", "b_f_min_psl", "ratio"],
        &rows,
    )?;
    out.json("minbw.json", &json!({ "config_hash": hash, "search": search, "results": results }))?;
    Ok(results)
}

pub fn minbw(s: &Settings, hash: &str, out: &mut Outputs) -> Result<(), CliError> {
    min_bw_tables(s, hash, out)?;
    let Some(d_prime) = s.d_prime else {
        return Ok(());
    };
    // composite ambiguity at the minimum bandwidth, on the sizing aperture
    let search = MinBwSearch { eta: s.eta, k_subcarriers: s.k, ..MinBwSearch::default() };
    for window in s.windows_or_all() {
        for kind in s.kinds_or_all() {
            for mode in s.modes_or(&BOTH_MODES) {
                let r = min_bw_for_psl_with(kind, mode, window, search)?;
                if r.ratio.is_infinite() {
                    continue;
                }
                let g = build(kind, r.aperture_d, s.spacing)?;
                let half = 30.0 * bd_min_asymptotic(r.alpha);
                let grid = grid(
                    d_prime,
                    kind,
                    (d_prime - half).max(0.05 * d_prime),
                    d_prime + half,
                    s.points.unwrap_or(4001),
                )?;
                let cfg = SensingConfig::new(g, mode, r.b_f_min_psl).with_subcarriers(s.k).with_window(window);
                let composite = ambiguity_approx_with(&cfg, &grid, ApproxOptions::default())?;
                let bw = ambiguity_bandwidth_only(&cfg, &grid, BandwidthModel::Ofdm)?;
                out.csv(
                    &format!("minbw_curve_{kind}_{mode}_{window}.csv"),
                    hash,
                    &["d_lambda", "composite_linear", "composite_db", "bandwidth_only_linear", "bandwidth_only_db"],
                    &wide_rows(grid.samples(), &[&composite, &bw]),
                )?;
            }
        }
    }
    Ok(())
}
