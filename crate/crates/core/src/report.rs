//! Metrics derived from a final association, and the files written for them.
//!
//! All numbers in exported files carry 12 significant digits. JSON files
//! include a `schema_version`; infinite values are written as `null` in JSON
//! and `inf` in CSV.

use std::fs::{self, File};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::energy::EnergyState;
use crate::error::{Error, QueueKind, Result};
use crate::network::Network;
use crate::nua::{evaluate, IterationTrace, RunStatus};
use crate::queueing::{Association, LoadState};
use crate::scenario::BsKind;

pub const SCHEMA_VERSION: u32 = 1;

/// Unweighted latency aggregate `sum_j (mu_j + mu~_j)`. Loads must be below 1.
pub fn latency_index(loads: &LoadState) -> f64 {
    let ratio = |l: f64| l / (1.0 - l);
    loads.bs_load.iter().zip(&loads.backhaul_load).map(|(&r, &b)| ratio(r) + ratio(b)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerBsMetrics {
    pub bs_id: u32,
    pub kind: BsKind,
    pub rho: f64,
    pub rho_tilde: f64,
    pub w: f64,
    pub mu: f64,
    pub mu_tilde: f64,
    pub power_w: f64,
    pub brown_w: f64,
    pub point_count: usize,
}

impl PerBsMetrics {
    pub fn weighted_latency(&self) -> f64 {
        self.w * (self.mu + self.mu_tilde)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsBundle {
    pub psi: f64,
    pub latency_index: f64,
    pub brown_power_total: f64,
    pub per_bs: Vec<PerBsMetrics>,
}

impl MetricsBundle {
    /// `psi` rebuilt from the per-station rows.
    pub fn recomposed_psi(&self) -> f64 {
        self.per_bs.iter().map(PerBsMetrics::weighted_latency).sum()
    }
}

pub fn compute_metrics(assoc: &Association, net: &Network) -> Result<MetricsBundle> {
    let eval = evaluate(assoc, net)?;
    if let Some((j, queue, load)) = eval.saturation {
        return Err(Error::Saturated { bs_id: net.bs_id(j), queue, load });
    }
    let energy = EnergyState::compute(&eval.loads, net);
    let mut counts = vec![0usize; net.num_bs()];
    for j in assoc.choices() {
        counts[j] += 1;
    }
    let per_bs: Vec<PerBsMetrics> = (0..net.num_bs())
        .map(|j| {
            let rho = eval.loads.bs_load[j];
            let rho_tilde = eval.loads.backhaul_load[j];
            PerBsMetrics {
                bs_id: net.bs_id(j),
                kind: net.bs(j).kind,
                rho,
                rho_tilde,
                w: energy.latency_weight[j],
                mu: rho / (1.0 - rho),
                mu_tilde: rho_tilde / (1.0 - rho_tilde),
                power_w: energy.power[j],
                brown_w: energy.brown_power[j],
                point_count: counts[j],
            }
        })
        .collect();
    Ok(MetricsBundle {
        psi: eval.psi,
        latency_index: latency_index(&eval.loads),
        brown_power_total: per_bs.iter().map(|b| b.brown_w).sum(),
        per_bs,
    })
}

/// Serving station id of every traffic point, laid out on the traffic grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageMap {
    pub nx: usize,
    pub ny: usize,
    /// Row-major station ids.
    pub cells: Vec<u32>,
    pub stations: Vec<StationMarker>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationMarker {
    pub bs_id: u32,
    pub kind: BsKind,
    pub x: f64,
    pub y: f64,
}

impl CoverageMap {
    pub fn from_association(assoc: &Association, net: &Network) -> CoverageMap {
        let grid = &net.scenario().traffic_grid;
        CoverageMap {
            nx: grid.nx,
            ny: grid.ny,
            cells: assoc.choices().into_iter().map(|j| net.bs_id(j)).collect(),
            stations: net
                .scenario()
                .base_stations
                .iter()
                .map(|bs| StationMarker { bs_id: bs.id, kind: bs.kind, x: bs.position.x, y: bs.position.y })
                .collect(),
        }
    }

    pub fn count(&self, bs_id: u32) -> usize {
        self.cells.iter().filter(|&&c| c == bs_id).count()
    }
}

/// Everything written for one scheme run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub scheme: String,
    pub kappa: f64,
    pub status: RunStatus,
    pub iterations: usize,
    /// Absent when the final association saturates a queue.
    pub metrics: Option<MetricsBundle>,
    /// Best small cell bias, for DRB runs.
    pub best_bias: Option<f64>,
}

impl RunReport {
    pub fn new(scheme: &str, net: &Network, assoc: &Association, trace: &IterationTrace) -> RunReport {
        RunReport {
            schema_version: SCHEMA_VERSION,
            scheme: scheme.to_string(),
            kappa: net.kappa(),
            status: trace.status.clone(),
            iterations: trace.iterations(),
            metrics: compute_metrics(assoc, net).ok(),
            best_bias: None,
        }
    }
}

/// `x` rounded to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Text form used in CSV cells.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{}", round_sig(x))
    }
}

fn round_value(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"));
            if let Some(r) = serde_json::Number::from_f64(x) {
                *n = r;
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_value),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 12 significant digits.
pub fn to_rounded_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_value(&mut v);
    let mut text = serde_json::to_string_pretty(&v)?;
    text.push('\n');
    Ok(text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Csv,
}

/// Writes `report` as JSON, or its per-station table as CSV.
pub fn export(report: &RunReport, format: ExportFormat, path: &Path) -> Result<()> {
    match format {
        ExportFormat::Json => write_text(path, &to_rounded_json(report)?),
        ExportFormat::Csv => match &report.metrics {
            Some(m) => write_per_bs_csv(m, path),
            None => Err(Error::Config(format!(
                "run ended {} and has no metrics to tabulate",
                report.status.label()
            ))),
        },
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::io(path, std::io::Error::other(e))
}

fn write_rows(path: &Path, rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv_writer(path)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn kind_label(kind: BsKind) -> String {
    match kind {
        BsKind::Macro => "macro".into(),
        BsKind::Small => "small".into(),
    }
}

/// One row per station plus a `total` row.
pub fn write_per_bs_csv(metrics: &MetricsBundle, path: &Path) -> Result<()> {
    let header = [
        "bs_id", "kind", "rho", "rho_tilde", "w", "mu", "mu_tilde", "weighted_latency", "power_w", "brown_w",
        "point_count",
    ];
    let mut rows = vec![header.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
    for b in &metrics.per_bs {
        rows.push(vec![
            b.bs_id.to_string(),
            kind_label(b.kind),
            fmt_num(b.rho),
            fmt_num(b.rho_tilde),
            fmt_num(b.w),
            fmt_num(b.mu),
            fmt_num(b.mu_tilde),
            fmt_num(b.weighted_latency()),
            fmt_num(b.power_w),
            fmt_num(b.brown_w),
            b.point_count.to_string(),
        ]);
    }
    let sum = |f: fn(&PerBsMetrics) -> f64| metrics.per_bs.iter().map(f).sum::<f64>();
    rows.push(vec![
        "total".into(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        fmt_num(sum(|b| b.mu)),
        fmt_num(sum(|b| b.mu_tilde)),
        fmt_num(metrics.psi),
        fmt_num(sum(|b| b.power_w)),
        fmt_num(metrics.brown_power_total),
        metrics.per_bs.iter().map(|b| b.point_count).sum::<usize>().to_string(),
    ]);
    write_rows(path, rows)
}

/// One row per accepted round: `iter, psi, delta, max_eta_change,
/// descent_product, rho_<id>..., rho_tilde_<id>...`.
pub fn write_trace_csv(trace: &IterationTrace, bs_ids: &[u32], path: &Path) -> Result<()> {
    let mut header: Vec<String> = ["iter", "psi", "delta", "max_eta_change", "descent_product"].iter().map(|s| s.to_string()).collect();
    header.extend(bs_ids.iter().map(|id| format!("rho_{id}")));
    header.extend(bs_ids.iter().map(|id| format!("rho_tilde_{id}")));
    let mut rows = vec![header];
    for r in &trace.records {
        let mut row = vec![
            r.iter.to_string(),
            fmt_num(r.psi),
            fmt_num(r.delta),
            fmt_num(r.max_eta_change),
            r.descent_product.map(fmt_num).unwrap_or_default(),
        ];
        row.extend(r.bs_load.iter().map(|&x| fmt_num(x)));
        row.extend(r.backhaul_load.iter().map(|&x| fmt_num(x)));
        rows.push(row);
    }
    write_rows(path, rows)
}

/// `ny` rows of `nx` station ids.
pub fn write_coverage_csv(map: &CoverageMap, path: &Path) -> Result<()> {
    let rows = map.cells.chunks(map.nx.max(1)).map(|row| row.iter().map(u32::to_string).collect());
    write_rows(path, rows)
}

pub fn write_stations_csv(map: &CoverageMap, path: &Path) -> Result<()> {
    let header = vec!["bs_id".to_string(), "kind".into(), "x".into(), "y".into(), "point_count".into()];
    let rows = map.stations.iter().map(|s| {
        vec![s.bs_id.to_string(), kind_label(s.kind), fmt_num(s.x), fmt_num(s.y), map.count(s.bs_id).to_string()]
    });
    write_rows(path, std::iter::once(header).chain(rows))
}

/// Bias curve of a DRB sweep: `bias, psi, latency, brown_power_w`.
pub fn write_bias_curve_csv(curve: &[crate::baselines::BiasPoint], path: &Path) -> Result<()> {
    let header = ["bias", "psi", "latency", "brown_power_w"].iter().map(|s| s.to_string()).collect();
    let rows = curve
        .iter()
        .map(|p| vec![fmt_num(p.bias), fmt_num(p.psi), fmt_num(p.latency_index), fmt_num(p.brown_power_w)]);
    write_rows(path, std::iter::once(header).chain(rows))
}

/// One row of a parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub psi: f64,
    pub latency_index: f64,
    pub brown_power_w: f64,
    pub iterations: usize,
    pub status: String,
    /// Failure detail; the sweep continues past failed points.
    pub error: Option<String>,
}

pub fn write_sweep_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    let header = ["value", "psi", "latency_index", "brown_power_w", "iterations", "status", "error"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let body = rows.iter().map(|r| {
        vec![
            fmt_num(r.value),
            fmt_num(r.psi),
            fmt_num(r.latency_index),
            fmt_num(r.brown_power_w),
            r.iterations.to_string(),
            r.status.clone(),
            r.error.clone().unwrap_or_default(),
        ]
    });
    write_rows(path, std::iter::once(header).chain(body))
}

/// Human-readable one-line description of a status.
pub fn describe_status(status: &RunStatus) -> String {
    match status {
        RunStatus::Converged { iterations, stagnated: false } => format!("converged after {iterations} iterations"),
        RunStatus::Converged { iterations, stagnated: true } => {
            format!("converged after {iterations} iterations (no further descent)")
        }
        RunStatus::MaxIterations { iterations } => format!("stopped at the iteration limit ({iterations})"),
        RunStatus::Infeasible { bs_id, queue, load } => {
            let q = match queue {
                QueueKind::Radio => "radio",
                QueueKind::Backhaul => "backhaul",
            };
            format!("infeasible: BS {bs_id} {q} queue saturated (load {load:.4})")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{line_network, table_network, StationSpec};

    fn sample_network(kappa: f64) -> Network {
        let stations = [
            StationSpec::macro_cell(0.0, 100e6, 0.27).green(900.0),
            StationSpec::new(0.0, 5e6, 0.12).green(38.0),
        ];
        let rates = vec![vec![4e6, 12e6], vec![9e6, 3e6], vec![6e6, 6e6]];
        table_network(&stations, &rates, &[0.8e6, 1.1e6, 0.5e6], kappa)
    }

    #[test]
    fn zero_traffic_metrics() {
        let stations = [StationSpec::new(10e6, 5e6, 0.2).green(30.0), StationSpec::new(10e6, 5e6, 0.2).green(50.0)];
        let net = line_network(&stations, &[0.0, 0.0]);
        let m = compute_metrics(&Association::from_choices(2, &[0, 1]), &net).unwrap();
        assert_eq!(m.psi, 0.0);
        assert_eq!(m.latency_index, 0.0);
        assert_eq!(m.brown_power_total, 7.0);
    }

    #[test]
    fn kappa_zero_psi_equals_latency_index() {
        let net = sample_network(0.0);
        let m = compute_metrics(&Association::from_choices(2, &[1, 0, 0]), &net).unwrap();
        assert_eq!(m.psi, m.latency_index);
    }

    #[test]
    fn per_station_rows_recompose_totals() {
        let net = sample_network(4.0);
        let m = compute_metrics(&Association::from_choices(2, &[1, 0, 1]), &net).unwrap();
        assert!((m.recomposed_psi() - m.psi).abs() < 1e-9);
        let brown: f64 = m.per_bs.iter().map(|b| b.brown_w).sum();
        assert_eq!(brown, m.brown_power_total);
        assert_eq!(m.per_bs.iter().map(|b| b.point_count).sum::<usize>(), 3);
        let again = compute_metrics(&Association::from_choices(2, &[1, 0, 1]), &net).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn saturated_association_has_no_metrics() {
        let net = line_network(&[StationSpec::new(1e6, 5e6, 0.0)], &[2e6]);
        assert!(matches!(
            compute_metrics(&Association::from_choices(1, &[0]), &net),
            Err(Error::Saturated { bs_id: 1, .. })
        ));
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(round_sig(0.1234567890123456), 0.123456789012);
        assert_eq!(round_sig(123456.789012345), 123456.789012);
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        assert_eq!(fmt_num(0.146), "0.146");
    }

    #[test]
    fn per_bs_csv_has_total_row() {
        let net = sample_network(2.0);
        let m = compute_metrics(&Association::from_choices(2, &[1, 0, 0]), &net).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("per_bs.csv");
        write_per_bs_csv(&m, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 2 + 1);
        assert!(lines[3].starts_with("total,"));
    }

    #[test]
    fn coverage_csv_matches_grid() {
        let net = sample_network(0.0);
        let map = CoverageMap::from_association(&Association::from_choices(2, &[1, 0, 1]), &net);
        assert_eq!(map.cells, vec![2, 1, 2]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("coverage.csv");
        write_coverage_csv(&map, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
        assert_eq!(rows.len(), map.ny);
        assert!(rows.iter().all(|r| r.len() == map.nx));
    }
}
