use std::path::Path;

use log::{info, warn};
use nua_core::baselines::{default_bias_grid, BiasPoint};
use nua_core::nua::evaluate;
use nua_core::report::{
    self, describe_status, fmt_num, to_rounded_json, write_text, CoverageMap, RunReport, SweepRow,
};
use nua_core::{
    drb_associate, drb_sweep, nua_nc_run, Association, BiasConfig, BsKind, Error, IterationTrace, Network,
    Result, RunOptions, RunStatus,
};
use rayon::prelude::*;

use crate::config::{RunConfig, Scheme, SweepVar};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_MAX_ITERS: i32 = 3;

pub fn exit_code(status: &RunStatus) -> i32 {
    match status {
        RunStatus::Converged { .. } => EXIT_OK,
        RunStatus::Infeasible { .. } => EXIT_INFEASIBLE,
        RunStatus::MaxIterations { .. } => EXIT_MAX_ITERS,
    }
}

/// Errors that describe an unservable network rather than bad input.
pub fn error_exit_code(err: &Error) -> i32 {
    match err {
        Error::Saturated { .. } | Error::UncoveredPoint { .. } | Error::NoFeasibleBias => EXIT_INFEASIBLE,
        _ => EXIT_ERROR,
    }
}

/// Result of one scheme on one network.
pub struct SchemeRun {
    pub association: Association,
    pub trace: IterationTrace,
    pub best_bias: Option<f64>,
    pub curve: Option<Vec<BiasPoint>>,
}

impl SchemeRun {
    pub fn report(&self, scheme: Scheme, net: &Network) -> RunReport {
        let mut report = RunReport::new(scheme.name(), net, &self.association, &self.trace);
        report.best_bias = self.best_bias;
        report
    }
}

pub fn run_scheme(net: &Network, scheme: Scheme, opts: &RunOptions) -> Result<SchemeRun> {
    match scheme {
        Scheme::Nua => {
            let out = nua_core::run(net, opts)?;
            Ok(SchemeRun { association: out.association, trace: out.trace, best_bias: None, curve: None })
        }
        Scheme::NuaNc => {
            let out = nua_nc_run(net, opts)?;
            Ok(SchemeRun { association: out.association, trace: out.trace, best_bias: None, curve: None })
        }
        Scheme::Drb => run_drb(net, &default_bias_grid()),
    }
}

fn run_drb(net: &Network, grid: &[f64]) -> Result<SchemeRun> {
    match drb_sweep(net, grid) {
        Ok(sweep) => Ok(SchemeRun {
            association: drb_associate(net, &BiasConfig::new(sweep.best_bias)?)?,
            trace: IterationTrace {
                initial_psi: sweep.best_psi,
                records: Vec::new(),
                status: RunStatus::Converged { iterations: 0, stagnated: false },
            },
            best_bias: Some(sweep.best_bias),
            curve: Some(sweep.curve),
        }),
        Err(Error::NoFeasibleBias) => {
            // Report the saturated queue seen at the lowest bias.
            let association = drb_associate(net, &BiasConfig::new(grid[0])?)?;
            let eval = evaluate(&association, net)?;
            let (j, queue, load) = eval.saturation.ok_or(Error::NoFeasibleBias)?;
            Ok(SchemeRun {
                association,
                trace: IterationTrace {
                    initial_psi: eval.psi,
                    records: Vec::new(),
                    status: RunStatus::Infeasible { bs_id: net.bs_id(j), queue, load },
                },
                best_bias: None,
                curve: None,
            })
        }
        Err(e) => Err(e),
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.to_path_buf(), source: e })
}

/// Writes `results.json`, the CSV tables and, for DRB, the bias curve.
fn write_run(dir: &Path, scheme: Scheme, net: &Network, run: &SchemeRun) -> Result<RunReport> {
    create_dir(dir)?;
    let report = run.report(scheme, net);
    write_text(&dir.join("results.json"), &to_rounded_json(&report)?)?;
    if let Some(metrics) = &report.metrics {
        report::write_per_bs_csv(metrics, &dir.join("per_bs.csv"))?;
    }
    let ids: Vec<u32> = (0..net.num_bs()).map(|j| net.bs_id(j)).collect();
    report::write_trace_csv(&run.trace, &ids, &dir.join("trace.csv"))?;
    let map = CoverageMap::from_association(&run.association, net);
    report::write_coverage_csv(&map, &dir.join("coverage.csv"))?;
    report::write_stations_csv(&map, &dir.join("stations.csv"))?;
    if let Some(curve) = &run.curve {
        report::write_bias_curve_csv(curve, &dir.join("drb_curve.csv"))?;
    }
    Ok(report)
}

fn summarize(report: &RunReport) {
    println!("{}: {}", report.scheme, describe_status(&report.status));
    if let Some(bias) = report.best_bias {
        println!("  best small cell bias {}", fmt_num(bias));
    }
    match &report.metrics {
        Some(m) => println!(
            "  psi {}  latency index {}  brown power {} W",
            fmt_num(m.psi),
            fmt_num(m.latency_index),
            fmt_num(m.brown_power_total)
        ),
        None => println!("  no metrics: the final association saturates a queue"),
    }
}

pub fn cmd_generate(cfg: &RunConfig) -> Result<i32> {
    let scenario = cfg.source.scenario()?;
    let scenario = match cfg.kappa {
        Some(k) => scenario.with_kappa(k),
        None => scenario,
    };
    scenario.validate()?;
    create_dir(&cfg.out)?;
    let path = cfg.out.join("scenario.json");
    scenario.save(&path)?;
    println!(
        "wrote {} ({} base stations, {} traffic points)",
        path.display(),
        scenario.num_bs(),
        scenario.num_points()
    );
    Ok(EXIT_OK)
}

pub fn cmd_run(cfg: &RunConfig) -> Result<i32> {
    let net = cfg.network()?;
    info!("running {} on {} stations, {} points", cfg.scheme.name(), net.num_bs(), net.num_points());
    let run = run_scheme(&net, cfg.scheme, &cfg.opts)?;
    let report = write_run(&cfg.out, cfg.scheme, &net, &run)?;
    summarize(&report);
    Ok(exit_code(&report.status))
}

pub fn cmd_compare(cfg: &RunConfig) -> Result<i32> {
    let net = cfg.network()?;
    let runs = Scheme::ALL
        .par_iter()
        .map(|&s| run_scheme(&net, s, &cfg.opts).map(|r| (s, r)))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = vec![vec![
        "scheme".to_string(),
        "status".into(),
        "iterations".into(),
        "psi".into(),
        "latency_index".into(),
        "brown_power_w".into(),
        "best_bias".into(),
    ]];
    let mut code = EXIT_OK;
    for (scheme, run) in &runs {
        let report = write_run(&cfg.out.join(scheme.name()), *scheme, &net, run)?;
        summarize(&report);
        let (psi, lat, brown) = match &report.metrics {
            Some(m) => (fmt_num(m.psi), fmt_num(m.latency_index), fmt_num(m.brown_power_total)),
            None => ("inf".into(), "inf".into(), String::new()),
        };
        rows.push(vec![
            scheme.name().to_string(),
            report.status.label().to_string(),
            report.iterations.to_string(),
            psi,
            lat,
            brown,
            report.best_bias.map(fmt_num).unwrap_or_default(),
        ]);
        if code == EXIT_OK {
            code = exit_code(&report.status);
        }
    }
    write_text(&cfg.out.join("compare.csv"), &csv_text(&rows))?;
    Ok(code)
}

fn csv_text(rows: &[Vec<String>]) -> String {
    rows.iter().map(|r| r.join(",") + "\n").collect()
}

/// Network for one sweep value; every other input stays fixed.
fn swept_network(base: &Network, var: SweepVar, value: f64) -> Result<Network> {
    match var {
        SweepVar::Kappa => base.with_kappa(value),
        SweepVar::BackhaulRate => base.with_backhaul_rate(BsKind::Small, value),
        SweepVar::SolarEfficiency => base.with_solar_efficiency(value),
        SweepVar::DrbBias => Ok(base.clone()),
    }
}

fn sweep_point(base: &Network, cfg: &RunConfig, var: SweepVar, value: f64) -> (SweepRow, i32) {
    let attempt = || -> Result<(SweepRow, i32)> {
        let net = swept_network(base, var, value)?;
        let run = match var {
            SweepVar::DrbBias => run_drb(&net, &[value])?,
            _ => run_scheme(&net, cfg.scheme, &cfg.opts)?,
        };
        let report = run.report(if var == SweepVar::DrbBias { Scheme::Drb } else { cfg.scheme }, &net);
        let (psi, lat, brown) = match &report.metrics {
            Some(m) => (m.psi, m.latency_index, m.brown_power_total),
            None => (f64::INFINITY, f64::INFINITY, f64::NAN),
        };
        let row = SweepRow {
            value,
            psi,
            latency_index: lat,
            brown_power_w: brown,
            iterations: report.iterations,
            status: report.status.label().to_string(),
            error: None,
        };
        Ok((row, exit_code(&report.status)))
    };
    attempt().unwrap_or_else(|e| {
        warn!("{} = {value}: {e}", var.name());
        let row = SweepRow {
            value,
            psi: f64::NAN,
            latency_index: f64::NAN,
            brown_power_w: f64::NAN,
            iterations: 0,
            status: "error".into(),
            error: Some(e.to_string()),
        };
        (row, error_exit_code(&e))
    })
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<i32> {
    let spec = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("sweep needs --sweep <var>:<start>:<stop>:<n>".into()))?;
    if spec.var == SweepVar::DrbBias && spec.values.iter().any(|&b| !(b > 0.0)) {
        return Err(Error::Config("drb_bias values must be positive".into()));
    }
    let base = cfg.network()?;
    info!("sweeping {spec}");
    // Indexed collect keeps grid order whatever order points finish in.
    let results: Vec<(SweepRow, i32)> =
        spec.values.par_iter().map(|&v| sweep_point(&base, cfg, spec.var, v)).collect();
    create_dir(&cfg.out)?;
    let rows: Vec<SweepRow> = results.iter().map(|(r, _)| r.clone()).collect();
    let path = cfg.out.join("sweep.csv");
    report::write_sweep_csv(&rows, &path)?;
    for r in &rows {
        println!(
            "{} = {}: {} psi {} latency {} brown {} W ({} iterations)",
            spec.var.name(),
            fmt_num(r.value),
            r.status,
            fmt_num(r.psi),
            fmt_num(r.latency_index),
            fmt_num(r.brown_power_w),
            r.iterations
        );
    }
    println!("wrote {}", path.display());
    Ok(results.iter().map(|(_, c)| *c).find(|&c| c != EXIT_OK).unwrap_or(EXIT_OK))
}
