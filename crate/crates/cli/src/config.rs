//! Flags, the optional JSON config file, and their merge into one
//! [`RunConfig`]. Values in the config file win over flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use nua_core::nua::StepRule;
use nua_core::{Error, GenerationParams, Network, Result, RunOptions, Scenario};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Scheme {
    Nua,
    NuaNc,
    Drb,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Nua, Scheme::NuaNc, Scheme::Drb];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Nua => "nua",
            Scheme::NuaNc => "nua_nc",
            Scheme::Drb => "drb",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVar {
    Kappa,
    BackhaulRate,
    SolarEfficiency,
    DrbBias,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::Kappa => "kappa",
            SweepVar::BackhaulRate => "backhaul_rate",
            SweepVar::SolarEfficiency => "solar_efficiency",
            SweepVar::DrbBias => "drb_bias",
        }
    }
}

/// `<var>:<start>:<stop>:<n>`, `n` evenly spaced values including both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub var: SweepVar,
    pub values: Vec<f64>,
}

impl FromStr for SweepSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [var, start, stop, n] = parts.as_slice() else {
            return Err(format!("expected <var>:<start>:<stop>:<n>, got {s:?}"));
        };
        let var = match *var {
            "kappa" => SweepVar::Kappa,
            "backhaul_rate" => SweepVar::BackhaulRate,
            "solar_efficiency" => SweepVar::SolarEfficiency,
            "drb_bias" => SweepVar::DrbBias,
            other => {
                return Err(format!(
                    "unknown sweep variable {other:?} (kappa, backhaul_rate, solar_efficiency, drb_bias)"
                ))
            }
        };
        let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        let (start, stop) = (num(start)?, num(stop)?);
        let n: usize = n.parse().map_err(|e| format!("{n:?}: {e}"))?;
        if n == 0 {
            return Err("sweep needs at least one value".into());
        }
        if !(start.is_finite() && stop.is_finite()) {
            return Err("sweep bounds must be finite".into());
        }
        let values = if n == 1 {
            vec![start]
        } else {
            (0..n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect()
        };
        Ok(SweepSpec { var, values })
    }
}

impl<'de> Deserialize<'de> for SweepSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {} values", self.var.name(), self.values.len())
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Scenario JSON file (from `nua generate`). Mutually exclusive with --seed/--grid.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Seed for generating the reference deployment [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid points per side of the generated deployment [default: 50]
    #[arg(long)]
    pub grid: Option<usize>,
    /// Association scheme [default: nua]
    #[arg(long, value_enum)]
    pub scheme: Option<Scheme>,
    /// Energy-latency coefficient, overrides the scenario's value
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Sweep as <var>:<start>:<stop>:<n>; var is kappa, backhaul_rate (small cells, bit/s),
    /// solar_efficiency or drb_bias
    #[arg(long)]
    pub sweep: Option<SweepSpec>,
    /// Output directory [default: nua-out]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Iteration limit [default: 500]
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Relative objective change that ends the iteration [default: 1e-6]
    #[arg(long)]
    pub tol: Option<f64>,
    /// JSON file with any of the above (snake_case keys) plus `step_rule` and
    /// `generation`; its values override flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    scenario: Option<PathBuf>,
    seed: Option<u64>,
    grid: Option<usize>,
    generation: Option<GenerationParams>,
    scheme: Option<Scheme>,
    kappa: Option<f64>,
    sweep: Option<SweepSpec>,
    out: Option<PathBuf>,
    max_iters: Option<usize>,
    tol: Option<f64>,
    step_rule: Option<StepRule>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    File(PathBuf),
    Generated { seed: u64, params: GenerationParams },
}

impl Source {
    pub fn scenario(&self) -> Result<Scenario> {
        match self {
            Source::File(path) => Scenario::load(path),
            Source::Generated { seed, params } => nua_core::generate_scenario(*seed, params),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: Source,
    pub scheme: Scheme,
    pub kappa: Option<f64>,
    pub sweep: Option<SweepSpec>,
    pub out: PathBuf,
    pub opts: RunOptions,
}

impl RunConfig {
    pub fn resolve(flags: &Flags) -> Result<RunConfig> {
        let file = match &flags.config {
            Some(path) => read_config(path)?,
            None => ConfigFile::default(),
        };

        let flag_source = source_from(flags.scenario.clone(), flags.seed, flags.grid, None, "flags")?;
        let file_source =
            source_from(file.scenario.clone(), file.seed, file.grid, file.generation.clone(), "config file")?;
        let source = match (file_source, flag_source) {
            (Some(s), _) | (None, Some(s)) => s,
            (None, None) => Source::Generated { seed: 0, params: GenerationParams::default() },
        };

        let mut opts = RunOptions::default();
        if let Some(n) = file.max_iters.or(flags.max_iters) {
            opts.max_iters = n;
        }
        if let Some(t) = file.tol.or(flags.tol) {
            opts.tol = t;
        }
        if let Some(rule) = file.step_rule {
            opts.step_rule = rule;
        }
        if opts.max_iters == 0 {
            return Err(Error::Config("max-iters must be at least 1".into()));
        }
        if !(opts.tol > 0.0 && opts.tol.is_finite()) {
            return Err(Error::Config(format!("tol must be positive, got {}", opts.tol)));
        }
        let kappa = file.kappa.or(flags.kappa);
        if let Some(k) = kappa {
            if !(k >= 0.0 && k.is_finite()) {
                return Err(Error::Config(format!("kappa must be finite and non-negative, got {k}")));
            }
        }

        Ok(RunConfig {
            source,
            scheme: file.scheme.or(flags.scheme).unwrap_or(Scheme::Nua),
            kappa,
            sweep: file.sweep.or_else(|| flags.sweep.clone()),
            out: file.out.or_else(|| flags.out.clone()).unwrap_or_else(|| PathBuf::from("nua-out")),
            opts,
        })
    }

    /// The network every command works on, with the kappa override applied.
    pub fn network(&self) -> Result<Network> {
        let scenario = self.source.scenario()?;
        let net = Network::new(scenario)?;
        match self.kappa {
            Some(k) => net.with_kappa(k),
            None => Ok(net),
        }
    }
}

fn read_config(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn source_from(
    scenario: Option<PathBuf>,
    seed: Option<u64>,
    grid: Option<usize>,
    generation: Option<GenerationParams>,
    origin: &str,
) -> Result<Option<Source>> {
    let generated = seed.is_some() || grid.is_some() || generation.is_some();
    match (scenario, generated) {
        (Some(_), true) => Err(Error::Config(format!(
            "{origin}: give either a scenario file or generation settings (seed, grid), not both"
        ))),
        (Some(path), false) => Ok(Some(Source::File(path))),
        (None, true) => {
            let mut params = generation.unwrap_or_default();
            if let Some(g) = grid {
                params.grid = g;
            }
            Ok(Some(Source::Generated { seed: seed.unwrap_or(0), params }))
        }
        (None, false) => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_spec_parsing() {
        let s: SweepSpec = "kappa:0:7:8".parse().unwrap();
        assert_eq!(s.var, SweepVar::Kappa);
        assert_eq!(s.values, vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
        let one: SweepSpec = "drb_bias:2.74:9:1".parse().unwrap();
        assert_eq!(one.values, vec![2.74]);
        assert!("kappa:0:7:0".parse::<SweepSpec>().is_err());
        assert!("speed:0:7:3".parse::<SweepSpec>().is_err());
        assert!("kappa:0:7".parse::<SweepSpec>().is_err());
    }

    #[test]
    fn config_file_overrides_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"kappa": 4.0, "seed": 9, "step_rule": "backtracking", "generation": {"grid": 7}}"#)
            .unwrap();
        let flags = Flags { kappa: Some(2.0), seed: Some(1), tol: Some(1e-8), config: Some(path), ..Default::default() };
        let cfg = RunConfig::resolve(&flags).unwrap();
        assert_eq!(cfg.kappa, Some(4.0));
        assert_eq!(cfg.opts.tol, 1e-8);
        assert_eq!(cfg.opts.step_rule, StepRule::Backtracking);
        match cfg.source {
            Source::Generated { seed, params } => {
                assert_eq!(seed, 9);
                assert_eq!(params.grid, 7);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scenario_and_seed_conflict() {
        let flags = Flags { scenario: Some("s.json".into()), seed: Some(3), ..Default::default() };
        assert!(matches!(RunConfig::resolve(&flags), Err(Error::Config(_))));
    }

    #[test]
    fn config_scenario_replaces_flag_generation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"scenario": "elsewhere.json"}"#).unwrap();
        let flags = Flags { seed: Some(3), config: Some(path), ..Default::default() };
        assert_eq!(RunConfig::resolve(&flags).unwrap().source, Source::File("elsewhere.json".into()));
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, r#"{"kapa": 1}"#).unwrap();
        let flags = Flags { config: Some(path), ..Default::default() };
        assert!(RunConfig::resolve(&flags).is_err());
    }
}
