//! Network geometry, radio propagation and the discretized traffic field.
//!
//! A [`Scenario`] is plain data: it serializes to the JSON scenario file and
//! carries everything needed to evaluate an association. Propagation follows
//! the two-tier model used throughout the crate:
//!
//! * macro cells: `128.1 + 37.6 log10(d)` with `d` in kilometres,
//! * small cells: `38 + 10 log10(d)` with `d` in metres.
//!
//! Shadowing and fading are applied as fixed dB margins so that rates are
//! stationary over one balancing procedure.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Irradiance under standard test conditions, W/m².
pub const STANDARD_IRRADIANCE: f64 = 1000.0;

/// Shortest link distance used for propagation; closer points are treated as
/// being this far away.
pub const MIN_LINK_DISTANCE_M: f64 = 1.0;

/// Average cache hit ratios for three macro cells followed by seven small cells.
pub const REFERENCE_HIT_RATIOS: [f64; 10] =
    [0.27, 0.12, 0.28, 0.12, 0.17, 0.22, 0.22, 0.24, 0.24, 0.19];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BsKind {
    Macro,
    Small,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Location {
    pub x: f64,
    pub y: f64,
}

impl Location {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Location) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Rectangle `[0, width] x [0, height]` in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Area {
    pub width: f64,
    pub height: f64,
}

impl Area {
    pub fn contains(&self, loc: &Location) -> bool {
        (0.0..=self.width).contains(&loc.x) && (0.0..=self.height).contains(&loc.y)
    }

    pub fn size(&self) -> f64 {
        self.width * self.height
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseStation {
    pub id: u32,
    pub kind: BsKind,
    pub position: Location,
    pub tx_power_dbm: f64,
    pub antenna_gain_db: f64,
    /// Power drawn at zero load, W.
    pub static_power_w: f64,
    /// Extra power per unit of traffic load, W.
    pub load_power_coeff: f64,
    /// Green power available for one balancing procedure, W.
    pub green_supply_w: f64,
    /// Solar panel area, m². Used to recompute `green_supply_w` for a given
    /// panel efficiency.
    pub panel_area_m2: f64,
    pub backhaul_rate_bps: f64,
    pub cache_hit_ratio: f64,
}

impl BaseStation {
    /// Green power produced by this station's panel at the given efficiency.
    pub fn solar_output(&self, efficiency: f64) -> f64 {
        efficiency * STANDARD_IRRADIANCE * self.panel_area_m2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficPoint {
    pub location: Location,
    /// User-side arrival rate density, arrivals/s per m².
    pub arrival_rate: f64,
    /// Mean size per arrival, bits.
    pub mean_size: f64,
    /// Quadrature weight of this point, m².
    pub cell_area: f64,
}

impl TrafficPoint {
    /// Offered traffic of the cell this point stands for, bits/s.
    pub fn demand(&self) -> f64 {
        self.arrival_rate * self.mean_size * self.cell_area
    }
}

/// Traffic field sampled on an `nx` by `ny` grid, stored row-major
/// (`index = row * nx + col`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficGrid {
    pub nx: usize,
    pub ny: usize,
    pub points: Vec<TrafficPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadioParams {
    pub bandwidth_hz: f64,
    /// Total noise power over the band, dBm.
    pub noise_power_dbm: f64,
    pub receiver_sensitivity_dbm: f64,
    pub shadowing_margin_db: f64,
    pub fading_margin_db: f64,
}

impl Default for RadioParams {
    fn default() -> Self {
        let bandwidth_hz = 10e6;
        Self {
            bandwidth_hz,
            // -174 dBm/Hz thermal noise density integrated over the band.
            noise_power_dbm: -174.0 + 10.0 * bandwidth_hz.log10(),
            receiver_sensitivity_dbm: -123.0,
            shadowing_margin_db: 5.0,
            fading_margin_db: 9.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmParams {
    /// Energy-latency tradeoff coefficient, shared by all stations.
    pub kappa: f64,
    /// Load margin: feasible loads satisfy `load <= 1 - epsilon`.
    pub epsilon: f64,
    pub rng_seed: u64,
}

impl Default for AlgorithmParams {
    fn default() -> Self {
        Self { kappa: 0.0, epsilon: 1e-3, rng_seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub area: Area,
    pub radio: RadioParams,
    pub algorithm: AlgorithmParams,
    pub base_stations: Vec<BaseStation>,
    pub traffic_grid: TrafficGrid,
}

/// Path loss in dB between a station of `kind` and a user `distance_m` away.
pub fn path_loss(kind: BsKind, distance_m: f64) -> Result<f64> {
    if !(distance_m > 0.0) || !distance_m.is_finite() {
        return Err(Error::Domain(format!("path loss distance must be positive, got {distance_m}")));
    }
    Ok(match kind {
        BsKind::Macro => 128.1 + 37.6 * (distance_m / 1000.0).log10(),
        BsKind::Small => 38.0 + 10.0 * distance_m.log10(),
    })
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

impl Scenario {
    pub fn points(&self) -> &[TrafficPoint] {
        &self.traffic_grid.points
    }

    pub fn num_points(&self) -> usize {
        self.traffic_grid.points.len()
    }

    pub fn num_bs(&self) -> usize {
        self.base_stations.len()
    }

    pub fn kappa(&self) -> f64 {
        self.algorithm.kappa
    }

    pub fn epsilon(&self) -> f64 {
        self.algorithm.epsilon
    }

    /// Position of the station with the given id.
    pub fn index_of(&self, id: u32) -> Option<usize> {
        self.base_stations.iter().position(|bs| bs.id == id)
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |msg: String| Err(Error::Config(msg));
        if !(self.area.width > 0.0 && self.area.height > 0.0) {
            return cfg(format!("area must be non-empty, got {}x{}", self.area.width, self.area.height));
        }
        if self.base_stations.is_empty() {
            return cfg("scenario has no base stations".into());
        }
        if self.traffic_grid.points.is_empty() {
            return cfg("scenario has no traffic points".into());
        }
        if self.traffic_grid.nx * self.traffic_grid.ny != self.traffic_grid.points.len() {
            return cfg(format!(
                "traffic grid is {}x{} but holds {} points",
                self.traffic_grid.nx,
                self.traffic_grid.ny,
                self.traffic_grid.points.len()
            ));
        }
        let alg = &self.algorithm;
        if !(alg.kappa >= 0.0 && alg.kappa.is_finite()) {
            return cfg(format!("kappa must be finite and non-negative, got {}", alg.kappa));
        }
        if !(alg.epsilon > 0.0 && alg.epsilon < 0.5) {
            return cfg(format!("epsilon must lie in (0, 0.5), got {}", alg.epsilon));
        }
        if !(self.radio.bandwidth_hz > 0.0) {
            return cfg("bandwidth must be positive".into());
        }
        for (i, bs) in self.base_stations.iter().enumerate() {
            if self.base_stations[..i].iter().any(|other| other.id == bs.id) {
                return cfg(format!("duplicate base station id {}", bs.id));
            }
            if !(0.0..=1.0).contains(&bs.cache_hit_ratio) {
                return cfg(format!("BS {}: cache hit ratio {} outside [0, 1]", bs.id, bs.cache_hit_ratio));
            }
            if !(bs.static_power_w > 0.0 && bs.load_power_coeff > 0.0 && bs.backhaul_rate_bps > 0.0) {
                return cfg(format!(
                    "BS {}: static power, load-power coefficient and backhaul rate must be positive",
                    bs.id
                ));
            }
            if !(bs.green_supply_w >= 0.0 && bs.panel_area_m2 >= 0.0) {
                return cfg(format!("BS {}: green supply and panel area must be non-negative", bs.id));
            }
            if !self.area.contains(&bs.position) {
                return cfg(format!("BS {} lies outside the area", bs.id));
            }
        }
        for (i, p) in self.traffic_grid.points.iter().enumerate() {
            if !self.area.contains(&p.location) {
                return cfg(format!("traffic point {i} lies outside the area"));
            }
            if !(p.arrival_rate >= 0.0 && p.mean_size > 0.0 && p.cell_area > 0.0) {
                return cfg(format!(
                    "traffic point {i}: need arrival_rate >= 0, mean_size > 0, cell_area > 0"
                ));
            }
        }
        Ok(())
    }

    /// Received power in dBm at `loc` from station `bs` (index).
    pub fn received_power_dbm(&self, loc: &Location, bs: usize) -> f64 {
        let station = &self.base_stations[bs];
        let d = loc.distance(&station.position).max(MIN_LINK_DISTANCE_M);
        let pl = path_loss(station.kind, d).expect("distance clamped positive");
        station.tx_power_dbm + station.antenna_gain_db
            - self.radio.shadowing_margin_db
            - self.radio.fading_margin_db
            - pl
    }

    /// Downlink SINR (linear) at `loc` when served by station `bs` with
    /// every other station interfering at full power.
    pub fn sinr(&self, loc: &Location, bs: usize) -> f64 {
        let received: Vec<f64> = (0..self.num_bs())
            .map(|j| dbm_to_watts(self.received_power_dbm(loc, j)))
            .collect();
        let interference: f64 =
            received.iter().enumerate().filter(|&(k, _)| k != bs).map(|(_, p)| p).sum();
        received[bs] / (dbm_to_watts(self.radio.noise_power_dbm) + interference)
    }

    /// Achievable rate in bits/s, zero when the signal is below the
    /// receiver sensitivity.
    pub fn rate(&self, loc: &Location, bs: usize) -> f64 {
        if self.received_power_dbm(loc, bs) < self.radio.receiver_sensitivity_dbm {
            return 0.0;
        }
        shannon_rate(self.radio.bandwidth_hz, self.sinr(loc, bs))
    }

    /// Copy with every station's green supply recomputed for a panel
    /// efficiency.
    pub fn with_solar_efficiency(&self, efficiency: f64) -> Scenario {
        let mut out = self.clone();
        for bs in &mut out.base_stations {
            bs.green_supply_w = bs.solar_output(efficiency);
        }
        out
    }

    pub fn with_kappa(&self, kappa: f64) -> Scenario {
        let mut out = self.clone();
        out.algorithm.kappa = kappa;
        out
    }

    /// Copy with the backhaul rate of every station of `kind` replaced.
    pub fn with_backhaul_rate(&self, kind: BsKind, rate_bps: f64) -> Scenario {
        let mut out = self.clone();
        for bs in out.base_stations.iter_mut().filter(|bs| bs.kind == kind) {
            bs.backhaul_rate_bps = rate_bps;
        }
        out
    }

    /// Copy in which no station has a cache.
    pub fn without_caches(&self) -> Scenario {
        let mut out = self.clone();
        for bs in &mut out.base_stations {
            bs.cache_hit_ratio = 0.0;
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Scenario> {
        let scenario: Scenario = serde_json::from_str(text)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Scenario> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Scenario::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut text = self.to_json()?;
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

pub fn shannon_rate(bandwidth_hz: f64, sinr: f64) -> f64 {
    bandwidth_hz * (1.0 + sinr.max(0.0)).log2()
}

/// Knobs for [`generate_scenario`]. Defaults reproduce the reference
/// deployment: 3 macro and 7 small cells in a 2 km square.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerationParams {
    pub n_macro: usize,
    pub n_small: usize,
    pub width: f64,
    pub height: f64,
    /// Grid points per side.
    pub grid: usize,
    /// Uniform range of the arrival rate density, arrivals/s per m².
    pub arrival_rate_range: (f64, f64),
    pub mean_size_bits: f64,
    pub macro_tx_power_dbm: f64,
    pub small_tx_power_dbm: f64,
    pub antenna_gain_db: f64,
    pub macro_static_power_w: f64,
    pub small_static_power_w: f64,
    pub macro_load_power_coeff: f64,
    pub small_load_power_coeff: f64,
    pub macro_backhaul_bps: f64,
    pub small_backhaul_bps: f64,
    pub solar_efficiency: f64,
    /// Target range of macro green generation at the reference efficiency, W.
    pub macro_green_range_w: (f64, f64),
    pub small_green_range_w: (f64, f64),
    pub kappa: f64,
    pub epsilon: f64,
    pub radio: RadioParams,
}

impl Default for GenerationParams {
    fn default() -> Self {
        Self {
            n_macro: 3,
            n_small: 7,
            width: 2000.0,
            height: 2000.0,
            grid: 50,
            arrival_rate_range: (0.75e-6, 3e-6),
            mean_size_bits: 1e6,
            macro_tx_power_dbm: 43.0,
            small_tx_power_dbm: 33.0,
            antenna_gain_db: 15.0,
            macro_static_power_w: 750.0,
            small_static_power_w: 37.0,
            macro_load_power_coeff: 500.0,
            small_load_power_coeff: 4.0,
            macro_backhaul_bps: 100e6,
            small_backhaul_bps: 5e6,
            solar_efficiency: 0.174,
            macro_green_range_w: (750.0, 1300.0),
            small_green_range_w: (37.0, 48.0),
            kappa: 0.0,
            epsilon: 1e-3,
            radio: RadioParams::default(),
        }
    }
}

/// Cache hit ratio for the `i`-th station of a tier, cycling through the
/// reference table when a tier is larger than the reference deployment.
fn reference_hit_ratio(kind: BsKind, i: usize) -> f64 {
    match kind {
        BsKind::Macro => REFERENCE_HIT_RATIOS[i % 3],
        BsKind::Small => REFERENCE_HIT_RATIOS[3 + i % 7],
    }
}

/// Builds a random deployment. Output is a pure function of `(seed, params)`.
pub fn generate_scenario(seed: u64, params: &GenerationParams) -> Result<Scenario> {
    if params.n_macro + params.n_small == 0 {
        return Err(Error::Config("need at least one base station".into()));
    }
    if !(params.width > 0.0 && params.height > 0.0) || params.grid == 0 {
        return Err(Error::Config("area and grid must be non-empty".into()));
    }
    let (lo, hi) = params.arrival_rate_range;
    if !(lo >= 0.0 && hi >= lo) {
        return Err(Error::Config(format!("bad arrival rate range ({lo}, {hi})")));
    }
    if !(params.solar_efficiency > 0.0) {
        return Err(Error::Config("solar efficiency must be positive".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let area = Area { width: params.width, height: params.height };
    let watts_per_m2 = params.solar_efficiency * STANDARD_IRRADIANCE;

    let mut base_stations = Vec::with_capacity(params.n_macro + params.n_small);
    let tiers = [(BsKind::Macro, params.n_macro), (BsKind::Small, params.n_small)];
    for (kind, count) in tiers {
        for i in 0..count {
            let position =
                Location::new(rng.gen_range(0.0..=area.width), rng.gen_range(0.0..=area.height));
            let (green_lo, green_hi) = match kind {
                BsKind::Macro => params.macro_green_range_w,
                BsKind::Small => params.small_green_range_w,
            };
            let panel_area_m2 = rng.gen_range(green_lo..=green_hi) / watts_per_m2;
            let (tx, ps, beta, backhaul) = match kind {
                BsKind::Macro => (
                    params.macro_tx_power_dbm,
                    params.macro_static_power_w,
                    params.macro_load_power_coeff,
                    params.macro_backhaul_bps,
                ),
                BsKind::Small => (
                    params.small_tx_power_dbm,
                    params.small_static_power_w,
                    params.small_load_power_coeff,
                    params.small_backhaul_bps,
                ),
            };
            base_stations.push(BaseStation {
                id: base_stations.len() as u32 + 1,
                kind,
                position,
                tx_power_dbm: tx,
                antenna_gain_db: params.antenna_gain_db,
                static_power_w: ps,
                load_power_coeff: beta,
                green_supply_w: watts_per_m2 * panel_area_m2,
                panel_area_m2,
                backhaul_rate_bps: backhaul,
                cache_hit_ratio: reference_hit_ratio(kind, i),
            });
        }
    }

    let n = params.grid;
    let dx = area.width / n as f64;
    let dy = area.height / n as f64;
    let mut points = Vec::with_capacity(n * n);
    for row in 0..n {
        for col in 0..n {
            points.push(TrafficPoint {
                location: Location::new((col as f64 + 0.5) * dx, (row as f64 + 0.5) * dy),
                arrival_rate: if hi > lo { rng.gen_range(lo..hi) } else { lo },
                mean_size: params.mean_size_bits,
                cell_area: dx * dy,
            });
        }
    }

    let scenario = Scenario {
        area,
        radio: params.radio.clone(),
        algorithm: AlgorithmParams { kappa: params.kappa, epsilon: params.epsilon, rng_seed: seed },
        base_stations,
        traffic_grid: TrafficGrid { nx: n, ny: n, points },
    };
    scenario.validate()?;
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_bs(kind: BsKind) -> Scenario {
        Scenario {
            area: Area { width: 100.0, height: 100.0 },
            radio: RadioParams::default(),
            algorithm: AlgorithmParams::default(),
            base_stations: vec![BaseStation {
                id: 1,
                kind,
                position: Location::new(0.0, 0.0),
                tx_power_dbm: 33.0,
                antenna_gain_db: 15.0,
                static_power_w: 37.0,
                load_power_coeff: 4.0,
                green_supply_w: 40.0,
                panel_area_m2: 0.2,
                backhaul_rate_bps: 5e6,
                cache_hit_ratio: 0.2,
            }],
            traffic_grid: TrafficGrid {
                nx: 1,
                ny: 1,
                points: vec![TrafficPoint {
                    location: Location::new(50.0, 50.0),
                    arrival_rate: 1.0,
                    mean_size: 1.0,
                    cell_area: 1.0,
                }],
            },
        }
    }

    #[test]
    fn path_loss_reference_values() {
        assert!((path_loss(BsKind::Macro, 1000.0).unwrap() - 128.1).abs() < 1e-12);
        assert!((path_loss(BsKind::Small, 1.0).unwrap() - 38.0).abs() < 1e-12);
        assert!((path_loss(BsKind::Macro, 10_000.0).unwrap() - 165.7).abs() < 1e-9);
    }

    #[test]
    fn path_loss_rejects_non_positive_distance() {
        assert!(matches!(path_loss(BsKind::Small, 0.0), Err(Error::Domain(_))));
        assert!(matches!(path_loss(BsKind::Macro, -3.0), Err(Error::Domain(_))));
        assert!(path_loss(BsKind::Macro, f64::NAN).is_err());
    }

    #[test]
    fn single_station_sinr_is_snr() {
        let s = single_bs(BsKind::Small);
        let loc = Location::new(30.0, 40.0);
        let rx = dbm_to_watts(s.received_power_dbm(&loc, 0));
        let expected = rx / dbm_to_watts(s.radio.noise_power_dbm);
        assert!((s.sinr(&loc, 0) / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn colocated_twins_without_noise_see_unit_sinr() {
        let mut s = single_bs(BsKind::Small);
        let mut twin = s.base_stations[0].clone();
        twin.id = 2;
        s.base_stations.push(twin);
        s.radio.noise_power_dbm = -400.0;
        let sinr = s.sinr(&Location::new(70.0, 10.0), 1);
        assert!((sinr - 1.0).abs() < 1e-12, "{sinr}");
    }

    #[test]
    fn shannon_rate_examples() {
        assert!((shannon_rate(10e6, 1.0) - 10e6).abs() < 1e-6);
        assert_eq!(shannon_rate(10e6, 0.0), 0.0);
        assert!((shannon_rate(10e6, 3.0) - 20e6).abs() < 1e-6);
    }

    #[test]
    fn rate_is_zero_below_sensitivity() {
        let mut s = single_bs(BsKind::Macro);
        s.area = Area { width: 1e6, height: 1e6 };
        // ~200 dB path loss at 800 km puts the signal far below -123 dBm.
        let far = Location::new(8e5, 0.0);
        assert!(s.received_power_dbm(&far, 0) < s.radio.receiver_sensitivity_dbm);
        assert_eq!(s.rate(&far, 0), 0.0);
        assert!(s.rate(&Location::new(100.0, 0.0), 0) > 0.0);
    }

    #[test]
    fn generation_is_deterministic_and_uses_reference_hit_ratios() {
        let params = GenerationParams { grid: 10, ..Default::default() };
        let a = generate_scenario(7, &params).unwrap();
        let b = generate_scenario(7, &params).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        let ratios: Vec<f64> = a.base_stations.iter().map(|bs| bs.cache_hit_ratio).collect();
        assert_eq!(ratios, REFERENCE_HIT_RATIOS.to_vec());
        let ids: Vec<u32> = a.base_stations.iter().map(|bs| bs.id).collect();
        assert_eq!(ids, (1..=10).collect::<Vec<_>>());
        assert_ne!(a, generate_scenario(8, &params).unwrap());
    }

    #[test]
    fn generated_grid_dimensions() {
        let params = GenerationParams { grid: 40, ..Default::default() };
        let s = generate_scenario(1, &params).unwrap();
        assert_eq!(s.num_points(), 1600);
        assert!(s.points().iter().all(|p| p.cell_area == 50.0 * 50.0));
    }

    #[test]
    fn generated_green_supply_within_reference_ranges() {
        let s = generate_scenario(3, &GenerationParams { grid: 4, ..Default::default() }).unwrap();
        for bs in &s.base_stations {
            let (lo, hi) = match bs.kind {
                BsKind::Macro => (750.0, 1300.0),
                BsKind::Small => (37.0, 48.0),
            };
            assert!(bs.green_supply_w >= lo - 1e-9 && bs.green_supply_w <= hi + 1e-9);
            assert!((bs.solar_output(0.174) - bs.green_supply_w).abs() < 1e-9);
        }
    }

    #[test]
    fn generation_rejects_empty_configs() {
        let none = GenerationParams { n_macro: 0, n_small: 0, ..Default::default() };
        assert!(matches!(generate_scenario(0, &none), Err(Error::Config(_))));
        let flat = GenerationParams { width: 0.0, ..Default::default() };
        assert!(matches!(generate_scenario(0, &flat), Err(Error::Config(_))));
    }

    #[test]
    fn validation_catches_bad_fields() {
        let mut s = single_bs(BsKind::Small);
        s.base_stations[0].cache_hit_ratio = 1.5;
        assert!(s.validate().is_err());
        let mut s = single_bs(BsKind::Small);
        s.algorithm.kappa = -1.0;
        assert!(s.validate().is_err());
        let mut s = single_bs(BsKind::Small);
        s.base_stations.push(s.base_stations[0].clone());
        assert!(s.validate().is_err());
        let mut s = single_bs(BsKind::Small);
        s.traffic_grid.nx = 2;
        assert!(s.validate().is_err());
        assert!(single_bs(BsKind::Small).validate().is_ok());
    }
}
