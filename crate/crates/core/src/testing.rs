//! Builders for small hand-made networks with prescribed rates. Used by the
//! unit and integration tests; not part of the modelling API.

use crate::network::Network;
use crate::scenario::{
    AlgorithmParams, Area, BaseStation, BsKind, Location, RadioParams, Scenario, TrafficGrid,
    TrafficPoint,
};

/// Mean size of every traffic point built here, bits.
pub const MEAN_SIZE: f64 = 1e6;

#[derive(Debug, Clone)]
pub struct StationSpec {
    pub kind: BsKind,
    /// Rate offered to every point when used with [`line_network`].
    pub rate: f64,
    pub backhaul_bps: f64,
    pub hit_ratio: f64,
    pub static_power_w: f64,
    pub load_power_coeff: f64,
    pub green_supply_w: f64,
}

impl StationSpec {
    /// A small cell with the reference power model and no green supply.
    pub fn new(rate: f64, backhaul_bps: f64, hit_ratio: f64) -> Self {
        Self {
            kind: BsKind::Small,
            rate,
            backhaul_bps,
            hit_ratio,
            static_power_w: 37.0,
            load_power_coeff: 4.0,
            green_supply_w: 0.0,
        }
    }

    pub fn macro_cell(rate: f64, backhaul_bps: f64, hit_ratio: f64) -> Self {
        Self {
            kind: BsKind::Macro,
            static_power_w: 750.0,
            load_power_coeff: 500.0,
            ..Self::new(rate, backhaul_bps, hit_ratio)
        }
    }

    pub fn green(mut self, supply_w: f64) -> Self {
        self.green_supply_w = supply_w;
        self
    }
}

/// Scenario with points on a line and one station per entry of `stations`; each point's
/// offered traffic equals `demands[p]` bits/s.
pub fn scenario_for(stations: &[StationSpec], demands: &[f64], kappa: f64) -> Scenario {
    let n = demands.len();
    let width = n as f64 + 1.0;
    Scenario {
        area: Area { width, height: 1.0 },
        radio: RadioParams::default(),
        algorithm: AlgorithmParams { kappa, ..Default::default() },
        base_stations: stations
            .iter()
            .enumerate()
            .map(|(j, s)| BaseStation {
                id: j as u32 + 1,
                kind: s.kind,
                position: Location::new(0.0, 0.0),
                tx_power_dbm: 33.0,
                antenna_gain_db: 15.0,
                static_power_w: s.static_power_w,
                load_power_coeff: s.load_power_coeff,
                green_supply_w: s.green_supply_w,
                panel_area_m2: s.green_supply_w / 174.0,
                backhaul_rate_bps: s.backhaul_bps,
                cache_hit_ratio: s.hit_ratio,
            })
            .collect(),
        traffic_grid: TrafficGrid {
            nx: n,
            ny: 1,
            points: demands
                .iter()
                .enumerate()
                .map(|(p, &d)| TrafficPoint {
                    location: Location::new(p as f64 + 0.5, 0.5),
                    arrival_rate: d / MEAN_SIZE,
                    mean_size: MEAN_SIZE,
                    cell_area: 1.0,
                })
                .collect(),
        },
    }
}

/// Every point sees station `j` at `stations[j].rate`.
pub fn line_network(stations: &[StationSpec], demands: &[f64]) -> Network {
    let rates: Vec<Vec<f64>> = demands.iter().map(|_| stations.iter().map(|s| s.rate).collect()).collect();
    table_network(stations, &rates, demands, 0.0)
}

/// Network with an explicit `rates[point][bs]` table.
pub fn table_network(stations: &[StationSpec], rates: &[Vec<f64>], demands: &[f64], kappa: f64) -> Network {
    Network::with_rate_table(scenario_for(stations, demands, kappa), rates).expect("valid test network")
}

/// Draws a small random instance: 2..=`max_bs` stations (the first one a
/// macro cell), 1..=`max_points` points, log-uniform rates in 3..50 Mbit/s,
/// and per-point load shares of both queues drawn from `share`.
pub fn random_instance<R: rand::Rng>(
    rng: &mut R,
    max_bs: usize,
    max_points: usize,
    share: (f64, f64),
    kappa: f64,
) -> Network {
    let nb = rng.gen_range(2..=max_bs);
    let np = rng.gen_range(1..=max_points);
    let rates: Vec<Vec<f64>> =
        (0..np).map(|_| (0..nb).map(|_| 10f64.powf(rng.gen_range(6.5..7.7))).collect()).collect();
    let demands: Vec<f64> =
        rates.iter().map(|r| rng.gen_range(share.0..share.1) * r.iter().cloned().fold(0.0, f64::max)).collect();
    let mean_demand = demands.iter().sum::<f64>() / np as f64;
    let stations: Vec<StationSpec> = (0..nb)
        .map(|j| {
            let base = if j == 0 { StationSpec::macro_cell(0.0, 0.0, 0.0) } else { StationSpec::new(0.0, 0.0, 0.0) };
            let green = base.static_power_w + base.load_power_coeff * rng.gen_range(0.0..np as f64 * share.1);
            StationSpec {
                backhaul_bps: mean_demand / rng.gen_range(share.0..share.1),
                hit_ratio: rng.gen_range(0.0..0.5),
                ..base
            }
            .green(green)
        })
        .collect();
    table_network(&stations, &rates, &demands, kappa)
}
