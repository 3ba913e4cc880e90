use crate::error::{Error, Result};
use crate::scenario::{BaseStation, BsKind, Scenario};

/// A validated scenario together with its link table: per-point rates and
/// SINRs toward every station, and per-point offered traffic.
///
/// Rates do not depend on caches, backhaul, energy or `kappa`, so the
/// `with_*` helpers reuse the table.
#[derive(Debug, Clone)]
pub struct Network {
    scenario: Scenario,
    n_bs: usize,
    rates: Vec<f64>,
    sinr: Vec<f64>,
    demand: Vec<f64>,
}

impl Network {
    pub fn new(scenario: Scenario) -> Result<Network> {
        scenario.validate()?;
        let n_bs = scenario.num_bs();
        let n_points = scenario.num_points();
        let mut rates = Vec::with_capacity(n_points * n_bs);
        let mut sinr = Vec::with_capacity(n_points * n_bs);
        for (p, point) in scenario.points().iter().enumerate() {
            let start = rates.len();
            for j in 0..n_bs {
                rates.push(scenario.rate(&point.location, j));
                sinr.push(scenario.sinr(&point.location, j));
            }
            if rates[start..].iter().all(|&r| r <= 0.0) {
                return Err(Error::UncoveredPoint { point: p });
            }
        }
        let demand = scenario.points().iter().map(|p| p.demand()).collect();
        Ok(Network { scenario, n_bs, rates, sinr, demand })
    }

    /// Builds a network from an externally supplied rate table
    /// (`rates[point][bs]`, bits/s) instead of the propagation model.
    pub fn with_rate_table(scenario: Scenario, rates: &[Vec<f64>]) -> Result<Network> {
        scenario.validate()?;
        let n_bs = scenario.num_bs();
        if rates.len() != scenario.num_points() || rates.iter().any(|r| r.len() != n_bs) {
            return Err(Error::Shape(format!(
                "rate table must be {}x{}",
                scenario.num_points(),
                n_bs
            )));
        }
        let bandwidth = scenario.radio.bandwidth_hz;
        for (p, row) in rates.iter().enumerate() {
            if row.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
                return Err(Error::Config(format!("rate table row {p} has invalid entries")));
            }
            if row.iter().all(|&r| r == 0.0) {
                return Err(Error::UncoveredPoint { point: p });
            }
        }
        let rates: Vec<f64> = rates.concat();
        let sinr = rates.iter().map(|r| (r / bandwidth).exp2() - 1.0).collect();
        let demand = scenario.points().iter().map(|p| p.demand()).collect();
        Ok(Network { scenario, n_bs, rates, sinr, demand })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn into_scenario(self) -> Scenario {
        self.scenario
    }

    pub fn num_bs(&self) -> usize {
        self.n_bs
    }

    pub fn num_points(&self) -> usize {
        self.demand.len()
    }

    pub fn bs(&self, j: usize) -> &BaseStation {
        &self.scenario.base_stations[j]
    }

    pub fn bs_id(&self, j: usize) -> u32 {
        self.scenario.base_stations[j].id
    }

    pub fn kappa(&self) -> f64 {
        self.scenario.algorithm.kappa
    }

    pub fn epsilon(&self) -> f64 {
        self.scenario.algorithm.epsilon
    }

    /// Rate of point `p` toward station `j`, bits/s.
    #[inline]
    pub fn rate(&self, p: usize, j: usize) -> f64 {
        self.rates[p * self.n_bs + j]
    }

    /// Rates of point `p` toward all stations.
    #[inline]
    pub fn rates_at(&self, p: usize) -> &[f64] {
        &self.rates[p * self.n_bs..(p + 1) * self.n_bs]
    }

    #[inline]
    pub fn sinr(&self, p: usize, j: usize) -> f64 {
        self.sinr[p * self.n_bs + j]
    }

    /// Offered traffic of point `p` (arrival rate x mean size x cell area), bits/s.
    #[inline]
    pub fn demand(&self, p: usize) -> f64 {
        self.demand[p]
    }

    fn map_scenario(&self, f: impl FnOnce(&Scenario) -> Scenario) -> Result<Network> {
        let scenario = f(&self.scenario);
        scenario.validate()?;
        Ok(Network { scenario, ..self.clone() })
    }

    pub fn with_kappa(&self, kappa: f64) -> Result<Network> {
        self.map_scenario(|s| s.with_kappa(kappa))
    }

    pub fn with_backhaul_rate(&self, kind: BsKind, rate_bps: f64) -> Result<Network> {
        self.map_scenario(|s| s.with_backhaul_rate(kind, rate_bps))
    }

    pub fn with_solar_efficiency(&self, efficiency: f64) -> Result<Network> {
        self.map_scenario(|s| s.with_solar_efficiency(efficiency))
    }

    pub fn without_caches(&self) -> Network {
        self.map_scenario(|s| s.without_caches()).expect("zero hit ratios are valid")
    }

    /// Copy with every arrival rate multiplied by `factor`.
    pub fn with_traffic_scale(&self, factor: f64) -> Result<Network> {
        let mut scenario = self.scenario.clone();
        for p in &mut scenario.traffic_grid.points {
            p.arrival_rate *= factor;
        }
        scenario.validate()?;
        let demand = scenario.points().iter().map(|p| p.demand()).collect();
        Ok(Network { scenario, demand, ..self.clone() })
    }
}
