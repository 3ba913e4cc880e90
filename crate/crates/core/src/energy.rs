//! Load-dependent power draw and how green supply shapes the latency weights.

use serde::{Deserialize, Serialize};

use crate::network::Network;
use crate::queueing::LoadState;
use crate::scenario::BaseStation;

/// Power drawn by `bs` at traffic load `load`, W.
pub fn bs_power(load: f64, bs: &BaseStation) -> f64 {
    bs.load_power_coeff * load + bs.static_power_w
}

/// Grid power needed on top of the green supply. Surplus green power is
/// not redistributed.
pub fn brown_power(power_w: f64, green_supply_w: f64) -> f64 {
    (power_w - green_supply_w).max(0.0)
}

/// Largest load the green supply can power, capped at `1 - epsilon`.
pub fn green_capacity(bs: &BaseStation, epsilon: f64) -> f64 {
    ((bs.green_supply_w - bs.static_power_w) / bs.load_power_coeff).min(1.0 - epsilon).max(0.0)
}

/// `exp(kappa * (load - green_capacity))`: above 1 for stations running on
/// grid power, at most 1 for those within their green capacity.
pub fn latency_weight(load: f64, green_capacity: f64, kappa: f64) -> f64 {
    (kappa * (load - green_capacity)).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyState {
    pub power: Vec<f64>,
    pub brown_power: Vec<f64>,
    pub green_capacity: Vec<f64>,
    pub latency_weight: Vec<f64>,
}

impl EnergyState {
    pub fn compute(loads: &LoadState, net: &Network) -> EnergyState {
        let eps = net.epsilon();
        let kappa = net.kappa();
        let n = net.num_bs();
        let mut state = EnergyState {
            power: Vec::with_capacity(n),
            brown_power: Vec::with_capacity(n),
            green_capacity: Vec::with_capacity(n),
            latency_weight: Vec::with_capacity(n),
        };
        for j in 0..n {
            let bs = net.bs(j);
            let rho = loads.bs_load[j];
            let p = bs_power(rho, bs);
            let cap = green_capacity(bs, eps);
            state.power.push(p);
            state.brown_power.push(brown_power(p, bs.green_supply_w));
            state.green_capacity.push(cap);
            state.latency_weight.push(latency_weight(rho, cap, kappa));
        }
        state
    }

    pub fn total_brown_power(&self) -> f64 {
        self.brown_power.iter().sum()
    }
}
