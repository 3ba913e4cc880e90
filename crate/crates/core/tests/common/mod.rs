#![allow(dead_code)]

use nua_core::{Association, GenerationParams, Network};

/// Objective recomputed from raw scenario fields and a rate lookup, without
/// going through the crate's load or energy code.
pub fn psi_oracle(net: &Network, weights: &[f64]) -> f64 {
    let sc = net.scenario();
    let nb = sc.base_stations.len();
    let eps = sc.algorithm.epsilon;
    let kappa = sc.algorithm.kappa;
    let mut psi = 0.0;
    for (j, bs) in sc.base_stations.iter().enumerate() {
        let (mut rho, mut rho_t) = (0.0, 0.0);
        for (p, pt) in sc.traffic_grid.points.iter().enumerate() {
            let eta = weights[p * nb + j];
            if eta == 0.0 {
                continue;
            }
            let demand = pt.arrival_rate * pt.mean_size * pt.cell_area;
            rho += demand * eta / net.rate(p, j);
            rho_t += (1.0 - bs.cache_hit_ratio) * demand * eta / bs.backhaul_rate_bps;
        }
        if rho > 1.0 - eps || rho_t > 1.0 - eps {
            return f64::INFINITY;
        }
        let cap = ((bs.green_supply_w - bs.static_power_w) / bs.load_power_coeff).clamp(0.0, 1.0 - eps);
        let w = (kappa * (rho - cap)).exp();
        psi += w * (rho / (1.0 - rho) + rho_t / (1.0 - rho_t));
    }
    psi
}

/// Smallest objective over every one-hot association that uses only
/// reachable stations.
pub fn brute_force_min(net: &Network) -> f64 {
    let (n, b) = (net.num_points(), net.num_bs());
    let mut best = f64::INFINITY;
    let mut choice = vec![0usize; n];
    for mut code in 0..b.pow(n as u32) {
        for c in choice.iter_mut() {
            *c = code % b;
            code /= b;
        }
        if (0..n).any(|p| net.rate(p, choice[p]) <= 0.0) {
            continue;
        }
        best = best.min(psi_oracle(net, Association::from_choices(b, &choice).weights()));
    }
    best
}

/// The reference deployment: 3 macro and 7 small cells on a 50 x 50 grid.
pub fn replica(seed: u64, kappa: f64) -> Network {
    let params = GenerationParams { kappa, ..Default::default() };
    Network::new(nua_core::generate_scenario(seed, &params).unwrap()).unwrap()
}

/// Random row-stochastic association over each point's stations offering
/// at least a quarter of its best rate.
pub fn random_relaxed<R: rand::Rng>(rng: &mut R, net: &Network) -> Association {
    let b = net.num_bs();
    let mut w = Vec::with_capacity(net.num_points() * b);
    for p in 0..net.num_points() {
        let best = net.rates_at(p).iter().cloned().fold(0.0, f64::max);
        let row: Vec<f64> =
            (0..b).map(|j| if net.rate(p, j) >= 0.25 * best { rng.gen::<f64>() } else { 0.0 }).collect();
        let s: f64 = row.iter().sum();
        w.extend(row.iter().map(|x| x / s));
    }
    Association::from_weights(b, w).unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
