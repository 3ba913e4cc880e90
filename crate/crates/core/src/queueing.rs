//! Station and backhaul loads induced by an association.
//!
//! The radio side of a station is a processor-sharing queue: its load is the
//! sum of `demand / rate` over the points it serves. The backhaul is an
//! M/M/1 queue carrying only cache misses, so its load is
//! `(1 - hit_ratio) * demand / backhaul_rate`. Both feed the same latency
//! ratio `load / (1 - load)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, QueueKind, Result};
use crate::network::Network;

/// Fraction of each point's traffic carried by each station, stored
/// row-major as `[point][bs]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Association {
    n_bs: usize,
    weights: Vec<f64>,
}

impl Association {
    /// One-hot association: point `p` is served entirely by `choices[p]`.
    pub fn from_choices(n_bs: usize, choices: &[usize]) -> Association {
        let mut weights = vec![0.0; choices.len() * n_bs];
        for (p, &j) in choices.iter().enumerate() {
            assert!(j < n_bs, "station index {j} out of range");
            weights[p * n_bs + j] = 1.0;
        }
        Association { n_bs, weights }
    }

    pub fn from_weights(n_bs: usize, weights: Vec<f64>) -> Result<Association> {
        if n_bs == 0 || weights.len() % n_bs != 0 {
            return Err(Error::Shape(format!("{} weights do not split into rows of {n_bs}", weights.len())));
        }
        Ok(Association { n_bs, weights })
    }

    pub fn num_bs(&self) -> usize {
        self.n_bs
    }

    pub fn num_points(&self) -> usize {
        self.weights.len() / self.n_bs
    }

    #[inline]
    pub fn get(&self, p: usize, j: usize) -> f64 {
        self.weights[p * self.n_bs + j]
    }

    pub fn set(&mut self, p: usize, j: usize, value: f64) {
        self.weights[p * self.n_bs + j] = value;
    }

    pub fn row(&self, p: usize) -> &[f64] {
        &self.weights[p * self.n_bs..(p + 1) * self.n_bs]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_binary(&self) -> bool {
        self.weights.iter().all(|&w| w == 0.0 || w == 1.0)
            && (0..self.num_points()).all(|p| self.row(p).iter().sum::<f64>() == 1.0)
    }

    /// Station carrying the largest share of each point (lowest index on ties).
    pub fn choices(&self) -> Vec<usize> {
        (0..self.num_points())
            .map(|p| {
                let row = self.row(p);
                let mut best = 0;
                for j in 1..row.len() {
                    if row[j] > row[best] {
                        best = j;
                    }
                }
                best
            })
            .collect()
    }

    /// Whether this lies in the relaxed set: entries in `[0, 1]` and every
    /// row summing to one within `tol`.
    pub fn is_relaxed_feasible(&self, tol: f64) -> bool {
        self.weights.iter().all(|&w| (-tol..=1.0 + tol).contains(&w))
            && (0..self.num_points()).all(|p| (self.row(p).iter().sum::<f64>() - 1.0).abs() <= tol)
    }

    pub fn max_abs_diff(&self, other: &Association) -> f64 {
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `a * self + (1 - a) * other`.
    pub fn mix(&self, other: &Association, a: f64) -> Association {
        assert_eq!(self.weights.len(), other.weights.len());
        let weights =
            self.weights.iter().zip(&other.weights).map(|(x, y)| a * x + (1.0 - a) * y).collect();
        Association { n_bs: self.n_bs, weights }
    }

    pub(crate) fn check_shape(&self, net: &Network) -> Result<()> {
        if self.n_bs != net.num_bs() || self.num_points() != net.num_points() {
            return Err(Error::Shape(format!(
                "association is {}x{}, network is {}x{}",
                self.num_points(),
                self.n_bs,
                net.num_points(),
                net.num_bs()
            )));
        }
        Ok(())
    }
}

/// Per-station radio load and backhaul load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadState {
    pub bs_load: Vec<f64>,
    pub backhaul_load: Vec<f64>,
}

impl LoadState {
    pub fn of(assoc: &Association, net: &Network) -> Result<LoadState> {
        Ok(LoadState { bs_load: bs_load(assoc, net)?, backhaul_load: backhaul_load(assoc, net)? })
    }

    /// First load above `1 - epsilon`, radio queues checked before backhaul.
    pub fn saturation(&self, epsilon: f64) -> Option<(usize, QueueKind, f64)> {
        let cap = 1.0 - epsilon;
        let radio = self.bs_load.iter().enumerate().find(|(_, &l)| l > cap);
        if let Some((j, &l)) = radio {
            return Some((j, QueueKind::Radio, l));
        }
        let backhaul = self.backhaul_load.iter().enumerate().find(|(_, &l)| l > cap);
        backhaul.map(|(j, &l)| (j, QueueKind::Backhaul, l))
    }

    /// Loads of `(1 - t) * a + t * b` for associations with loads `a` and
    /// `b`; loads are linear in the association.
    pub fn lerp(&self, other: &LoadState, t: f64) -> LoadState {
        let mix = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect();
        LoadState {
            bs_load: mix(&self.bs_load, &other.bs_load),
            backhaul_load: mix(&self.backhaul_load, &other.backhaul_load),
        }
    }

    pub fn clamped(&self, epsilon: f64) -> LoadState {
        let cap = 1.0 - epsilon;
        let clamp = |v: &Vec<f64>| v.iter().map(|&l| l.clamp(0.0, cap)).collect();
        LoadState { bs_load: clamp(&self.bs_load), backhaul_load: clamp(&self.backhaul_load) }
    }
}

/// Radio load of every station. Weight on a zero-rate link is an error.
pub fn bs_load(assoc: &Association, net: &Network) -> Result<Vec<f64>> {
    assoc.check_shape(net)?;
    let mut load = vec![0.0; net.num_bs()];
    for p in 0..net.num_points() {
        let demand = net.demand(p);
        for (j, (&eta, &rate)) in assoc.row(p).iter().zip(net.rates_at(p)).enumerate() {
            if eta == 0.0 {
                continue;
            }
            if rate <= 0.0 {
                return Err(Error::ZeroRateAssignment { point: p, bs_id: net.bs_id(j) });
            }
            load[j] += demand * eta / rate;
        }
    }
    Ok(load)
}

/// Backhaul load of every station; only cache misses cross the backhaul.
pub fn backhaul_load(assoc: &Association, net: &Network) -> Result<Vec<f64>> {
    assoc.check_shape(net)?;
    let mut carried = vec![0.0; net.num_bs()];
    for p in 0..net.num_points() {
        let demand = net.demand(p);
        for (j, &eta) in assoc.row(p).iter().enumerate() {
            carried[j] += demand * eta;
        }
    }
    Ok(carried
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            let bs = net.bs(j);
            (1.0 - bs.cache_hit_ratio) * c / bs.backhaul_rate_bps
        })
        .collect())
}

/// Waiting time per unit of service time, `load / (1 - load)`.
pub fn latency_ratio(load: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&load) {
        return Err(Error::LoadOutOfRange(load));
    }
    Ok(load / (1.0 - load))
}

/// Mean delays of one user, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayBreakdown {
    /// Sojourn time in the station's processor-sharing queue.
    pub bs_delivery: f64,
    /// Part of `bs_delivery` spent waiting rather than being served.
    pub bs_wait: f64,
    pub backhaul_wait: f64,
}

pub fn per_user_delay(point: usize, bs: usize, loads: &LoadState, net: &Network) -> Result<DelayBreakdown> {
    let station = net.bs(bs);
    let rate = net.rate(point, bs);
    if rate <= 0.0 {
        return Err(Error::ZeroRateAssignment { point, bs_id: station.id });
    }
    let rho = loads.bs_load[bs];
    let rho_b = loads.backhaul_load[bs];
    let saturated = |queue, load| Error::Saturated { bs_id: station.id, queue, load };
    if !(0.0..1.0).contains(&rho) {
        return Err(saturated(QueueKind::Radio, rho));
    }
    if !(0.0..1.0).contains(&rho_b) {
        return Err(saturated(QueueKind::Backhaul, rho_b));
    }
    let size = net.scenario().points()[point].mean_size;
    let backhaul = station.backhaul_rate_bps;
    Ok(DelayBreakdown {
        bs_delivery: size / (rate * (1.0 - rho)),
        bs_wait: rho * size / (rate * (1.0 - rho)),
        backhaul_wait: rho_b * size / (backhaul * (1.0 - rho_b)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{line_network, StationSpec};

    #[test]
    fn latency_ratio_examples() {
        assert_eq!(latency_ratio(0.0).unwrap(), 0.0);
        assert!((latency_ratio(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((latency_ratio(0.9).unwrap() - 9.0).abs() < 1e-12);
        assert!(matches!(latency_ratio(1.0), Err(Error::LoadOutOfRange(_))));
        assert!(latency_ratio(-0.1).is_err());
        assert!(latency_ratio(1.0 - 1e-6).unwrap() > 9.9e5);
    }

    #[test]
    fn single_point_loads() {
        // demand 1 Mbit/s at 10 Mbit/s, backhaul 5 Mbit/s with hit ratio 0.27.
        let net = line_network(&[StationSpec::new(10e6, 5e6, 0.27)], &[1e6]);
        let assoc = Association::from_choices(1, &[0]);
        let rho = bs_load(&assoc, &net).unwrap();
        assert!((rho[0] - 0.1).abs() < 1e-15);
        let rho_b = backhaul_load(&assoc, &net).unwrap();
        assert!((rho_b[0] - 0.146).abs() < 1e-15);
    }

    #[test]
    fn cache_extremes_for_backhaul() {
        let full = line_network(&[StationSpec::new(10e6, 5e6, 1.0)], &[1e6, 2e6]);
        let assoc = Association::from_choices(1, &[0, 0]);
        assert_eq!(backhaul_load(&assoc, &full).unwrap(), vec![0.0]);
        let none = line_network(&[StationSpec::new(10e6, 5e6, 0.0)], &[1e6, 2e6]);
        assert!((backhaul_load(&assoc, &none).unwrap()[0] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn zero_traffic_gives_zero_load() {
        let net = line_network(&[StationSpec::new(10e6, 5e6, 0.2), StationSpec::new(3e6, 5e6, 0.1)], &[0.0, 0.0]);
        let assoc = Association::from_choices(2, &[0, 1]);
        let loads = LoadState::of(&assoc, &net).unwrap();
        assert_eq!(loads.bs_load, vec![0.0, 0.0]);
        assert_eq!(loads.backhaul_load, vec![0.0, 0.0]);
    }

    #[test]
    fn even_split_halves_contribution() {
        let net = line_network(&[StationSpec::new(10e6, 5e6, 0.0), StationSpec::new(10e6, 5e6, 0.0)], &[2e6]);
        let whole = bs_load(&Association::from_choices(2, &[0]), &net).unwrap();
        let split = bs_load(&Association::from_weights(2, vec![0.5, 0.5]).unwrap(), &net).unwrap();
        assert!((split[0] - whole[0] / 2.0).abs() < 1e-15);
        assert!((split[1] - whole[0] / 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_rate_assignment_is_rejected() {
        let net = line_network(&[StationSpec::new(10e6, 5e6, 0.0), StationSpec::new(0.0, 5e6, 0.0)], &[1e6]);
        let err = bs_load(&Association::from_choices(2, &[1]), &net).unwrap_err();
        assert!(matches!(err, Error::ZeroRateAssignment { point: 0, bs_id: 2 }));
    }

    #[test]
    fn delay_examples() {
        let net = line_network(&[StationSpec::new(10e6, 5e6, 0.0)], &[0.0]);
        let idle = LoadState { bs_load: vec![0.0], backhaul_load: vec![0.0] };
        let d = per_user_delay(0, 0, &idle, &net).unwrap();
        // mean size in line networks is 1 Mbit.
        assert_eq!(d.bs_wait, 0.0);
        assert!((d.bs_delivery - 0.1).abs() < 1e-15);

        let busy = LoadState { bs_load: vec![0.5], backhaul_load: vec![0.5] };
        let d = per_user_delay(0, 0, &busy, &net).unwrap();
        assert!((d.bs_delivery - 0.2).abs() < 1e-15);
        assert!((d.backhaul_wait - 0.2).abs() < 1e-15);
        // waiting per unit of service equals the latency ratio.
        assert!((d.bs_wait / 0.1 - latency_ratio(0.5).unwrap()).abs() < 1e-12);

        let full = LoadState { bs_load: vec![1.0], backhaul_load: vec![0.0] };
        assert!(matches!(per_user_delay(0, 0, &full, &net), Err(Error::Saturated { .. })));
    }

    #[test]
    fn saturation_detection() {
        let loads = LoadState { bs_load: vec![0.2, 0.9995], backhaul_load: vec![1.2, 0.0] };
        assert_eq!(loads.saturation(1e-3), Some((1, QueueKind::Radio, 0.9995)));
        let clamped = loads.clamped(1e-3);
        assert_eq!(clamped.backhaul_load[0], 0.999);
        assert_eq!(clamped.saturation(1e-3), None);
    }
}
