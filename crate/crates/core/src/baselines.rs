//! Reference schemes the NUA association is compared against.
//!
//! * DRB-NU: every user maximises its tier-biased rate; the small cell bias is
//!   chosen by sweeping a grid and keeping the value with the lowest objective.
//!   The sweep is rerun for the current network state on every call.
//! * NUA-NC: NUA run on a model without caches, then scored on the real
//!   network, so the scheme mis-plans backhaul load while the world still has
//!   caches.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energy::EnergyState;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::nua::{self, evaluate, RunOptions, RunOutcome, RunStatus};
use crate::queueing::Association;
use crate::report::latency_index;
use crate::scenario::BsKind;

/// Per-tier data rate bias. The macro tier is fixed at one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasConfig {
    pub small_bias: f64,
}

impl BiasConfig {
    pub fn new(small_bias: f64) -> Result<BiasConfig> {
        if !(small_bias > 0.0 && small_bias.is_finite()) {
            return Err(Error::Config(format!("bias must be positive, got {small_bias}")));
        }
        Ok(BiasConfig { small_bias })
    }

    pub fn for_kind(&self, kind: BsKind) -> f64 {
        match kind {
            BsKind::Macro => 1.0,
            BsKind::Small => self.small_bias,
        }
    }
}

/// Each point picks the station with the largest biased rate (lowest index
/// on ties).
pub fn drb_associate(net: &Network, bias: &BiasConfig) -> Result<Association> {
    let tier_bias: Vec<f64> = (0..net.num_bs()).map(|j| bias.for_kind(net.bs(j).kind)).collect();
    let choices = (0..net.num_points())
        .map(|p| {
            let mut best: Option<(usize, f64)> = None;
            for (j, &r) in net.rates_at(p).iter().enumerate() {
                if r <= 0.0 {
                    continue;
                }
                let biased = tier_bias[j] * r;
                if best.map_or(true, |(_, b)| biased > b) {
                    best = Some((j, biased));
                }
            }
            best.map(|(j, _)| j).ok_or(Error::UncoveredPoint { point: p })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Association::from_choices(net.num_bs(), &choices))
}

/// 60 log-spaced biases from 0.5 to 16.
pub fn default_bias_grid() -> Vec<f64> {
    log_grid(0.5, 16.0, 60)
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasPoint {
    pub bias: f64,
    /// Infinite when the association saturates some queue.
    pub psi: f64,
    pub latency_index: f64,
    pub brown_power_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrbSweep {
    pub best_bias: f64,
    pub best_psi: f64,
    pub curve: Vec<BiasPoint>,
}

/// Scores every bias in `grid` by the objective; the curve keeps grid order.
pub fn drb_sweep(net: &Network, grid: &[f64]) -> Result<DrbSweep> {
    if grid.is_empty() {
        return Err(Error::Config("bias grid is empty".into()));
    }
    let curve = grid
        .par_iter()
        .map(|&b| {
            let assoc = drb_associate(net, &BiasConfig::new(b)?)?;
            let eval = evaluate(&assoc, net)?;
            let energy = EnergyState::compute(&eval.loads, net);
            Ok(BiasPoint {
                bias: b,
                psi: eval.psi,
                latency_index: if eval.is_feasible() { latency_index(&eval.loads) } else { f64::INFINITY },
                brown_power_w: energy.total_brown_power(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let best = curve
        .iter()
        .filter(|pt| pt.psi.is_finite())
        .fold(None::<&BiasPoint>, |best, pt| match best {
            Some(b) if b.psi <= pt.psi => Some(b),
            _ => Some(pt),
        })
        .ok_or(Error::NoFeasibleBias)?;
    Ok(DrbSweep { best_bias: best.bias, best_psi: best.psi, curve })
}

/// NUA planned on a cache-free copy of the network, reported on the real one.
/// The trace is the planner's own.
pub fn nua_nc_run(net: &Network, opts: &RunOptions) -> Result<RunOutcome> {
    let planned = nua::run(&net.without_caches(), opts)?;
    let actual = evaluate(&planned.association, net)?;
    let mut trace = planned.trace;
    if let (false, Some((j, queue, load))) =
        (matches!(trace.status, RunStatus::Infeasible { .. }), actual.saturation)
    {
        trace.status = RunStatus::Infeasible { bs_id: net.bs_id(j), queue, load };
    }
    Ok(RunOutcome {
        association: planned.association,
        psi: actual.psi,
        energy: EnergyState::compute(&actual.loads, net),
        loads: actual.loads,
        trace,
        intermediate: planned.intermediate,
        advertisement: planned.advertisement,
    })
}
