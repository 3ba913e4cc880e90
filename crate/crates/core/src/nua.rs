//! Network-utility-aware (NUA) association.
//!
//! Stations advertise two numbers per round, `theta_a` (marginal radio and
//! weight cost) and `theta_b` (marginal backhaul cost per bit). Each point then
//! picks the station maximising `r / (theta_a + r * theta_b)`, which is the
//! station with the smallest partial derivative of the objective
//!
//! ```text
//! psi(eta) = sum_j w_j(rho_j) * (mu(rho_j) + mu(rho~_j))
//! ```
//!
//! Stations blend the new one-hot association into a running fractional one,
//! `eta_bar = (1 - delta) * eta + delta * eta_bar_prev`, and recompute their
//! advertisements from the blended loads. `delta` minimises `psi` along the
//! segment between the two (or, optionally, is found by backtracking) and
//! every accepted round lowers `psi`. When the blended association
//! settles, the one-hot association derived from the last advertisements is
//! the answer.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energy::{green_capacity, latency_weight, EnergyState};
use crate::error::{Error, QueueKind, Result};
use crate::network::Network;
use crate::queueing::{Association, LoadState};

/// Per-station values broadcast to users each round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Advertisement {
    pub theta_a: Vec<f64>,
    /// Seconds per bit.
    pub theta_b: Vec<f64>,
}

impl Advertisement {
    pub fn max_abs_diff(&self, other: &Advertisement) -> f64 {
        let a = self.theta_a.iter().zip(&other.theta_a);
        let b = self.theta_b.iter().zip(&other.theta_b);
        a.chain(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    /// Cost of pushing one more bit/s from a point with rate `rate` through
    /// station `j`, per bit/s of demand.
    #[inline]
    pub fn marginal_cost(&self, j: usize, rate: f64) -> f64 {
        self.theta_a[j] / rate + self.theta_b[j]
    }
}

/// Objective value and the loads it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// `f64::INFINITY` when some load exceeds `1 - epsilon`.
    pub psi: f64,
    pub loads: LoadState,
    /// Station index, queue and load of the first saturated queue.
    pub saturation: Option<(usize, QueueKind, f64)>,
}

impl Evaluation {
    pub fn is_feasible(&self) -> bool {
        self.saturation.is_none()
    }
}

/// Objective from per-station loads; infinite if any load exceeds
/// `1 - epsilon`.
pub fn psi_from_loads(loads: &LoadState, net: &Network) -> f64 {
    let eps = net.epsilon();
    if loads.saturation(eps).is_some() {
        return f64::INFINITY;
    }
    let kappa = net.kappa();
    let mut psi = 0.0;
    for j in 0..net.num_bs() {
        let rho = loads.bs_load[j];
        let rho_b = loads.backhaul_load[j];
        let w = latency_weight(rho, green_capacity(net.bs(j), eps), kappa);
        psi += w * (rho / (1.0 - rho) + rho_b / (1.0 - rho_b));
    }
    psi
}

pub fn evaluate(assoc: &Association, net: &Network) -> Result<Evaluation> {
    let loads = LoadState::of(assoc, net)?;
    let saturation = loads.saturation(net.epsilon());
    let psi = psi_from_loads(&loads, net);
    Ok(Evaluation { psi, loads, saturation })
}

/// The objective `psi(eta)`; saturation yields `f64::INFINITY`.
pub fn objective(assoc: &Association, net: &Network) -> Result<f64> {
    Ok(evaluate(assoc, net)?.psi)
}

/// Advertisements at the given loads. Loads are clamped to `[0, 1 - epsilon]`
/// first so that saturated intermediate states still produce finite values.
pub fn advertise(loads: &LoadState, net: &Network) -> Advertisement {
    let eps = net.epsilon();
    let kappa = net.kappa();
    let loads = loads.clamped(eps);
    let n = net.num_bs();
    let mut theta_a = Vec::with_capacity(n);
    let mut theta_b = Vec::with_capacity(n);
    for j in 0..n {
        let bs = net.bs(j);
        let rho = loads.bs_load[j];
        let rho_b = loads.backhaul_load[j];
        let w = latency_weight(rho, green_capacity(bs, eps), kappa);
        theta_a.push(
            w * (kappa * rho / (1.0 - rho) + kappa * rho_b / (1.0 - rho_b) + 1.0 / (1.0 - rho).powi(2)),
        );
        theta_b.push(w * (1.0 - bs.cache_hit_ratio) / (bs.backhaul_rate_bps * (1.0 - rho_b).powi(2)));
    }
    Advertisement { theta_a, theta_b }
}

fn require_feasible(eval: &Evaluation, net: &Network) -> Result<()> {
    match eval.saturation {
        Some((j, queue, load)) => Err(Error::Saturated { bs_id: net.bs_id(j), queue, load }),
        None => Ok(()),
    }
}

/// Partial derivative of `psi` with respect to the share of `point` served
/// by station `bs`.
pub fn gradient(assoc: &Association, net: &Network, point: usize, bs: usize) -> Result<f64> {
    let eval = evaluate(assoc, net)?;
    require_feasible(&eval, net)?;
    let rate = net.rate(point, bs);
    if rate <= 0.0 {
        return Err(Error::ZeroRateAssignment { point, bs_id: net.bs_id(bs) });
    }
    let ads = advertise(&eval.loads, net);
    Ok(net.demand(point) * ads.marginal_cost(bs, rate))
}

/// `<grad psi(from), to - from>`, skipping zero-rate links (their weights
/// are always zero).
pub fn directional_derivative(from: &Association, to: &Association, net: &Network) -> Result<f64> {
    let eval = evaluate(from, net)?;
    require_feasible(&eval, net)?;
    let ads = advertise(&eval.loads, net);
    Ok(directional_derivative_with(&ads, from, to, net))
}

fn directional_derivative_with(ads: &Advertisement, from: &Association, to: &Association, net: &Network) -> f64 {
    let mut total = 0.0;
    for p in 0..net.num_points() {
        let demand = net.demand(p);
        let mut row = 0.0;
        for (j, &rate) in net.rates_at(p).iter().enumerate() {
            let d = to.get(p, j) - from.get(p, j);
            if rate > 0.0 && d != 0.0 {
                row += d * ads.marginal_cost(j, rate);
            }
        }
        total += demand * row;
    }
    total
}

/// User-side rule: the reachable station maximising
/// `r / (theta_a + r * theta_b)`, lowest index on ties. `None` if no
/// station is reachable.
pub fn select_bs(rates: &[f64], ads: &Advertisement) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (j, &r) in rates.iter().enumerate() {
        if r <= 0.0 {
            continue;
        }
        let score = r / (ads.theta_a[j] + r * ads.theta_b[j]);
        if best.map_or(true, |(_, s)| score > s) {
            best = Some((j, score));
        }
    }
    best.map(|(j, _)| j)
}

/// One-hot association from every point applying [`select_bs`].
pub fn association_step(net: &Network, ads: &Advertisement) -> Result<Association> {
    let choices = (0..net.num_points())
        .into_par_iter()
        .map(|p| select_bs(net.rates_at(p), ads).ok_or(Error::UncoveredPoint { point: p }))
        .collect::<Result<Vec<_>>>()?;
    Ok(Association::from_choices(net.num_bs(), &choices))
}

/// `(1 - delta) * eta_new + delta * eta_bar_prev`.
pub fn intermediate_update(eta_new: &Association, eta_bar_prev: &Association, delta: f64) -> Result<Association> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("averaging parameter must lie in (0, 1), got {delta}")));
    }
    if eta_new.weights().len() != eta_bar_prev.weights().len() || eta_new.num_bs() != eta_bar_prev.num_bs() {
        return Err(Error::Shape("associations differ in shape".into()));
    }
    Ok(eta_new.mix(eta_bar_prev, 1.0 - delta))
}

/// Attach every point to its strongest-SINR reachable station.
pub fn max_sinr_association(net: &Network) -> Result<Association> {
    let choices = (0..net.num_points())
        .map(|p| {
            let mut best: Option<usize> = None;
            for j in 0..net.num_bs() {
                if net.rate(p, j) > 0.0 && best.map_or(true, |b| net.sinr(p, j) > net.sinr(p, b)) {
                    best = Some(j);
                }
            }
            best.ok_or(Error::UncoveredPoint { point: p })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Association::from_choices(net.num_bs(), &choices))
}

/// Candidate averaging parameters: `delta0`, then the step `1 - delta`
/// halved each time.
pub fn delta_schedule(delta0: f64, max_backtracks: usize) -> impl Iterator<Item = f64> {
    (0..=max_backtracks).map(move |i| 1.0 - (1.0 - delta0) / 2f64.powi(i as i32))
}

/// Backtracking over [`delta_schedule`]. `psi_at(delta)` evaluates the
/// objective of the blended point, `slope` is the directional derivative
/// toward the new association (negative for a descent direction). Accepts
/// the first `delta` with a strict decrease satisfying the sufficient
/// decrease test `psi <= psi_prev + c * (1 - delta) * slope`.
pub fn backtrack_delta(
    delta0: f64,
    max_backtracks: usize,
    psi_prev: f64,
    slope: f64,
    sufficient_decrease: f64,
    mut psi_at: impl FnMut(f64) -> f64,
) -> Option<(f64, f64)> {
    for delta in delta_schedule(delta0, max_backtracks) {
        if delta >= 1.0 {
            break;
        }
        let psi = psi_at(delta);
        if psi < psi_prev && psi <= psi_prev + sufficient_decrease * (1.0 - delta) * slope {
            return Some((delta, psi));
        }
    }
    None
}

/// How `delta` is chosen each round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// Minimise `psi` over the segment by golden-section search, falling
    /// back to backtracking if the result fails the acceptance test.
    #[default]
    LineSearch,
    /// First accepted value of [`delta_schedule`].
    Backtracking,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunOptions {
    pub max_iters: usize,
    /// Relative change of `psi` below which the iteration stops.
    pub tol: f64,
    pub delta0: f64,
    pub max_backtracks: usize,
    /// Armijo constant of the acceptance test.
    pub sufficient_decrease: f64,
    pub step_rule: StepRule,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            max_iters: 500,
            tol: 1e-6,
            delta0: 0.5,
            max_backtracks: 40,
            sufficient_decrease: 1e-4,
            step_rule: StepRule::LineSearch,
        }
    }
}

const GOLDEN_ITERS: usize = 64;
const MIN_DELTA: f64 = 1e-12;

/// Golden-section minimum of `f` on `[0, 1]`. Values may be infinite past
/// some threshold.
pub fn golden_section(mut f: impl FnMut(f64) -> f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (0.0, 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERS {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// `delta` minimising `psi` between `prev` (at `delta = 1`) and `new`
/// (at `delta = 0`), using loads interpolated linearly. Returns `None`
/// unless the minimiser passes the same test as [`backtrack_delta`].
pub fn line_search_delta(
    prev: &LoadState,
    new: &LoadState,
    psi_prev: f64,
    slope: f64,
    sufficient_decrease: f64,
    net: &Network,
) -> Option<(f64, f64)> {
    let psi_at = |step: f64| psi_from_loads(&prev.lerp(new, step), net);
    let step = golden_section(psi_at).clamp(MIN_DELTA, 1.0 - MIN_DELTA);
    let psi = psi_at(step);
    (psi < psi_prev && psi <= psi_prev + sufficient_decrease * step * slope).then_some((1.0 - step, psi))
}

/// Outcome of the step-size search for one round.
#[derive(Debug, Clone)]
pub enum DeltaChoice {
    Accepted { delta: f64, eta_bar: Association, eval: Evaluation },
    /// No admissible `delta` lowers the objective.
    Stagnated,
}

/// Picks `delta` for blending `eta_new` into `eta_bar_prev`.
///
/// From a saturated point, the objective is infinite and any finite value
/// is progress: the step grows toward `eta_new` until the blend is feasible.
pub fn choose_delta(
    eta_new: &Association,
    eta_bar_prev: &Association,
    net: &Network,
    opts: &RunOptions,
) -> Result<DeltaChoice> {
    let prev = evaluate(eta_bar_prev, net)?;
    let blend = |delta: f64| -> Result<(Association, Evaluation)> {
        let eta = intermediate_update(eta_new, eta_bar_prev, delta)?;
        let eval = evaluate(&eta, net)?;
        Ok((eta, eval))
    };

    if !prev.is_feasible() {
        for i in 0..=opts.max_backtracks {
            let delta = opts.delta0 / 2f64.powi(i as i32);
            let (eta_bar, eval) = blend(delta)?;
            if eval.is_feasible() {
                return Ok(DeltaChoice::Accepted { delta, eta_bar, eval });
            }
        }
        return Ok(DeltaChoice::Stagnated);
    }

    let ads = advertise(&prev.loads, net);
    let slope = directional_derivative_with(&ads, eta_bar_prev, eta_new, net);
    if !(slope < 0.0) {
        return Ok(DeltaChoice::Stagnated);
    }
    if opts.step_rule == StepRule::LineSearch {
        let new_loads = LoadState::of(eta_new, net)?;
        let found = line_search_delta(&prev.loads, &new_loads, prev.psi, slope, opts.sufficient_decrease, net);
        if let Some((delta, _)) = found {
            let (eta_bar, eval) = blend(delta)?;
            if eval.psi < prev.psi {
                return Ok(DeltaChoice::Accepted { delta, eta_bar, eval });
            }
        }
    }
    let mut last = None;
    let mut failure = None;
    let accepted = backtrack_delta(
        opts.delta0,
        opts.max_backtracks,
        prev.psi,
        slope,
        opts.sufficient_decrease,
        |delta| match blend(delta) {
            Ok((eta, eval)) => {
                let psi = eval.psi;
                last = Some((eta, eval));
                psi
            }
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
    );
    if let Some(e) = failure {
        return Err(e);
    }
    match (accepted, last) {
        (Some((delta, _)), Some((eta_bar, eval))) => Ok(DeltaChoice::Accepted { delta, eta_bar, eval }),
        _ => Ok(DeltaChoice::Stagnated),
    }
}

/// One accepted round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub psi: f64,
    pub delta: f64,
    pub max_eta_change: f64,
    pub bs_load: Vec<f64>,
    pub backhaul_load: Vec<f64>,
    /// `<grad psi(eta_bar_prev), eta_bar - eta_bar_prev>`; absent when the
    /// previous point was saturated.
    pub descent_product: Option<f64>,
    /// Advertisements that produced this round's one-hot association.
    pub advertisement: Advertisement,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RunStatus {
    Converged { iterations: usize, stagnated: bool },
    MaxIterations { iterations: usize },
    Infeasible { bs_id: u32, queue: QueueKind, load: f64 },
}

impl RunStatus {
    pub fn is_converged(&self) -> bool {
        matches!(self, RunStatus::Converged { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            RunStatus::Converged { .. } => "converged",
            RunStatus::MaxIterations { .. } => "max_iterations",
            RunStatus::Infeasible { .. } => "infeasible",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub initial_psi: f64,
    pub records: Vec<IterationRecord>,
    pub status: RunStatus,
}

impl IterationTrace {
    pub fn iterations(&self) -> usize {
        match self.status {
            RunStatus::Converged { iterations, .. } | RunStatus::MaxIterations { iterations } => iterations,
            RunStatus::Infeasible { .. } => self.records.len(),
        }
    }

    /// Objective values starting with the initial association.
    pub fn psi_sequence(&self) -> Vec<f64> {
        std::iter::once(self.initial_psi).chain(self.records.iter().map(|r| r.psi)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// One-hot association built from the final advertisements.
    pub association: Association,
    pub psi: f64,
    pub loads: LoadState,
    pub energy: EnergyState,
    pub trace: IterationTrace,
    /// Final fractional association.
    pub intermediate: Association,
    pub advertisement: Advertisement,
}

impl RunOutcome {
    pub fn status(&self) -> &RunStatus {
        &self.trace.status
    }
}

/// Runs NUA from the strongest-SINR association.
pub fn run(net: &Network, opts: &RunOptions) -> Result<RunOutcome> {
    run_from(net, max_sinr_association(net)?, opts)
}

/// Runs NUA from an arbitrary starting association.
pub fn run_from(net: &Network, initial: Association, opts: &RunOptions) -> Result<RunOutcome> {
    initial.check_shape(net)?;
    if !(opts.delta0 > 0.0 && opts.delta0 < 1.0) {
        return Err(Error::Config(format!("delta0 must lie in (0, 1), got {}", opts.delta0)));
    }
    let infeasible = |eval: &Evaluation| {
        let (j, queue, load) = eval.saturation.expect("called on a saturated evaluation");
        RunStatus::Infeasible { bs_id: net.bs_id(j), queue, load }
    };

    let mut bar = initial;
    let mut eval = evaluate(&bar, net)?;
    let initial_psi = eval.psi;
    let mut records = Vec::new();
    let mut status = RunStatus::MaxIterations { iterations: opts.max_iters };

    for k in 1..=opts.max_iters {
        let ads = advertise(&eval.loads, net);
        let eta = association_step(net, &ads)?;
        if eta == bar {
            status = if eval.is_feasible() {
                RunStatus::Converged { iterations: k, stagnated: false }
            } else {
                infeasible(&eval)
            };
            break;
        }
        let (delta, next, next_eval) = match choose_delta(&eta, &bar, net, opts)? {
            DeltaChoice::Accepted { delta, eta_bar, eval } => (delta, eta_bar, eval),
            DeltaChoice::Stagnated => {
                status = if eval.is_feasible() {
                    RunStatus::Converged { iterations: k, stagnated: true }
                } else {
                    infeasible(&eval)
                };
                break;
            }
        };
        let descent_product = eval
            .is_feasible()
            .then(|| directional_derivative_with(&ads, &bar, &next, net));
        let prev_psi = eval.psi;
        records.push(IterationRecord {
            iter: k,
            psi: next_eval.psi,
            delta,
            max_eta_change: next.max_abs_diff(&bar),
            bs_load: next_eval.loads.bs_load.clone(),
            backhaul_load: next_eval.loads.backhaul_load.clone(),
            descent_product,
            advertisement: ads,
        });
        bar = next;
        eval = next_eval;
        if prev_psi.is_finite() && (prev_psi == 0.0 || (prev_psi - eval.psi).abs() / prev_psi < opts.tol) {
            status = RunStatus::Converged { iterations: k, stagnated: false };
            break;
        }
    }

    let advertisement = advertise(&eval.loads, net);
    let association = association_step(net, &advertisement)?;
    let final_eval = evaluate(&association, net)?;
    if !matches!(status, RunStatus::Infeasible { .. }) && !final_eval.is_feasible() {
        status = infeasible(&final_eval);
    }
    let energy = EnergyState::compute(&final_eval.loads, net);
    Ok(RunOutcome {
        association,
        psi: final_eval.psi,
        loads: final_eval.loads,
        energy,
        trace: IterationTrace { initial_psi, records, status },
        intermediate: bar,
        advertisement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{line_network, table_network, StationSpec};

    fn ads(theta_a: &[f64], theta_b: &[f64]) -> Advertisement {
        Advertisement { theta_a: theta_a.to_vec(), theta_b: theta_b.to_vec() }
    }

    #[test]
    fn objective_examples() {
        let zero = line_network(&[StationSpec::new(10e6, 5e6, 0.2)], &[0.0, 0.0]);
        assert_eq!(objective(&Association::from_choices(1, &[0, 0]), &zero).unwrap(), 0.0);

        // rho = rho~ = 5/10 with no cache.
        let half = line_network(&[StationSpec::new(10e6, 10e6, 0.0)], &[2.5e6, 2.5e6]);
        let psi = objective(&Association::from_choices(1, &[0, 0]), &half).unwrap();
        assert!((psi - 2.0).abs() < 1e-12, "{psi}");

        let over = line_network(&[StationSpec::new(1e6, 5e6, 0.0)], &[2e6]);
        let eval = evaluate(&Association::from_choices(1, &[0]), &over).unwrap();
        assert_eq!(eval.psi, f64::INFINITY);
        assert_eq!(eval.saturation.map(|s| (s.0, s.1)), Some((0, QueueKind::Radio)));
    }

    #[test]
    fn advertisement_examples() {
        let net = line_network(&[StationSpec::new(10e6, 5e6, 0.2)], &[0.0]);
        let idle = LoadState { bs_load: vec![0.0], backhaul_load: vec![0.0] };
        let a = advertise(&idle, &net);
        assert_eq!(a.theta_a, vec![1.0]);
        assert!((a.theta_b[0] - 0.8 / 5e6).abs() < 1e-22);

        let half = LoadState { bs_load: vec![0.5], backhaul_load: vec![0.0] };
        assert!((advertise(&half, &net).theta_a[0] - 4.0).abs() < 1e-12);

        let cached = line_network(&[StationSpec::new(10e6, 5e6, 1.0)], &[0.0]);
        assert_eq!(advertise(&half, &cached).theta_b, vec![0.0]);
    }

    #[test]
    fn advertisement_clamps_saturated_loads() {
        let net = line_network(&[StationSpec::new(10e6, 5e6, 0.0)], &[0.0]);
        let over = LoadState { bs_load: vec![3.0], backhaul_load: vec![1.0] };
        let a = advertise(&over, &net);
        assert!(a.theta_a[0].is_finite() && a.theta_b[0].is_finite());
        assert!((a.theta_a[0] - 1e6).abs() < 1e-3);
    }

    #[test]
    fn gradient_reduces_to_radio_term_with_full_cache() {
        let net = line_network(&[StationSpec::new(10e6, 5e6, 1.0), StationSpec::new(8e6, 5e6, 0.3)], &[1e6, 2e6]);
        let assoc = Association::from_choices(2, &[0, 1]);
        let g = gradient(&assoc, &net, 1, 0).unwrap();
        // rho_0 = 0.1, kappa = 0: theta_a = 1 / 0.81.
        assert!((g - 2e6 / 10e6 / 0.81).abs() < 1e-12);
    }

    #[test]
    fn selection_examples() {
        assert_eq!(select_bs(&[0.0, 5e6], &ads(&[1.0, 9.0], &[0.0, 0.0])), Some(1));
        assert_eq!(select_bs(&[5e6, 5e6, 5e6], &ads(&[3.0, 1.5, 2.0], &[0.0; 3])), Some(1));
        assert_eq!(select_bs(&[10e6, 20e6], &ads(&[1.0, 4.0], &[0.0, 0.0])), Some(0));
        assert_eq!(select_bs(&[10e6, 10e6], &ads(&[1.0, 1.0], &[0.0, 0.0])), Some(0));
        assert_eq!(select_bs(&[0.0, 0.0], &ads(&[1.0, 1.0], &[0.0, 0.0])), None);
    }

    #[test]
    fn association_step_examples() {
        let rates = vec![vec![20e6, 1e6], vec![30e6, 2e6], vec![15e6, 0.5e6]];
        let net = table_network(
            &[StationSpec::new(0.0, 5e6, 0.0), StationSpec::new(0.0, 5e6, 0.0)],
            &rates,
            &[1e5, 1e5, 1e5],
            0.0,
        );
        let even = ads(&[1.0, 1.0], &[0.0, 0.0]);
        let eta = association_step(&net, &even).unwrap();
        assert_eq!(eta.choices(), vec![0, 0, 0]);
        assert!(eta.is_binary());
        assert_eq!(association_step(&net, &even).unwrap(), eta);
    }

    #[test]
    fn intermediate_update_examples() {
        let a = Association::from_choices(2, &[0]);
        let b = Association::from_choices(2, &[1]);
        let mid = intermediate_update(&a, &b, 0.5).unwrap();
        assert_eq!(mid.row(0), &[0.5, 0.5]);
        assert_eq!(intermediate_update(&a, &a, 0.3).unwrap(), a);
        let near = intermediate_update(&a, &b, 1e-12).unwrap();
        assert!(near.max_abs_diff(&a) < 1e-11);
        assert!(matches!(intermediate_update(&a, &b, 0.0), Err(Error::Domain(_))));
        assert!(intermediate_update(&a, &b, 1.0).is_err());
    }

    #[test]
    fn backtracking_grows_delta_when_full_step_overshoots() {
        // psi(step) = (step - 0.1)^2, minimum at a tenth of the full step.
        let psi = |delta: f64| (1.0 - delta - 0.1f64).powi(2);
        let (delta, value) = backtrack_delta(0.5, 40, psi(1.0), -0.2, 1e-4, psi).unwrap();
        assert!(delta > 0.5);
        assert_eq!(delta, 0.875);
        assert!(value < psi(1.0));
    }

    #[test]
    fn backtracking_accepts_delta0_when_it_descends() {
        let psi = |delta: f64| (1.0 - delta - 0.9f64).powi(2);
        let (delta, _) = backtrack_delta(0.5, 40, psi(1.0), -1.8, 1e-4, psi).unwrap();
        assert_eq!(delta, 0.5);
    }

    #[test]
    fn backtracking_gives_up_without_descent() {
        assert!(backtrack_delta(0.5, 10, 1.0, -1.0, 1e-4, |_| 2.0).is_none());
    }

    #[test]
    fn golden_section_finds_interior_minimum() {
        let s = golden_section(|x| (x - 0.3) * (x - 0.3));
        assert!((s - 0.3).abs() < 1e-9, "{s}");
        let s = golden_section(|x| if x > 0.6 { f64::INFINITY } else { -x });
        assert!(s <= 0.6 && s > 0.6 - 1e-9, "{s}");
    }

    #[test]
    fn line_search_minimises_along_segment() {
        // Two stations sharing four points; the optimum splits the load evenly.
        let net = line_network(&[StationSpec::new(10e6, 100e6, 0.0), StationSpec::new(10e6, 100e6, 0.0)], &[1e6; 4]);
        let prev = LoadState::of(&Association::from_choices(2, &[0, 0, 0, 0]), &net).unwrap();
        let new = LoadState::of(&Association::from_choices(2, &[1, 1, 1, 1]), &net).unwrap();
        let psi_prev = psi_from_loads(&prev, &net);
        let (delta, psi) = line_search_delta(&prev, &new, psi_prev, -1.0, 1e-4, &net).unwrap();
        assert!((delta - 0.5).abs() < 1e-8, "{delta}");
        assert!(psi < psi_prev);
    }

    #[test]
    fn delta_schedule_shrinks_step() {
        let d: Vec<f64> = delta_schedule(0.5, 3).collect();
        assert_eq!(d, vec![0.5, 0.75, 0.875, 0.9375]);
    }

    #[test]
    fn single_station_converges_at_once() {
        let net = line_network(&[StationSpec::new(10e6, 5e6, 0.2)], &[1e6, 1e6]);
        let out = run(&net, &RunOptions::default()).unwrap();
        assert_eq!(out.trace.status, RunStatus::Converged { iterations: 1, stagnated: false });
        assert_eq!(out.association.choices(), vec![0, 0]);
    }

    #[test]
    fn overloaded_single_station_is_infeasible() {
        let net = line_network(&[StationSpec::new(1e6, 5e6, 0.2)], &[1e6, 1e6]);
        let out = run(&net, &RunOptions::default()).unwrap();
        assert!(matches!(out.trace.status, RunStatus::Infeasible { bs_id: 1, queue: QueueKind::Radio, .. }));
    }

    #[test]
    fn recovers_from_saturated_start() {
        // Everything starts on station 1 whose backhaul cannot carry it.
        let net = line_network(
            &[StationSpec::new(20e6, 1e6, 0.0), StationSpec::new(10e6, 100e6, 0.0)],
            &[0.8e6, 0.8e6],
        );
        let start = Association::from_choices(2, &[0, 0]);
        assert_eq!(objective(&start, &net).unwrap(), f64::INFINITY);
        let out = run_from(&net, start, &RunOptions::default()).unwrap();
        assert!(out.status().is_converged(), "{:?}", out.status());
        assert!(out.psi.is_finite());
    }
}
