//! The µW allocator: KKT-seeded rate estimation, feasibility escalation,
//! water-filled settling, and ownership-transfer descent.
//!
//! Serving the group's remaining UAs over the µW band is a mixed-integer
//! problem (who owns which RB, at what rate). It is attacked in four moves:
//!
//! 1. **Estimate** — from the Lagrangian stationarity condition each UA `n`
//!    carries one multiplier `log2(−β_n)`; its estimated rate on RB `k` is
//!    `ω·(log2(−β_n) + log2(τω/(N_nk·ln2)))`, clipped at zero. The
//!    multiplier starts at the level that would meet the demand over `m_n`
//!    average RBs, with the budget `m_n` proportional to distance.
//! 2. **Escalate** — while no conflict-free assignment supports the demands
//!    at the estimated rates, raise the multipliers by the step Δ, which
//!    raises every estimate and widens every candidate set.
//! 3. **Settle** — once an ownership map exists, per-UA water-filling
//!    replaces the estimates with the exact optimal rates for that map.
//! 4. **Descend** — repeatedly move the single RB whose ownership transfer
//!    yields the largest total-power reduction, until no transfer helps.
//!    Donor loss and receiver gain are evaluated against settled
//!    water-filling values, so a transfer the receiver would not actually
//!    use scores exactly zero on the receiver side.

use crate::channel::BandNoiseMaps;
use crate::mmw::{self, MmwSelection};
use crate::powermodel::{min_power_waterfill, RbSetSolution};
use crate::scenario::{EscalationMode, ScenarioConfig, UserApp};
use std::f64::consts::LN_2;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AllocError {
    #[error(
        "µW assignment still infeasible after {iterations} escalation rounds \
         ({uas} UAs on {rbs} RBs); the band cannot carry this group"
    )]
    EscalationCap { iterations: u64, uas: usize, rbs: usize },
    #[error("µW band has {rbs} RBs for {uas} UAs; every UA needs at least one")]
    InsufficientRbs { uas: usize, rbs: usize },
}

/// One slot's µW subproblem: the UAs bound to µW (local indices), their
/// noise rows for this slot, and the algorithm parameters.
#[derive(Debug, Clone)]
pub struct MuwProblem<'a> {
    pub noise_rows: Vec<&'a [f64]>,
    pub demands: Vec<f64>,
    /// Slot duration τ.
    pub duration_s: f64,
    /// RB bandwidth ω₁.
    pub rb_bandwidth_hz: f64,
    /// Escalation step Δ.
    pub step: f64,
    pub escalation_mode: EscalationMode,
    pub max_escalations: u64,
}

impl<'a> MuwProblem<'a> {
    pub fn num_uas(&self) -> usize {
        self.demands.len()
    }

    pub fn num_rbs(&self) -> usize {
        self.noise_rows.first().map_or(0, |r| r.len())
    }

    /// Minimum power for UA `ua` restricted to the RB subset `rbs` (V(n, ·)).
    fn set_min_power(&self, ua: usize, rbs: &[usize]) -> f64 {
        if self.demands[ua] == 0.0 || rbs.is_empty() {
            return 0.0;
        }
        let noises: Vec<f64> = rbs.iter().map(|&rb| self.noise_rows[ua][rb]).collect();
        min_power_waterfill(&noises, self.demands[ua], self.duration_s, self.rb_bandwidth_hz)
            .total_power
    }
}

/// Per-UA multiplier state: `log2(−β_n)` and the RB budget `m_n` that seeded it.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaState {
    pub log2_neg_beta: Vec<f64>,
    pub rb_budget: Vec<usize>,
}

/// Who owns each µW RB (local UA indices; `None` = unowned).
#[derive(Debug, Clone, PartialEq)]
pub struct OwnershipMap {
    pub rb_owner: Vec<Option<usize>>,
}

impl OwnershipMap {
    pub fn new(num_rbs: usize) -> Self {
        OwnershipMap { rb_owner: vec![None; num_rbs] }
    }

    /// RB sets per UA, each ascending.
    pub fn owned_sets(&self, num_uas: usize) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); num_uas];
        for (rb, owner) in self.rb_owner.iter().enumerate() {
            if let Some(ua) = owner {
                sets[*ua].push(rb);
            }
        }
        sets
    }

    pub fn transfer(&mut self, rb: usize, to: usize) {
        debug_assert!(self.rb_owner[rb].is_some(), "cannot transfer an unowned RB");
        self.rb_owner[rb] = Some(to);
    }
}

/// Net power change of every candidate single-RB transfer.
///
/// `gain[rb][ua]` is the total-power reduction from moving `rb` to receiver
/// `ua` (negative = the move would cost power; −∞ = not a legal move);
/// `best[rb]` is the column-wise best receiver for `rb`. A best entry ≤ 0
/// means no improving transfer exists for that RB.
#[derive(Debug, Clone)]
pub struct TransferDeltas {
    pub gain: Vec<Vec<f64>>,
    pub best: Vec<Option<(f64, usize)>>,
}

/// Initialize `log2(−β_n) = b/(τ·m_n·ω) − mean_k log2(τω/(N_nk·ln2))`, the
/// multiplier level at which `m_n` average RBs would just cover the demand.
pub fn beta_init(problem: &MuwProblem, rb_budget: &[usize]) -> BetaState {
    let k = problem.num_rbs() as f64;
    let tau_omega = problem.duration_s * problem.rb_bandwidth_hz;
    let log2_neg_beta = (0..problem.num_uas())
        .map(|ua| {
            debug_assert!(rb_budget[ua] >= 1);
            let mean_log: f64 = problem.noise_rows[ua]
                .iter()
                .map(|&n| (tau_omega / (n * LN_2)).log2())
                .sum::<f64>()
                / k;
            problem.demands[ua]
                / (problem.duration_s * rb_budget[ua] as f64 * problem.rb_bandwidth_hz)
                - mean_log
        })
        .collect();
    BetaState { log2_neg_beta, rb_budget: rb_budget.to_vec() }
}

/// Estimated rate of every (UA, RB): `max(0, ω·(log2(−β_n) + log2(τω/(N·ln2))))`.
/// An RB is a candidate for a UA iff its estimate is strictly positive.
pub fn estimate_rates(problem: &MuwProblem, beta: &BetaState) -> Vec<Vec<f64>> {
    let tau_omega = problem.duration_s * problem.rb_bandwidth_hz;
    (0..problem.num_uas())
        .map(|ua| {
            problem.noise_rows[ua]
                .iter()
                .map(|&n| {
                    let r = problem.rb_bandwidth_hz
                        * (beta.log2_neg_beta[ua] + (tau_omega / (n * LN_2)).log2());
                    r.max(0.0)
                })
                .collect()
        })
        .collect()
}

/// Result of one feasibility-construction attempt.
#[derive(Debug, Clone, PartialEq)]
pub enum AssignmentOutcome {
    Feasible(OwnershipMap),
    /// Local indices of the UAs whose demand the estimates cannot cover.
    Infeasible { unsatisfied: Vec<usize> },
}

/// Greedy feasibility construction for the estimated rates: UAs are served
/// hardest-first (largest demand per mean candidate rate); each claims its
/// unclaimed candidate RBs in descending estimated rate until
/// `τ·ΣR̂ ≥ demand`. Success is a sufficient certificate that the 0-1
/// assignment problem is feasible, never a necessary one.
///
/// On success the map is completed: every RB still unclaimed goes to the
/// UA with the best estimated rate on it (ties to the lower noise, then
/// the lower index). Spectrum never idles — settling spreads each demand
/// over everything its owner holds, and the descent can move the extras
/// wherever they help most.
pub fn construct_assignment(problem: &MuwProblem, rates: &[Vec<f64>]) -> AssignmentOutcome {
    let n = problem.num_uas();
    let mut candidates: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n);
    let mut hardness: Vec<f64> = Vec::with_capacity(n);
    for ua in 0..n {
        let mut cands: Vec<(usize, f64)> = rates[ua]
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > 0.0)
            .map(|(rb, &r)| (rb, r))
            .collect();
        cands.sort_by(|(rb_a, r_a), (rb_b, r_b)| {
            r_b.partial_cmp(r_a).unwrap().then(rb_a.cmp(rb_b))
        });
        hardness.push(if problem.demands[ua] == 0.0 {
            f64::NEG_INFINITY // nothing to place
        } else if cands.is_empty() {
            f64::INFINITY
        } else {
            let mean: f64 = cands.iter().map(|(_, r)| r).sum::<f64>() / cands.len() as f64;
            problem.demands[ua] / mean
        });
        candidates.push(cands);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| hardness[b].partial_cmp(&hardness[a]).unwrap().then(a.cmp(&b)));

    let mut map = OwnershipMap::new(problem.num_rbs());
    let mut unsatisfied = Vec::new();
    for &ua in &order {
        if problem.demands[ua] == 0.0 {
            continue;
        }
        let mut rate_sum = 0.0;
        let mut met = false;
        for &(rb, rate) in &candidates[ua] {
            if map.rb_owner[rb].is_some() {
                continue;
            }
            map.rb_owner[rb] = Some(ua);
            rate_sum += rate;
            if problem.duration_s * rate_sum >= problem.demands[ua] {
                met = true;
                break;
            }
        }
        if !met {
            unsatisfied.push(ua);
        }
    }

    if !unsatisfied.is_empty() {
        unsatisfied.sort_unstable();
        return AssignmentOutcome::Infeasible { unsatisfied };
    }

    for rb in 0..problem.num_rbs() {
        if map.rb_owner[rb].is_some() {
            continue;
        }
        let mut best: Option<usize> = None;
        for ua in 0..n {
            if problem.demands[ua] == 0.0 {
                continue;
            }
            best = Some(match best {
                None => ua,
                Some(cur) => {
                    let better_rate = rates[ua][rb] > rates[cur][rb];
                    let same_rate = rates[ua][rb] == rates[cur][rb];
                    let quieter = problem.noise_rows[ua][rb] < problem.noise_rows[cur][rb];
                    if better_rate || (same_rate && quieter) {
                        ua
                    } else {
                        cur
                    }
                }
            });
        }
        map.rb_owner[rb] = best;
    }
    AssignmentOutcome::Feasible(map)
}

/// Raise multipliers by Δ: every UA in `Global` mode, only the unsatisfied
/// ones in `PerUa` mode.
pub fn escalate(beta: &mut BetaState, step: f64, mode: EscalationMode, unsatisfied: &[usize]) {
    match mode {
        EscalationMode::Global => {
            for v in &mut beta.log2_neg_beta {
                *v += step;
            }
        }
        EscalationMode::PerUa => {
            for &ua in unsatisfied {
                beta.log2_neg_beta[ua] += step;
            }
        }
    }
}

/// Exact per-UA optimum for a fixed ownership map: water-fill each UA's
/// demand over its owned RBs. Solutions are indexed over the full RB range.
pub fn settle_power(problem: &MuwProblem, map: &OwnershipMap) -> Vec<RbSetSolution> {
    let owned = map.owned_sets(problem.num_uas());
    (0..problem.num_uas()).map(|ua| settle_ua(problem, ua, &owned[ua])).collect()
}

fn settle_ua(problem: &MuwProblem, ua: usize, owned: &[usize]) -> RbSetSolution {
    let k = problem.num_rbs();
    if problem.demands[ua] == 0.0 || owned.is_empty() {
        return RbSetSolution::zero(k);
    }
    let noises: Vec<f64> = owned.iter().map(|&rb| problem.noise_rows[ua][rb]).collect();
    let sub =
        min_power_waterfill(&noises, problem.demands[ua], problem.duration_s, problem.rb_bandwidth_hz);
    let mut full = RbSetSolution::zero(k);
    for (i, &rb) in owned.iter().enumerate() {
        full.per_rb_power[rb] = sub.per_rb_power[i];
        full.per_rb_rate[rb] = sub.per_rb_rate[i];
    }
    full.active = sub.active.iter().map(|&i| owned[i]).collect();
    full.total_power = sub.total_power;
    full
}

/// Score every legal single-RB transfer against the settled totals.
///
/// For RB `k` owned by `n₁` (who must keep at least one RB) and receiver
/// `n₂`: donor change `V(n₁,ℐ) − V(n₁,ℐ∖k)` ≤ 0, receiver change
/// `V(n₂,𝒥) − V(n₂,𝒥∪k)` ≥ 0 (exactly 0 when `k` would sit outside the
/// receiver's active set), and the gain is their sum.
pub fn transfer_deltas(
    problem: &MuwProblem,
    map: &OwnershipMap,
    settled_totals: &[f64],
) -> TransferDeltas {
    let n = problem.num_uas();
    let k = problem.num_rbs();
    let owned = map.owned_sets(n);
    let mut gain = vec![vec![f64::NEG_INFINITY; n]; k];
    let mut best: Vec<Option<(f64, usize)>> = vec![None; k];

    for rb in 0..k {
        let Some(donor) = map.rb_owner[rb] else { continue };
        if owned[donor].len() < 2 {
            continue;
        }
        let rest: Vec<usize> = owned[donor].iter().copied().filter(|&r| r != rb).collect();
        let donor_change = settled_totals[donor] - problem.set_min_power(donor, &rest);
        for receiver in 0..n {
            if receiver == donor {
                continue;
            }
            let mut expanded = owned[receiver].clone();
            expanded.push(rb);
            let receiver_change =
                settled_totals[receiver] - problem.set_min_power(receiver, &expanded);
            let g = donor_change + receiver_change;
            gain[rb][receiver] = g;
            if best[rb].map_or(true, |(bg, _)| g > bg) {
                best[rb] = Some((g, receiver));
            }
        }
    }
    TransferDeltas { gain, best }
}

/// One executed transfer in the descent trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferRecord {
    pub iteration: u64,
    pub rb: usize,
    pub donor: usize,
    pub receiver: usize,
    /// Total µW power after the transfer.
    pub total_power: f64,
}

/// Final state of the µW pipeline for one slot (local UA indices).
#[derive(Debug, Clone)]
pub struct EodOutcome {
    pub map: OwnershipMap,
    pub solutions: Vec<RbSetSolution>,
    pub total_power: f64,
    pub escalations: u64,
    pub transfers: u64,
    pub trace: Vec<TransferRecord>,
}

/// Best-improvement descent: keep executing the single globally best
/// transfer while it reduces total power by more than a relative tolerance
/// (guarding against float noise). Ties prefer the lowest RB index, then
/// the lowest receiver index; a donor is never emptied. Terminates because
/// total power strictly decreases and the ownership space is finite.
pub fn local_search(
    problem: &MuwProblem,
    mut map: OwnershipMap,
    mut settled: Vec<RbSetSolution>,
) -> EodOutcome {
    const REL_TOL: f64 = 1e-12;
    let mut totals: Vec<f64> = settled.iter().map(|s| s.total_power).collect();
    let mut total: f64 = totals.iter().sum();
    let mut transfers = 0u64;
    let mut trace = Vec::new();

    loop {
        let deltas = transfer_deltas(problem, &map, &totals);
        let mut chosen: Option<(f64, usize, usize)> = None;
        for rb in 0..problem.num_rbs() {
            if let Some((g, receiver)) = deltas.best[rb] {
                if chosen.map_or(true, |(bg, _, _)| g > bg) {
                    chosen = Some((g, rb, receiver));
                }
            }
        }
        match chosen {
            Some((gain, rb, receiver)) if gain > REL_TOL * total => {
                let donor = map.rb_owner[rb].expect("best transfer always has a donor");
                map.transfer(rb, receiver);
                let owned = map.owned_sets(problem.num_uas());
                settled[donor] = settle_ua(problem, donor, &owned[donor]);
                settled[receiver] = settle_ua(problem, receiver, &owned[receiver]);
                totals[donor] = settled[donor].total_power;
                totals[receiver] = settled[receiver].total_power;
                let new_total: f64 = totals.iter().sum();
                debug_assert!(new_total < total, "descent must strictly decrease power");
                total = new_total;
                transfers += 1;
                trace.push(TransferRecord {
                    iteration: transfers,
                    rb,
                    donor,
                    receiver,
                    total_power: total,
                });
            }
            _ => break,
        }
    }

    EodOutcome { map, solutions: settled, total_power: total, escalations: 0, transfers, trace }
}

/// Initial RB budgets `m_n`, proportional to distance: round `K·d_n/Σd`,
/// clamp at 1, then correct by largest remainder until the budgets sum to
/// `K`. With more UAs than RBs the budgets degenerate to all-ones (the
/// assignment is structurally infeasible and escalation will hit its cap).
pub fn rb_budgets(distances: &[f64], num_rbs: usize) -> Vec<usize> {
    let n = distances.len();
    if n == 0 {
        return Vec::new();
    }
    if n > num_rbs {
        return vec![1; n];
    }
    let sum: f64 = distances.iter().sum();
    let quotas: Vec<f64> = if sum > 0.0 {
        distances.iter().map(|d| num_rbs as f64 * d / sum).collect()
    } else {
        vec![num_rbs as f64 / n as f64; n]
    };
    let mut budgets: Vec<usize> = quotas.iter().map(|q| q.round().max(1.0) as usize).collect();
    loop {
        let total: usize = budgets.iter().sum();
        if total == num_rbs {
            break;
        }
        if total < num_rbs {
            // most under-served first
            let idx = (0..n)
                .max_by(|&a, &b| {
                    let da = quotas[a] - budgets[a] as f64;
                    let db = quotas[b] - budgets[b] as f64;
                    da.partial_cmp(&db).unwrap().then(b.cmp(&a))
                })
                .unwrap();
            budgets[idx] += 1;
        } else {
            // most over-served first, never below one RB
            let idx = (0..n)
                .filter(|&i| budgets[i] > 1)
                .min_by(|&a, &b| {
                    let da = quotas[a] - budgets[a] as f64;
                    let db = quotas[b] - budgets[b] as f64;
                    da.partial_cmp(&db).unwrap().then(b.cmp(&a))
                })
                .expect("sum > num_rbs >= n implies some budget above 1");
            budgets[idx] -= 1;
        }
    }
    budgets
}

/// Run the full EOD pipeline on one µW subproblem: init multipliers,
/// escalate until the greedy construction succeeds, settle, descend.
pub fn eod_allocate(problem: &MuwProblem, rb_budget: &[usize]) -> Result<EodOutcome, AllocError> {
    let mut beta = beta_init(problem, rb_budget);
    let mut escalations = 0u64;
    let map = loop {
        let rates = estimate_rates(problem, &beta);
        match construct_assignment(problem, &rates) {
            AssignmentOutcome::Feasible(map) => break map,
            AssignmentOutcome::Infeasible { unsatisfied } => {
                escalations += 1;
                if escalations >= problem.max_escalations {
                    return Err(AllocError::EscalationCap {
                        iterations: escalations,
                        uas: problem.num_uas(),
                        rbs: problem.num_rbs(),
                    });
                }
                escalate(&mut beta, problem.step, problem.escalation_mode, &unsatisfied);
            }
        }
    };
    let settled = settle_power(problem, &map);
    let mut outcome = local_search(problem, map, settled);
    outcome.escalations = escalations;
    Ok(outcome)
}

/// µW side of a slot in global UA ids.
#[derive(Debug, Clone, PartialEq)]
pub struct MuwAllocation {
    /// µW-bound UA ids, ascending.
    pub ua_ids: Vec<usize>,
    /// Owner (global UA id) of each µW RB.
    pub rb_owner: Vec<Option<usize>>,
    /// `(ua_id, solution)` per µW UA, solutions indexed over all K₁ RBs.
    pub solutions: Vec<(usize, RbSetSolution)>,
    pub total_power: f64,
    pub escalations: u64,
    pub transfers: u64,
    /// Descent trace with global UA ids.
    pub trace: Vec<TransferRecord>,
}

impl MuwAllocation {
    pub fn empty(num_rbs: usize) -> Self {
        MuwAllocation {
            ua_ids: Vec::new(),
            rb_owner: vec![None; num_rbs],
            solutions: Vec::new(),
            total_power: 0.0,
            escalations: 0,
            transfers: 0,
            trace: Vec::new(),
        }
    }
}

/// Complete outcome of one slot over both bands.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotAllocation {
    pub slot: usize,
    pub mmw: MmwSelection,
    pub muw: MuwAllocation,
}

impl SlotAllocation {
    /// This slot's contribution to the overall objective.
    pub fn total_power(&self) -> f64 {
        self.mmw.total_power + self.muw.total_power
    }
}

/// Allocate one slot end to end: greedy mmW selection for the group, then
/// the EOD pipeline for whoever is left on µW. `uas` is the full topology
/// (`uas[i].ua_id == i`); `group` holds global UA ids.
pub fn allocate_slot(
    cfg: &ScenarioConfig,
    uas: &[UserApp],
    maps: &BandNoiseMaps,
    group: &[usize],
    slot: usize,
) -> Result<SlotAllocation, AllocError> {
    let demands: Vec<f64> = uas.iter().map(|ua| ua.demand_bits).collect();
    let tx_time = mmw::mmw_tx_time(cfg, group.len());
    let (mmw_sel, muw_ids) =
        mmw::select_greedy(group, &maps.mmw, &demands, slot, cfg.mmw_quota, tx_time);

    if muw_ids.is_empty() {
        return Ok(SlotAllocation { slot, mmw: mmw_sel, muw: MuwAllocation::empty(maps.muw.num_rbs) });
    }

    let problem = MuwProblem {
        noise_rows: muw_ids.iter().map(|&ua| maps.muw.row_for_ua(ua, slot)).collect(),
        demands: muw_ids.iter().map(|&ua| demands[ua]).collect(),
        duration_s: cfg.slot_duration_s,
        rb_bandwidth_hz: cfg.muw_rb_bandwidth_hz,
        step: cfg.step,
        escalation_mode: cfg.escalation_mode,
        max_escalations: cfg.escalation_max_iters,
    };
    let distances: Vec<f64> = muw_ids.iter().map(|&ua| uas[ua].distance_m).collect();
    let budgets = rb_budgets(&distances, problem.num_rbs());
    let outcome = eod_allocate(&problem, &budgets)?;

    Ok(SlotAllocation {
        slot,
        mmw: mmw_sel,
        muw: MuwAllocation {
            rb_owner: outcome.map.rb_owner.iter().map(|o| o.map(|ua| muw_ids[ua])).collect(),
            solutions: muw_ids
                .iter()
                .zip(outcome.solutions)
                .map(|(&ua, sol)| (ua, sol))
                .collect(),
            total_power: outcome.total_power,
            escalations: outcome.escalations,
            transfers: outcome.transfers,
            trace: outcome
                .trace
                .into_iter()
                .map(|t| TransferRecord {
                    donor: muw_ids[t.donor],
                    receiver: muw_ids[t.receiver],
                    ..t
                })
                .collect(),
            ua_ids: muw_ids,
        },
    })
}
