//! Desk-scale brute-force references for the test suite and gap reports.
//!
//! Nothing here shares search logic with the production allocators: the µW
//! optimum and the 0-1 feasibility check enumerate ownership maps outright,
//! the grouping optimum enumerates labeled partitions, and the water-filling
//! reference evaluates the closed-form energy of every RB subset. Budgets
//! cap the enumeration sizes and fail loudly when exceeded.

use crate::grouping::balance_objective;
use crate::powermodel::min_power_waterfill;
use std::f64::consts::LN_2;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
}

/// Enumeration caps. `max_partitions` bounds the raw count of enumerated
/// states for any of the oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleBudget {
    pub max_uas: usize,
    pub max_rbs: usize,
    pub max_partitions: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_uas: 3, max_rbs: 12, max_partitions: 20_000_000 }
    }
}

/// Minimum total energy over all nonempty RB subsets, each evaluated with
/// the closed-form expression directly: for subset `S`,
/// `|S|·(Π_{r∈S} N_r · 2^(b/(τω)))^(1/|S|) − Σ_{r∈S} N_r`, discarding
/// subsets where any member would carry negative power. Independent of the
/// water-filling solver's prefix logic.
pub fn waterfill_min_by_subsets(noises: &[f64], bits: f64, duration_s: f64, rb_bandwidth_hz: f64) -> f64 {
    let k = noises.len();
    assert!(k >= 1 && k <= 20, "subset oracle is for desk-scale instances");
    if bits == 0.0 {
        return 0.0;
    }
    let c = bits / (duration_s * rb_bandwidth_hz);
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << k) {
        let size = mask.count_ones() as f64;
        let mut log2_prod = 0.0;
        let mut noise_sum = 0.0;
        for (r, &n) in noises.iter().enumerate() {
            if mask & (1 << r) != 0 {
                log2_prod += n.log2();
                noise_sum += n;
            }
        }
        let level = ((log2_prod + c) / size).exp2();
        // negative power on any member disqualifies the subset
        let valid = noises
            .iter()
            .enumerate()
            .all(|(r, &n)| mask & (1 << r) == 0 || level - n >= 0.0);
        if valid {
            best = best.min(size * level - noise_sum);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactMuwSolution {
    pub total_power: f64,
    pub rb_owner: Vec<Option<usize>>,
}

/// Exact µW optimum by exhausting every ownership map (each RB to one UA or
/// unowned), water-filling each UA over its owned set. Returns `None` when
/// no map gives every UA at least one RB. Ties resolve to the first optimal
/// map in odometer order, making the result deterministic.
pub fn exact_muw_optimum(
    noise_rows: &[Vec<f64>],
    demands: &[f64],
    duration_s: f64,
    rb_bandwidth_hz: f64,
    budget: &OracleBudget,
) -> Result<Option<ExactMuwSolution>, OracleError> {
    let n = noise_rows.len();
    let k = noise_rows.first().map_or(0, |r| r.len());
    assert_eq!(n, demands.len());
    if n > budget.max_uas || k > budget.max_rbs {
        return Err(OracleError::BudgetExceeded(format!(
            "{n} UAs x {k} RBs exceeds ({}, {})",
            budget.max_uas, budget.max_rbs
        )));
    }
    let states = ((n + 1) as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
    if states > budget.max_partitions {
        return Err(OracleError::BudgetExceeded(format!(
            "{states} ownership maps exceed {}",
            budget.max_partitions
        )));
    }

    let mut best: Option<ExactMuwSolution> = None;
    // odometer over base-(n+1) digits: 0 = unowned, d = UA d−1
    let mut digits = vec![0usize; k];
    loop {
        let mut counts = vec![0usize; n];
        for &d in &digits {
            if d > 0 {
                counts[d - 1] += 1;
            }
        }
        if counts.iter().all(|&c| c > 0) {
            let mut total = 0.0;
            for ua in 0..n {
                let owned: Vec<f64> = (0..k)
                    .filter(|&rb| digits[rb] == ua + 1)
                    .map(|rb| noise_rows[ua][rb])
                    .collect();
                total += min_power_waterfill(&owned, demands[ua], duration_s, rb_bandwidth_hz)
                    .total_power;
            }
            if best.as_ref().map_or(true, |b| total < b.total_power) {
                best = Some(ExactMuwSolution {
                    total_power: total,
                    rb_owner: digits.iter().map(|&d| (d > 0).then(|| d - 1)).collect(),
                });
            }
        }
        // advance
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(best);
            }
            digits[pos] += 1;
            if digits[pos] <= n {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// Exact minimum of the balance objective over every labeled partition of
/// `proxies` into `t_slots` nonempty groups.
pub fn exact_grouping(proxies: &[f64], t_slots: usize, budget: &OracleBudget) -> Result<f64, OracleError> {
    let n = proxies.len();
    assert!(n >= 1 && t_slots >= 1);
    let states = (t_slots as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if states > budget.max_partitions {
        return Err(OracleError::BudgetExceeded(format!(
            "{states} partitions exceed {}",
            budget.max_partitions
        )));
    }

    let mut best = f64::INFINITY;
    let mut assign = vec![0usize; n];
    loop {
        let mut counts = vec![0usize; t_slots];
        let mut powers = vec![0.0f64; t_slots];
        for (ua, &g) in assign.iter().enumerate() {
            counts[g] += 1;
            powers[g] += proxies[ua];
        }
        if counts.iter().all(|&c| c > 0) {
            best = best.min(balance_objective(&counts, &powers));
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(best);
            }
            assign[pos] += 1;
            if assign[pos] < t_slots {
                break;
            }
            assign[pos] = 0;
            pos += 1;
        }
    }
}

/// Exhaustive feasibility of the 0-1 assignment problem: does any ownership
/// pattern deliver `τ·Σ_owned rate ≥ demand` for every UA? Written directly
/// against the rate matrix; shares nothing with the greedy construction.
pub fn exact_ilp_feasible(
    rates: &[Vec<f64>],
    demands: &[f64],
    duration_s: f64,
    budget: &OracleBudget,
) -> Result<bool, OracleError> {
    let n = rates.len();
    let k = rates.first().map_or(0, |r| r.len());
    if k > budget.max_rbs {
        return Err(OracleError::BudgetExceeded(format!(
            "{k} RBs exceeds {}",
            budget.max_rbs
        )));
    }
    let states = ((n + 1) as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
    if states > budget.max_partitions {
        return Err(OracleError::BudgetExceeded(format!(
            "{states} ownership patterns exceed {}",
            budget.max_partitions
        )));
    }

    let mut digits = vec![0usize; k];
    loop {
        let mut delivered = vec![0.0f64; n];
        for (rb, &d) in digits.iter().enumerate() {
            if d > 0 {
                delivered[d - 1] += rates[d - 1][rb];
            }
        }
        if (0..n).all(|ua| duration_s * delivered[ua] >= demands[ua]) {
            return Ok(true);
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(false);
            }
            digits[pos] += 1;
            if digits[pos] <= n {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// Reference single-RB energy used by a few tests: `N·(2^(R/ω) − 1)`
/// evaluated through `exp` rather than `exp_m1`.
pub fn single_rb_power_reference(noise_w: f64, rate_bps: f64, rb_bandwidth_hz: f64) -> f64 {
    noise_w * ((rate_bps / rb_bandwidth_hz * LN_2).exp() - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_owner_map_equals_whole_band_waterfill() {
        let rows = vec![vec![2e-15, 8e-15, 4e-15, 3e-15]];
        let sol = exact_muw_optimum(&rows, &[1e4], 0.01, 1.8e5, &OracleBudget::default())
            .unwrap()
            .unwrap();
        let direct = min_power_waterfill(&rows[0], 1e4, 0.01, 1.8e5).total_power;
        assert!((sol.total_power - direct).abs() / direct < 1e-12);
        assert!(sol.rb_owner.iter().all(|o| *o == Some(0)));
    }

    #[test]
    fn two_uas_one_rb_is_infeasible() {
        let rows = vec![vec![1e-15], vec![1e-15]];
        let sol =
            exact_muw_optimum(&rows, &[1e3, 1e3], 0.01, 1.8e5, &OracleBudget::default()).unwrap();
        assert!(sol.is_none());
    }

    #[test]
    fn two_enumeration_orders_agree() {
        // reverse RB order changes the odometer sequence entirely; the
        // minimum must not move
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rows: Vec<Vec<f64>> = (0..2)
            .map(|_| (0..3).map(|_| 10f64.powf(rng.gen_range(-15.0..-12.0))).collect())
            .collect();
        let demands = [7e3, 1.3e4];
        let budget = OracleBudget::default();
        let fwd = exact_muw_optimum(&rows, &demands, 0.01, 1.8e5, &budget).unwrap().unwrap();
        let rev_rows: Vec<Vec<f64>> =
            rows.iter().map(|r| r.iter().rev().copied().collect()).collect();
        let rev = exact_muw_optimum(&rev_rows, &demands, 0.01, 1.8e5, &budget).unwrap().unwrap();
        assert!((fwd.total_power - rev.total_power).abs() / fwd.total_power < 1e-12);
    }

    #[test]
    fn budget_violations_fail_loudly() {
        let rows = vec![vec![1e-15; 13]];
        let err = exact_muw_optimum(&rows, &[1.0], 1.0, 1.0, &OracleBudget::default()).unwrap_err();
        assert!(matches!(err, OracleError::BudgetExceeded(_)));

        let err = exact_grouping(&[1.0; 30], 3, &OracleBudget::default()).unwrap_err();
        assert!(matches!(err, OracleError::BudgetExceeded(_)));
    }

    #[test]
    fn grouping_equal_proxies_balance_perfectly() {
        let opt = exact_grouping(&[1.0; 6], 2, &OracleBudget::default()).unwrap();
        assert_eq!(opt, 0.0);
    }

    #[test]
    fn grouping_n_equals_t_is_forced() {
        // each UA in its own group (any order); counts all 1
        let proxies = [3.0, 2.0];
        let opt = exact_grouping(&proxies, 2, &OracleBudget::default()).unwrap();
        // counts (1,1): σ = 0; powers either (3,2) or (2,3): |1−3/2| or |1−2/3|
        assert!((opt - (1.0 - 2.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn grouping_four_proxies_reach_zero() {
        let opt = exact_grouping(&[4.0, 3.0, 2.0, 1.0], 2, &OracleBudget::default()).unwrap();
        assert_eq!(opt, 0.0); // {4,1} vs {3,2}
    }

    #[test]
    fn ilp_zero_demands_feasible_with_empty_ownership() {
        let rates = vec![vec![0.0, 0.0], vec![0.0, 0.0]];
        assert!(exact_ilp_feasible(&rates, &[0.0, 0.0], 1.0, &OracleBudget::default()).unwrap());
    }

    #[test]
    fn ilp_obviously_short_instance_is_infeasible() {
        let rates = vec![vec![0.1, 0.2, 0.1]];
        assert!(!exact_ilp_feasible(&rates, &[10.0], 1.0, &OracleBudget::default()).unwrap());
    }

    #[test]
    fn subset_oracle_zero_demand() {
        assert_eq!(waterfill_min_by_subsets(&[1.0, 5.0], 0.0, 1.0, 1.0), 0.0);
    }

    #[test]
    fn subset_oracle_hand_examples() {
        // [1, 100] with c = 1: best subset is {0} alone at power 1
        let best = waterfill_min_by_subsets(&[1.0, 100.0], 1.0, 1.0, 1.0);
        assert!((best - 1.0).abs() < 1e-12);
        // four equal noises, c = 4: level 2, total 4
        let best = waterfill_min_by_subsets(&[1.0; 4], 4.0, 1.0, 1.0);
        assert!((best - 4.0).abs() < 1e-12);
    }
}
