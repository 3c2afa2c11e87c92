//! Partition a QoS class into one group per slot, balancing group size and
//! group power.
//!
//! Each UA gets a deterministic power proxy (its closed-form minimum µW
//! power with unit fading and no shadowing, so only distance matters), and
//! the heuristic then seeds the T groups with the T most expensive UAs and
//! drops every further UA into whichever group improves the combined
//! size/power deviation most. The balance objective compares consecutive
//! groups: `Σ_t |1 − n_t/n_{t+1}| + |1 − P_t/P_{t+1}|`; zero means a
//! perfectly even partition.

use crate::powermodel::min_power_waterfill;
use crate::scenario::{ScenarioConfig, UserApp};
use std::collections::BTreeMap;

/// A QoS class split into `horizon` slot groups.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAssignment {
    pub horizon: usize,
    /// Group `t` holds the UA ids served in slot `t`.
    pub groups: Vec<Vec<usize>>,
    /// Power proxy of every member, for reporting and the balance objective.
    pub proxy_power: BTreeMap<usize, f64>,
}

impl GroupAssignment {
    pub fn group_counts(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.len()).collect()
    }

    pub fn group_powers(&self) -> Vec<f64> {
        self.groups
            .iter()
            .map(|g| g.iter().map(|ua| self.proxy_power[ua]).sum())
            .collect()
    }

    pub fn objective(&self) -> f64 {
        grouping_objective(self)
    }
}

/// Deterministic per-UA power metric: minimum power to meet the UA's demand
/// over all µW RBs with unit fading and zero shadow, so it depends on the
/// UA's distance only. Strictly increasing in distance.
pub fn proxy_power(ua: &UserApp, cfg: &ScenarioConfig) -> f64 {
    let loss_db = cfg.muw_pathloss_alpha_db + 10.0 * cfg.muw_pathloss_beta * ua.distance_m.log10();
    let noise = cfg.muw_rb_bandwidth_hz * cfg.noise_density_w_per_hz * crate::channel::db_to_linear(loss_db);
    let noises = vec![noise; cfg.muw_rb_count()];
    min_power_waterfill(&noises, ua.demand_bits, cfg.slot_duration_s, cfg.muw_rb_bandwidth_hz).total_power
}

/// Split `members` (UA id, proxy power) into `horizon` groups.
///
/// UAs are taken in descending proxy order; the first T seed the T groups,
/// and each remaining UA `i` joins the group maximizing
/// `D(j) = η(a₁−b₁) + γ(a₂−b₂)`, the drop in size/power deviation from the
/// per-group targets `C₁ = N/T`, `C₂ = ΣP/T` if group `j` gained UA `i`.
/// Ties go to the lowest group index. With fewer UAs than groups the tail
/// groups stay empty.
pub fn group_users(members: &[(usize, f64)], horizon: usize, eta: f64, gamma: f64) -> GroupAssignment {
    assert!(horizon >= 1, "need at least one group");
    assert!(!members.is_empty(), "cannot group an empty class");

    let mut sorted = members.to_vec();
    sorted.sort_by(|(id_a, p_a), (id_b, p_b)| {
        p_b.partial_cmp(p_a).unwrap().then(id_a.cmp(id_b))
    });

    let n = sorted.len();
    let c1 = n as f64 / horizon as f64;
    let c2: f64 = sorted.iter().map(|(_, p)| p).sum::<f64>() / horizon as f64;

    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); horizon];
    let mut counts = vec![0usize; horizon];
    let mut powers = vec![0.0f64; horizon];

    for (i, &(ua, proxy)) in sorted.iter().enumerate() {
        let j = if i < horizon {
            i
        } else {
            let mut best = 0;
            let mut best_d = f64::NEG_INFINITY;
            for j in 0..horizon {
                let a1 = (counts[j] as f64 - c1).abs();
                let b1 = ((counts[j] + 1) as f64 - c1).abs();
                let a2 = (powers[j] - c2).abs();
                let b2 = (powers[j] + proxy - c2).abs();
                let d = eta * (a1 - b1) + gamma * (a2 - b2);
                if d > best_d {
                    best_d = d;
                    best = j;
                }
            }
            best
        };
        groups[j].push(ua);
        counts[j] += 1;
        powers[j] += proxy;
    }

    GroupAssignment {
        horizon,
        groups,
        proxy_power: sorted.into_iter().collect(),
    }
}

/// Balance objective from per-group sizes and powers:
/// `Σ_{t<T-1} |1 − n_t/n_{t+1}| + |1 − P_t/P_{t+1}|`. An empty or zero-power
/// denominator group makes the objective infinite.
pub fn balance_objective(counts: &[usize], powers: &[f64]) -> f64 {
    debug_assert_eq!(counts.len(), powers.len());
    let mut total = 0.0;
    for t in 0..counts.len().saturating_sub(1) {
        if counts[t + 1] == 0 || powers[t + 1] == 0.0 {
            return f64::INFINITY;
        }
        let sigma = 1.0 - counts[t] as f64 / counts[t + 1] as f64;
        let eps = 1.0 - powers[t] / powers[t + 1];
        total += sigma.abs() + eps.abs();
    }
    total
}

pub fn grouping_objective(assignment: &GroupAssignment) -> f64 {
    balance_objective(&assignment.group_counts(), &assignment.group_powers())
}
