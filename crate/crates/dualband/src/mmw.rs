//! Greedy per-slot UA selection for the mmW band.
//!
//! A UA served over mmW gets all K₂ RBs for its transmission time, so its
//! minimum power is a single closed-form water-filling evaluation and the
//! per-slot problem reduces to picking the quota's worth of cheapest UAs.
//! Because per-UA powers are independent, the greedy pick is exact.

use crate::channel::EffectiveNoiseMap;
use crate::powermodel::{min_power_waterfill, RbSetSolution};
use crate::scenario::{MmwTimeMode, ScenarioConfig};

/// Per-slot mmW outcome: which UAs were selected (greedy order) and their
/// full RB solutions over the K₂ mmW RBs.
#[derive(Debug, Clone, PartialEq)]
pub struct MmwSelection {
    pub slot: usize,
    /// Selected UA ids, cheapest first.
    pub selected: Vec<usize>,
    /// `(ua_id, solution)` for every selected UA, same order as `selected`.
    pub solutions: Vec<(usize, RbSetSolution)>,
    pub total_power: f64,
}

impl MmwSelection {
    pub fn empty(slot: usize) -> Self {
        MmwSelection { slot, selected: Vec::new(), solutions: Vec::new(), total_power: 0.0 }
    }
}

/// Per-UA transmission time on the mmW band for a slot serving
/// `min(quota, group_size)` UAs. In `Fixed` mode this is the configured τ′;
/// in `Split` mode the configured value is beam-training overhead and the
/// served UAs share the remainder of the slot equally.
pub fn mmw_tx_time(cfg: &ScenarioConfig, group_size: usize) -> f64 {
    let served = cfg.mmw_quota.min(group_size);
    match cfg.mmw_time_mode {
        MmwTimeMode::Fixed => cfg.mmw_tx_time_s,
        MmwTimeMode::Split => {
            if served == 0 {
                cfg.mmw_tx_time_s
            } else {
                (cfg.slot_duration_s - served as f64 * cfg.mmw_tx_time_s) / served as f64
            }
        }
    }
}

/// Minimum mmW power for one UA: water-filling of its demand over the whole
/// noise row within `tx_time_s`.
pub fn mmw_min_power(noise_row: &[f64], demand_bits: f64, tx_time_s: f64, rb_bandwidth_hz: f64) -> f64 {
    min_power_waterfill(noise_row, demand_bits, tx_time_s, rb_bandwidth_hz).total_power
}

/// Greedy quota fill: sort the group by mmW minimum power ascending (ties by
/// UA id) and serve the first `min(quota, |group|)` over mmW. Returns the
/// selection and the remaining UA ids, ascending, for the µW allocator.
pub fn select_greedy(
    group: &[usize],
    mmw_map: &EffectiveNoiseMap,
    demands: &[f64],
    slot: usize,
    quota: usize,
    tx_time_s: f64,
) -> (MmwSelection, Vec<usize>) {
    let mut ranked: Vec<(usize, RbSetSolution)> = group
        .iter()
        .map(|&ua| {
            let row = mmw_map.row_for_ua(ua, slot);
            let sol = min_power_waterfill(row, demands[ua], tx_time_s, mmw_map.rb_bandwidth_hz);
            (ua, sol)
        })
        .collect();
    ranked.sort_by(|(ua_a, a), (ua_b, b)| {
        a.total_power.partial_cmp(&b.total_power).unwrap().then(ua_a.cmp(ua_b))
    });

    let take = quota.min(ranked.len());
    let mut rest: Vec<usize> = ranked[take..].iter().map(|(ua, _)| *ua).collect();
    rest.sort_unstable();
    let solutions: Vec<(usize, RbSetSolution)> = ranked.into_iter().take(take).collect();
    let selection = MmwSelection {
        slot,
        selected: solutions.iter().map(|(ua, _)| *ua).collect(),
        total_power: solutions.iter().map(|(_, s)| s.total_power).sum(),
        solutions,
    };
    (selection, rest)
}
