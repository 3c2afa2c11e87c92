//! Independent constraint checker for emitted allocations.
//!
//! Re-verifies every scheduling constraint from raw outputs — RB
//! exclusivity, the mmW quota, demand satisfaction on both bands, band
//! exclusivity, and the partition accounting — recomputing rates from
//! powers and noises with its own arithmetic instead of the allocators'
//! helpers. An empty violation list means the allocation is clean.

use crate::channel::BandNoiseMaps;
use crate::muw::SlotAllocation;
use crate::runner::{class_noise_maps, trial_streams, TrialReport};
use crate::scenario::{generate_topology, MmwTimeMode, ScenarioConfig};
use std::collections::BTreeSet;
use std::fmt;

/// Relative slack when demand satisfaction is re-derived from powers.
const DEMAND_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub constraint: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.constraint, self.detail)
    }
}

fn push(violations: &mut Vec<Violation>, constraint: &'static str, detail: String) {
    violations.push(Violation { constraint, detail });
}

/// Audit-local rate math: `ω·ln(1 + p/N)/ln 2`.
fn own_rate(power_w: f64, noise_w: f64, rb_bandwidth_hz: f64) -> f64 {
    rb_bandwidth_hz * (power_w / noise_w).ln_1p() / std::f64::consts::LN_2
}

/// Audit-local resolution of the per-UA mmW time.
fn own_mmw_time(cfg: &ScenarioConfig, group_len: usize) -> f64 {
    let served = cfg.mmw_quota.min(group_len);
    match cfg.mmw_time_mode {
        MmwTimeMode::Fixed => cfg.mmw_tx_time_s,
        MmwTimeMode::Split if served > 0 => {
            (cfg.slot_duration_s - served as f64 * cfg.mmw_tx_time_s) / served as f64
        }
        MmwTimeMode::Split => cfg.mmw_tx_time_s,
    }
}

/// Check one slot against the group it was meant to serve.
pub fn check_slot(
    cfg: &ScenarioConfig,
    demands: &[f64],
    maps: &BandNoiseMaps,
    group: &[usize],
    alloc: &SlotAllocation,
) -> Vec<Violation> {
    let mut violations = Vec::new();
    let group_set: BTreeSet<usize> = group.iter().copied().collect();
    let slot = alloc.slot;

    // mmW quota: exactly min(N', |group|) UAs selected
    let expected = cfg.mmw_quota.min(group.len());
    if alloc.mmw.selected.len() != expected {
        push(
            &mut violations,
            "mmw-quota",
            format!("slot {slot}: selected {} UAs, quota demands {expected}", alloc.mmw.selected.len()),
        );
    }

    let selected: BTreeSet<usize> = alloc.mmw.selected.iter().copied().collect();
    if selected.len() != alloc.mmw.selected.len() {
        push(&mut violations, "mmw-quota", format!("slot {slot}: duplicate mmW selection"));
    }
    for ua in &selected {
        if !group_set.contains(ua) {
            push(&mut violations, "group-membership", format!("slot {slot}: mmW UA {ua} not in group"));
        }
    }

    let muw_set: BTreeSet<usize> = alloc.muw.ua_ids.iter().copied().collect();
    for ua in &muw_set {
        if !group_set.contains(ua) {
            push(&mut violations, "group-membership", format!("slot {slot}: µW UA {ua} not in group"));
        }
    }

    // band exclusivity: a_nkt · S_nt = 0
    for ua in selected.intersection(&muw_set) {
        push(&mut violations, "band-exclusivity", format!("slot {slot}: UA {ua} on both bands"));
    }

    // every group member lands on exactly one band
    for ua in &group_set {
        if !selected.contains(ua) && !muw_set.contains(ua) {
            push(&mut violations, "group-coverage", format!("slot {slot}: UA {ua} served on neither band"));
        }
    }

    // µW RB exclusivity, from the per-UA solutions themselves
    let k1 = maps.muw.num_rbs;
    let mut rb_users: Vec<Option<usize>> = vec![None; k1];
    for (ua, sol) in &alloc.muw.solutions {
        for &rb in &sol.active {
            if let Some(other) = rb_users[rb] {
                push(
                    &mut violations,
                    "rb-exclusivity",
                    format!("slot {slot}: µW RB {rb} powered by both UA {other} and UA {ua}"),
                );
            }
            rb_users[rb] = Some(*ua);
        }
    }
    // ownership map consistent with powered RBs
    for (rb, user) in rb_users.iter().enumerate() {
        if let Some(ua) = user {
            if alloc.muw.rb_owner[rb] != Some(*ua) {
                push(
                    &mut violations,
                    "rb-exclusivity",
                    format!("slot {slot}: RB {rb} powered by UA {ua} but owned by {:?}", alloc.muw.rb_owner[rb]),
                );
            }
        }
    }

    // every µW UA with positive demand owns at least one RB
    for ua in &muw_set {
        if demands[*ua] > 0.0 && !alloc.muw.rb_owner.iter().any(|o| *o == Some(*ua)) {
            push(&mut violations, "muw-ownership", format!("slot {slot}: µW UA {ua} owns no RB"));
        }
    }

    // µW demand satisfaction re-derived from powers and noises
    for (ua, sol) in &alloc.muw.solutions {
        let row = maps.muw.row_for_ua(*ua, slot);
        let mut delivered = 0.0;
        for rb in 0..k1 {
            let p = sol.per_rb_power[rb];
            if p < 0.0 || !p.is_finite() {
                push(&mut violations, "power-sanity", format!("slot {slot}: UA {ua} RB {rb} power {p}"));
            }
            if p > 0.0 {
                delivered += own_rate(p, row[rb], cfg.muw_rb_bandwidth_hz);
            }
        }
        let bits = cfg.slot_duration_s * delivered;
        let need = demands[*ua];
        if (bits - need).abs() > DEMAND_REL_TOL * need.max(1.0) {
            push(
                &mut violations,
                "muw-demand",
                format!("slot {slot}: UA {ua} delivered {bits} of {need} bits over µW"),
            );
        }
    }

    // mmW demand satisfaction
    let tx_time = own_mmw_time(cfg, group.len());
    for (ua, sol) in &alloc.mmw.solutions {
        let row = maps.mmw.row_for_ua(*ua, slot);
        let mut delivered = 0.0;
        for rb in 0..maps.mmw.num_rbs {
            let p = sol.per_rb_power[rb];
            if p < 0.0 || !p.is_finite() {
                push(&mut violations, "power-sanity", format!("slot {slot}: UA {ua} mmW RB {rb} power {p}"));
            }
            if p > 0.0 {
                delivered += own_rate(p, row[rb], cfg.mmw_rb_bandwidth_hz);
            }
        }
        let bits = tx_time * delivered;
        let need = demands[*ua];
        if (bits - need).abs() > DEMAND_REL_TOL * need.max(1.0) {
            push(
                &mut violations,
                "mmw-demand",
                format!("slot {slot}: UA {ua} delivered {bits} of {need} bits over mmW"),
            );
        }
    }

    violations
}

/// Check one class: the groups must partition the member set, and every
/// slot must pass [`check_slot`].
pub fn check_class(
    cfg: &ScenarioConfig,
    demands: &[f64],
    maps: &BandNoiseMaps,
    members: &[usize],
    report: &crate::runner::ClassReport,
) -> Vec<Violation> {
    let mut violations = Vec::new();
    let member_set: BTreeSet<usize> = members.iter().copied().collect();

    if report.assignment.groups.len() != report.horizon {
        push(
            &mut violations,
            "group-count",
            format!("{} groups for horizon {}", report.assignment.groups.len(), report.horizon),
        );
    }
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut total = 0usize;
    for group in &report.assignment.groups {
        total += group.len();
        for &ua in group {
            if !member_set.contains(&ua) {
                push(&mut violations, "partition", format!("UA {ua} grouped but not in class"));
            }
            if !seen.insert(ua) {
                push(&mut violations, "partition", format!("UA {ua} appears in two groups"));
            }
        }
    }
    if total != members.len() || seen != member_set {
        push(
            &mut violations,
            "partition",
            format!("groups cover {total} UAs, class has {}", members.len()),
        );
    }

    if report.slots.len() != report.horizon {
        push(
            &mut violations,
            "slot-count",
            format!("{} slots for horizon {}", report.slots.len(), report.horizon),
        );
    }
    for (t, slot) in report.slots.iter().enumerate() {
        if slot.slot != t {
            push(&mut violations, "slot-count", format!("slot index {} at position {t}", slot.slot));
        }
        violations.extend(check_slot(cfg, demands, maps, &report.assignment.groups[t], slot));
    }

    violations
}

/// Re-derive the trial's topology and channel from its seed and audit every
/// class and slot, plus the report's own totals.
pub fn check_trial(cfg: &ScenarioConfig, report: &TrialReport) -> Vec<Violation> {
    let (mut rng_topo, mut rng_chan, _) = trial_streams(report.seed);
    let topo = generate_topology(cfg, &mut rng_topo);
    let maps_per_class = class_noise_maps(cfg, &topo, &mut rng_chan);
    let demands: Vec<f64> = topo.uas.iter().map(|ua| ua.demand_bits).collect();

    let mut violations = Vec::new();
    if report.classes.len() != topo.classes.len() {
        push(
            &mut violations,
            "class-count",
            format!("report has {} classes, topology {}", report.classes.len(), topo.classes.len()),
        );
        return violations;
    }
    for ((class, maps), class_report) in topo.classes.iter().zip(&maps_per_class).zip(&report.classes)
    {
        violations.extend(check_class(cfg, &demands, maps, &class.members, class_report));

        let muw: f64 = class_report.slots.iter().map(|s| s.muw.total_power).sum();
        let mmw: f64 = class_report.slots.iter().map(|s| s.mmw.total_power).sum();
        if (muw - class_report.muw_power).abs() > 1e-9 * muw.max(1.0)
            || (mmw - class_report.mmw_power).abs() > 1e-9 * mmw.max(1.0)
        {
            push(&mut violations, "totals", "class totals do not match slot sums".to_string());
        }
    }
    let muw: f64 = report.classes.iter().map(|c| c.muw_power).sum();
    let mmw: f64 = report.classes.iter().map(|c| c.mmw_power).sum();
    if (report.muw_power - muw).abs() > 1e-9 * muw.max(1.0)
        || (report.mmw_power - mmw).abs() > 1e-9 * mmw.max(1.0)
        || (report.total_power - (muw + mmw)).abs() > 1e-9 * (muw + mmw).max(1.0)
    {
        push(&mut violations, "totals", "trial totals do not match class sums".to_string());
    }

    violations
}
