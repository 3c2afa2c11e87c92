//! Sweep the per-slot mmW quota and watch total power dip and rise.
//!
//! ```bash
//! cargo run --release --example quota_sweep
//! ```
//!
//! With slot-splitting mmW time semantics the band congests as the quota
//! grows: pushing UAs onto mmW first relieves the crowded µW band, then
//! the shrinking per-UA transmit time makes mmW itself expensive. The
//! resulting mean-total-power curve has an interior minimum.

use dualband::runner::{sweep, Algorithm, SweepVariable};
use dualband::scenario::{MmwTimeMode, ScenarioConfig};

fn main() {
    let cfg = ScenarioConfig {
        num_ues: 42,
        qos_horizons: vec![3],
        mmw_time_mode: MmwTimeMode::Split,
        ..Default::default()
    };
    let values = [20, 25, 30, 35, 40];
    let trials = 20; // use 100+ for smooth curves

    println!("{} UAs per group, sweeping mmw_quota over {values:?} ({} trials/point)\n", 42, trials);
    let table = sweep(&cfg, SweepVariable::MmwQuota, &values, trials, Algorithm::GbEod);

    println!("{:>6} {:>13} {:>13} {:>13} {:>11}", "quota", "µW mean W", "mmW mean W", "total W", "se total");
    for p in &table.points {
        println!(
            "{:>6} {:>13.4e} {:>13.4e} {:>13.4e} {:>11.2e}",
            p.value, p.mean_muw, p.mean_mmw, p.mean_total, p.se_total
        );
    }

    let argmin = table
        .points
        .iter()
        .min_by(|a, b| a.mean_total.partial_cmp(&b.mean_total).unwrap())
        .unwrap();
    println!("\nminimum mean total power at quota {}", argmin.value);
}
