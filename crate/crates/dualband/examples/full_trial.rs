//! A complete trial — topology, grouping, every slot on both bands — plus
//! the independent constraint audit.
//!
//! ```bash
//! cargo run --example full_trial
//! ```

use dualband::audit::check_trial;
use dualband::runner::{run_trial, Algorithm};
use dualband::scenario::ScenarioConfig;

fn main() {
    let cfg = ScenarioConfig { num_ues: 20, qos_horizons: vec![2], ..Default::default() };
    let report = run_trial(&cfg, cfg.rng_seed, Algorithm::GbEod).unwrap();

    println!(
        "seed {} with {}: total {:.4e} W (µW {:.4e}, mmW {:.4e}) in {:.1} ms",
        report.seed,
        report.algorithm,
        report.total_power,
        report.muw_power,
        report.mmw_power,
        report.runtime_ms
    );
    for class in &report.classes {
        println!(
            "QoS class T={}: grouping objective {:.4}, {} slots",
            class.horizon, class.grouping_objective, class.slots.len()
        );
        for slot in &class.slots {
            println!(
                "  slot {}: mmW {:>2} UAs / {:.3e} W, µW {:>2} UAs / {:.3e} W, {} transfers",
                slot.slot,
                slot.mmw.selected.len(),
                slot.mmw.total_power,
                slot.muw.ua_ids.len(),
                slot.muw.total_power,
                slot.muw.transfers
            );
        }
    }

    let violations = check_trial(&cfg, &report);
    if violations.is_empty() {
        println!("audit: all scheduling constraints hold");
    } else {
        println!("audit found {} violation(s):", violations.len());
        for v in &violations {
            println!("  {v}");
        }
    }
}
