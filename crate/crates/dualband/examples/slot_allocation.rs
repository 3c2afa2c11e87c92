//! One slot end to end: greedy mmW selection, then the µW
//! estimate/escalate/settle/descend pipeline, with the descent trace.
//!
//! ```bash
//! cargo run --example slot_allocation
//! ```

use dualband::muw::allocate_slot;
use dualband::runner::{class_noise_maps, trial_streams};
use dualband::scenario::{generate_topology, ScenarioConfig};

fn main() {
    // one slot serving all 30 UAs: 20 on mmW, 10 on µW
    let cfg = ScenarioConfig { qos_horizons: vec![1], ..Default::default() };
    let (mut rng_topo, mut rng_chan, _) = trial_streams(42);
    let topo = generate_topology(&cfg, &mut rng_topo);
    let maps = &class_noise_maps(&cfg, &topo, &mut rng_chan)[0];
    let group = topo.classes[0].members.clone();

    let alloc = allocate_slot(&cfg, &topo.uas, maps, &group, 0).unwrap();

    println!("group of {} UAs, mmW quota {}", group.len(), cfg.mmw_quota);
    println!(
        "mmW: {} UAs, {:.4e} W total (cheapest-first greedy)",
        alloc.mmw.selected.len(),
        alloc.mmw.total_power
    );
    for (ua, sol) in alloc.mmw.solutions.iter().take(3) {
        println!(
            "    UA {ua:>2} at {:6.1} m: {:.4e} W over {} active RBs",
            topo.uas[*ua].distance_m,
            sol.total_power,
            sol.active.len()
        );
    }
    println!("    ...");

    println!(
        "µW:  {} UAs, {:.4e} W total, {} escalation(s), {} ownership transfer(s)",
        alloc.muw.ua_ids.len(),
        alloc.muw.total_power,
        alloc.muw.escalations,
        alloc.muw.transfers
    );
    for (ua, sol) in &alloc.muw.solutions {
        let owned = alloc.muw.rb_owner.iter().filter(|o| **o == Some(*ua)).count();
        println!(
            "    UA {ua:>2} at {:6.1} m: owns {owned:>2} RBs ({} powered), {:.4e} W",
            topo.uas[*ua].distance_m,
            sol.active.len(),
            sol.total_power
        );
    }

    if alloc.muw.trace.is_empty() {
        println!("descent: initial ownership already locally optimal");
    } else {
        println!("descent trace (RB donor -> receiver, µW total after):");
        for rec in &alloc.muw.trace {
            println!(
                "    step {:>3}: RB {:>2} moved {} -> {}, total {:.6e} W",
                rec.iteration, rec.rb, rec.donor, rec.receiver, rec.total_power
            );
        }
    }
}
