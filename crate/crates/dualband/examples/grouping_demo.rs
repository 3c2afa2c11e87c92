//! Balanced grouping of a QoS class into slot groups.
//!
//! ```bash
//! cargo run --example grouping_demo
//! ```
//!
//! Each UA gets a distance-only power proxy; the heuristic balances both
//! group sizes and group power sums. The balance objective is zero for a
//! perfectly even split, and random partitions are shown for contrast.

use dualband::grouping::{group_users, proxy_power, GroupAssignment};
use dualband::scenario::{generate_topology, ScenarioConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let cfg = ScenarioConfig { num_ues: 9, qos_horizons: vec![3], ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let topo = generate_topology(&cfg, &mut rng);
    let members: Vec<(usize, f64)> = topo.classes[0]
        .members
        .iter()
        .map(|&id| (id, proxy_power(&topo.uas[id], &cfg)))
        .collect();

    let ga = group_users(&members, 3, cfg.eta, cfg.gamma);
    println!("{} UAs into {} groups (eta {}, gamma {}):", members.len(), ga.horizon, cfg.eta, cfg.gamma);
    for (t, group) in ga.groups.iter().enumerate() {
        let power: f64 = group.iter().map(|ua| ga.proxy_power[ua]).sum();
        println!("  slot {t}: {:>2} UAs, proxy power {power:.4e} W — {group:?}", group.len());
    }
    println!("balance objective: {:.6}\n", ga.objective());

    // a few random partitions for comparison
    let mut worse = 0;
    let samples = 20;
    for i in 0..samples {
        let mut ids: Vec<usize> = members.iter().map(|&(id, _)| id).collect();
        for j in (1..ids.len()).rev() {
            ids.swap(j, rng.gen_range(0..=j));
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); 3];
        for (j, &ua) in ids.iter().enumerate() {
            let g = if j < 3 { j } else { rng.gen_range(0..3) };
            groups[g].push(ua);
        }
        let random = GroupAssignment {
            horizon: 3,
            groups,
            proxy_power: members.iter().copied().collect(),
        };
        if random.objective() >= ga.objective() {
            worse += 1;
        }
        if i < 3 {
            println!("random partition {i}: objective {:.6}", random.objective());
        }
    }
    println!("... heuristic beats or ties {worse}/{samples} random partitions");
}
