//! Measure the allocator against the exhaustive optimum on desk-scale
//! instances (enabled by the `oracle` feature, which example builds get
//! automatically).
//!
//! ```bash
//! cargo run --release --example oracle_gap
//! ```

use dualband::oracle::{exact_muw_optimum, OracleBudget};
use dualband::runner::{class_noise_maps, run_trial, trial_streams, Algorithm};
use dualband::scenario::{generate_topology, ScenarioConfig};

fn main() {
    // three single-UA UEs on six µW RBs, nothing on mmW
    let cfg = ScenarioConfig {
        num_ues: 3,
        uas_per_ue: 1,
        muw_total_bandwidth_hz: 1.08e6,
        mmw_quota: 0,
        qos_horizons: vec![1],
        ..Default::default()
    };
    let budget = OracleBudget::default();
    let instances = 50;

    let mut gaps = Vec::new();
    for seed in 0..instances {
        let report = run_trial(&cfg, seed, Algorithm::GbEod).unwrap();
        let heuristic = report.classes[0].slots[0].muw.total_power;

        let (mut rng_topo, mut rng_chan, _) = trial_streams(seed);
        let topo = generate_topology(&cfg, &mut rng_topo);
        let maps = &class_noise_maps(&cfg, &topo, &mut rng_chan)[0];
        let rows: Vec<Vec<f64>> = topo.classes[0]
            .members
            .iter()
            .map(|&ua| maps.muw.row_for_ua(ua, 0).to_vec())
            .collect();
        let demands: Vec<f64> =
            topo.classes[0].members.iter().map(|&ua| topo.uas[ua].demand_bits).collect();
        let optimum =
            exact_muw_optimum(&rows, &demands, cfg.slot_duration_s, cfg.muw_rb_bandwidth_hz, &budget)
                .unwrap()
                .expect("always feasible")
                .total_power;
        gaps.push(heuristic / optimum);
    }

    gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let exact = gaps.iter().filter(|&&g| g < 1.0 + 1e-9).count();
    println!("{instances} instances of 3 UAs x 6 RBs, heuristic/optimum power ratio:");
    println!("  exact optimum reached: {exact}/{instances}");
    println!("  median {:.4}", gaps[gaps.len() / 2]);
    println!("  p90    {:.4}", gaps[gaps.len() * 9 / 10]);
    println!("  worst  {:.4}", gaps[gaps.len() - 1]);
}
