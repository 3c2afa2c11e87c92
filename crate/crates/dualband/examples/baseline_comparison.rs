//! Paired comparison of the full pipeline against its baselines.
//!
//! ```bash
//! cargo run --release --example baseline_comparison
//! ```
//!
//! All four algorithms see identical topologies and channels per seed (the
//! seed feeds separate topology/channel/algorithm random streams), so the
//! per-seed differences isolate the allocation strategy itself.

use dualband::runner::{mean, run_trials, Algorithm};
use dualband::scenario::ScenarioConfig;

fn main() {
    let cfg = ScenarioConfig { num_ues: 20, qos_horizons: vec![2], ..Default::default() };
    let trials = 40;

    println!("{} UEs x {} UAs, {} paired trials per algorithm\n", cfg.num_ues, cfg.uas_per_ue, trials);
    println!("{:<18} {:>12} {:>12} {:>12}", "algorithm", "µW mean W", "mmW mean W", "total W");

    let mut eod_muw = Vec::new();
    let mut rr_muw = Vec::new();
    for algorithm in Algorithm::ALL {
        let reports = run_trials(&cfg, algorithm, cfg.rng_seed, trials).unwrap();
        let muw: Vec<f64> = reports.iter().map(|r| r.muw_power).collect();
        let mmw: Vec<f64> = reports.iter().map(|r| r.mmw_power).collect();
        let tot: Vec<f64> = reports.iter().map(|r| r.total_power).collect();
        println!(
            "{:<18} {:>12.4e} {:>12.4e} {:>12.4e}",
            algorithm.name(),
            mean(&muw),
            mean(&mmw),
            mean(&tot)
        );
        match algorithm {
            Algorithm::GbEod => eod_muw = muw,
            Algorithm::RoundRobin => rr_muw = muw,
            _ => {}
        }
    }

    let wins = eod_muw.iter().zip(&rr_muw).filter(|(e, r)| e <= r).count();
    println!("\ngb-eod needs no more µW power than round-robin on {wins}/{trials} paired draws");
}
