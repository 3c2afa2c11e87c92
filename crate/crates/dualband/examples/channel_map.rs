//! Draw a topology and build the per-band effective noise maps.
//!
//! ```bash
//! cargo run --example channel_map
//! ```
//!
//! The effective noise N_nkt folds path loss, shadowing, small-scale
//! fading and (on mmW) the beamforming gain into one number per
//! (UA, RB, slot) — the only channel quantity the allocators ever read.

use dualband::channel::build_noise_maps;
use dualband::scenario::{generate_topology, ScenarioConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn stats(values: impl Iterator<Item = f64>) -> (f64, f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = 0.0f64;
    let mut sum = 0.0;
    let mut count = 0usize;
    for v in values {
        min = min.min(v);
        max = max.max(v);
        sum += v;
        count += 1;
    }
    (min, sum / count as f64, max)
}

fn main() {
    let cfg = ScenarioConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let topo = generate_topology(&cfg, &mut rng);
    println!(
        "{} UEs hosting {} UAs, cell {}..{} m",
        cfg.num_ues,
        topo.uas.len(),
        cfg.min_distance_m,
        cfg.cell_radius_m
    );

    let slots = 2;
    let maps = build_noise_maps(&cfg, &topo.uas, slots, &mut rng);
    println!(
        "µW map: {} UAs x {} RBs x {slots} slots; mmW map: {} RBs",
        maps.muw.ua_ids.len(),
        maps.muw.num_rbs,
        maps.mmw.num_rbs
    );

    for ua in [0usize, topo.uas.len() - 1] {
        let d = topo.uas[ua].distance_m;
        let (lo, avg, hi) = stats(maps.muw.row(ua, 0).iter().copied());
        println!("UA {ua:>2} at {d:6.1} m — µW noise  min {lo:.3e}, mean {avg:.3e}, max {hi:.3e} W");
        let (lo, avg, hi) = stats(maps.mmw.row(ua, 0).iter().copied());
        println!("        {: >7}   mmW noise min {lo:.3e}, mean {avg:.3e}, max {hi:.3e} W", "");
    }

    // co-located UAs share the physical channel
    assert_eq!(maps.muw.row(0, 0), maps.muw.row(1, 0));
    println!("\nUAs 0 and 1 live on the same UE and see identical rows (shared channel).");
}
