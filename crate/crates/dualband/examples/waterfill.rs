//! Closed-form minimum-power water-filling over a handful of RBs.
//!
//! ```bash
//! cargo run --example waterfill
//! ```
//!
//! Shows how the active set grows as the demand rises: cheap RBs fill
//! first, noisy RBs join only once the water level reaches them.

use dualband::powermodel::min_power_waterfill;

fn main() {
    let noises = [2.0e-15, 8.0e-15, 3.2e-14, 1.3e-13, 5.1e-13];
    let (tau, omega) = (0.01, 180.0e3);

    println!("effective noises (W): {noises:?}");
    println!("slot {tau} s, RB bandwidth {omega} Hz\n");

    for bits in [1.0e3, 1.0e4, 5.0e4, 2.0e5] {
        let sol = min_power_waterfill(&noises, bits, tau, omega);
        println!("demand {:>7.0} bits -> total {:.4e} W, active RBs {:?}", bits, sol.total_power, sol.active);
        for rb in 0..noises.len() {
            if sol.per_rb_power[rb] > 0.0 {
                println!(
                    "    RB {rb}: power {:.4e} W, rate {:.1} kbit/s",
                    sol.per_rb_power[rb],
                    sol.per_rb_rate[rb] / 1e3
                );
            }
        }
        let delivered: f64 = tau * sol.per_rb_rate.iter().sum::<f64>();
        println!("    delivers {delivered:.3} bits\n");
    }

    // scaling every noise by c scales the power bill by exactly c
    let sol = min_power_waterfill(&noises, 1.0e4, tau, omega);
    let scaled: Vec<f64> = noises.iter().map(|n| n * 10.0).collect();
    let sol10 = min_power_waterfill(&scaled, 1.0e4, tau, omega);
    println!(
        "noise x10 scales power x{:.6} (homogeneity)",
        sol10.total_power / sol.total_power
    );
}
