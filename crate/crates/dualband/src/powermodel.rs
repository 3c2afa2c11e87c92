//! Rate/power conversions and the closed-form minimum-power split of a
//! fixed demand across a set of resource blocks.
//!
//! On every RB the achievable rate is `ω·log2(1 + p/N)` with `N` the RB's
//! effective noise. Minimizing total power for a demand of `b` bits over a
//! candidate RB set is a convex program whose optimum is water-filling: the
//! active RBs share a common water level `G` and each carries `G − N_r`
//! watts. `G` follows in closed form from the geometric mean of the active
//! noises, and the active set itself is found by growing a sorted prefix.

use std::f64::consts::LN_2;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PowerError {
    #[error("rate must be non-negative, got {0}")]
    NegativeRate(f64),
    #[error("power must be non-negative, got {0}")]
    NegativePower(f64),
}

/// Power needed to carry `rate_bps` on one RB of bandwidth `rb_bandwidth_hz`
/// against effective noise `noise_w`: `N·(2^(R/ω) − 1)`.
pub fn power_from_rate(noise_w: f64, rate_bps: f64, rb_bandwidth_hz: f64) -> Result<f64, PowerError> {
    debug_assert!(noise_w > 0.0 && rb_bandwidth_hz > 0.0);
    if rate_bps < 0.0 {
        return Err(PowerError::NegativeRate(rate_bps));
    }
    // exp_m1 keeps precision when rate/ω is tiny.
    Ok(noise_w * (rate_bps / rb_bandwidth_hz * LN_2).exp_m1())
}

/// Inverse of [`power_from_rate`]: `ω·log2(1 + p/N)`.
pub fn rate_from_power(noise_w: f64, power_w: f64, rb_bandwidth_hz: f64) -> Result<f64, PowerError> {
    debug_assert!(noise_w > 0.0 && rb_bandwidth_hz > 0.0);
    if power_w < 0.0 {
        return Err(PowerError::NegativePower(power_w));
    }
    Ok(rb_bandwidth_hz * (power_w / noise_w).ln_1p() / LN_2)
}

/// Minimum-power allocation of one demand over a candidate RB set.
#[derive(Debug, Clone, PartialEq)]
pub struct RbSetSolution {
    /// Indices (into the input noise slice) of RBs carrying positive power.
    pub active: Vec<usize>,
    /// Per-RB transmit power in W; zero on inactive RBs.
    pub per_rb_power: Vec<f64>,
    /// Per-RB rate in bit/s; zero on inactive RBs.
    pub per_rb_rate: Vec<f64>,
    /// Sum of `per_rb_power`.
    pub total_power: f64,
}

impl RbSetSolution {
    pub fn zero(num_rbs: usize) -> Self {
        RbSetSolution {
            active: Vec::new(),
            per_rb_power: vec![0.0; num_rbs],
            per_rb_rate: vec![0.0; num_rbs],
            total_power: 0.0,
        }
    }
}

/// Water-filling: minimum total power to deliver `bits` within `duration_s`
/// over the RBs whose effective noises are `noises` (all of bandwidth
/// `rb_bandwidth_hz`).
///
/// The water level over an active set `A` is
/// `G = (Π_{r∈A} N_r)^(1/|A|) · 2^(b/(τ·ω·|A|))` and each active RB carries
/// `G − N_r`. The optimal `A` is the longest ascending-noise prefix in which
/// every included noise stays strictly below its own prefix water level; the
/// geometric mean is taken in log2 domain so thousands of RBs cannot
/// overflow. An RB whose noise ties the water level exactly is left inactive
/// (it would carry zero power either way); equal noises are ordered by index
/// so the outcome is deterministic.
///
/// Any nonempty candidate set is feasible at finite power, so this cannot
/// fail; `bits = 0` yields the all-zero solution.
pub fn min_power_waterfill(
    noises: &[f64],
    bits: f64,
    duration_s: f64,
    rb_bandwidth_hz: f64,
) -> RbSetSolution {
    assert!(!noises.is_empty(), "waterfill needs at least one candidate RB");
    assert!(bits >= 0.0, "demand must be non-negative");
    assert!(duration_s > 0.0 && rb_bandwidth_hz > 0.0);
    debug_assert!(noises.iter().all(|n| n.is_finite() && *n > 0.0));

    let k = noises.len();
    if bits == 0.0 {
        return RbSetSolution::zero(k);
    }

    // Total demand expressed in units of per-RB bandwidth: Σ R_r/ω = c.
    let c = bits / (duration_s * rb_bandwidth_hz);

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| noises[a].partial_cmp(&noises[b]).unwrap().then(a.cmp(&b)));

    // Grow the sorted prefix; keep the largest j with N_(j) < G_j. Every
    // earlier noise is then below G_j as well, and the first excluded noise
    // is provably at or above it.
    let mut log2_sum = 0.0;
    let mut best_j = 0;
    let mut best_log2_level = 0.0;
    for (j, &idx) in order.iter().enumerate() {
        let log2_n = noises[idx].log2();
        log2_sum += log2_n;
        let log2_level = (log2_sum + c) / (j + 1) as f64;
        if log2_n < log2_level {
            best_j = j + 1;
            best_log2_level = log2_level;
        }
    }
    debug_assert!(best_j >= 1, "prefix of size 1 always satisfies N < N·2^c for c > 0");

    let level = best_log2_level.exp2();
    let mut sol = RbSetSolution::zero(k);
    for &idx in &order[..best_j] {
        sol.per_rb_power[idx] = level - noises[idx];
        sol.per_rb_rate[idx] = rb_bandwidth_hz * (best_log2_level - noises[idx].log2());
        sol.total_power += sol.per_rb_power[idx];
    }
    let mut active: Vec<usize> = order[..best_j].to_vec();
    active.sort_unstable();
    sol.active = active;
    sol
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn power_from_rate_zero_rate_is_zero() {
        assert_eq!(power_from_rate(1.0, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn power_from_rate_doubling_bandwidth_rate() {
        // noise=1, ω=1, rate=1 → 2^1 − 1 = 1
        assert!((power_from_rate(1.0, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn power_from_rate_megabit_over_one_rb() {
        // 2^(1e6/1.8e5) − 1, cross-checked against exp2 evaluation
        let p = power_from_rate(1.0, 1.0e6, 1.8e5).unwrap();
        assert!((p - 46.031_503_752_819_15).abs() / 46.0 < 1e-12, "got {p}");
    }

    #[test]
    fn power_from_rate_rejects_negative_rate() {
        assert_eq!(
            power_from_rate(1.0, -2.0, 1.0),
            Err(PowerError::NegativeRate(-2.0))
        );
    }

    #[test]
    fn rate_from_power_examples() {
        assert_eq!(rate_from_power(1.0, 0.0, 1.0).unwrap(), 0.0);
        // noise=1, ω=1, power=3 → log2 4 = 2
        assert!((rate_from_power(1.0, 3.0, 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(rate_from_power(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn rate_power_round_trip() {
        let omega = 1.8e5;
        let rate = 5.5556 * omega;
        let p = power_from_rate(2.3e-14, rate, omega).unwrap();
        let back = rate_from_power(2.3e-14, p, omega).unwrap();
        assert!((back - rate).abs() / rate < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let noise = 10f64.powf(rng.gen_range(-18.0..-6.0));
            let rate = rng.gen_range(0.0..2.0e6);
            let back = rate_from_power(noise, power_from_rate(noise, rate, omega).unwrap(), omega).unwrap();
            assert!((back - rate).abs() <= 1e-12 * rate.max(1.0), "rate {rate} -> {back}");
        }
    }

    #[test]
    fn waterfill_zero_demand() {
        let sol = min_power_waterfill(&[3.0, 1.0, 2.0], 0.0, 1.0, 1.0);
        assert_eq!(sol.total_power, 0.0);
        assert!(sol.active.is_empty());
        assert!(sol.per_rb_rate.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn waterfill_drops_hopeless_rb() {
        // noises [1, 100] with b/(τω) = 1: level over {0} is 2, RB 1 stays out
        let sol = min_power_waterfill(&[1.0, 100.0], 1.0, 1.0, 1.0);
        assert_eq!(sol.active, vec![0]);
        assert!((sol.total_power - 1.0).abs() < 1e-12);
        assert_eq!(sol.per_rb_power[1], 0.0);
    }

    #[test]
    fn waterfill_symmetric_set() {
        // four equal noises, b/(τω) = 4: level 2, power 1 per RB
        let sol = min_power_waterfill(&[1.0, 1.0, 1.0, 1.0], 4.0, 1.0, 1.0);
        assert_eq!(sol.active, vec![0, 1, 2, 3]);
        for r in 0..4 {
            assert!((sol.per_rb_power[r] - 1.0).abs() < 1e-12);
        }
        assert!((sol.total_power - 4.0).abs() < 1e-12);
    }

    #[test]
    fn waterfill_meets_demand_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let k = rng.gen_range(1..=10);
            let noises: Vec<f64> = (0..k).map(|_| 10f64.powf(rng.gen_range(-16.0..-10.0))).collect();
            let bits = rng.gen_range(1.0..5.0e4);
            let sol = min_power_waterfill(&noises, bits, 0.01, 1.8e5);
            let delivered = 0.01 * sol.per_rb_rate.iter().sum::<f64>();
            assert!(
                (delivered - bits).abs() / bits < 1e-9,
                "delivered {delivered} vs demand {bits}"
            );
            assert!(sol.per_rb_power.iter().all(|&p| p >= 0.0));
            let sum: f64 = sol.per_rb_power.iter().sum();
            assert!((sum - sol.total_power).abs() <= 1e-12 * sol.total_power);
        }
    }

    #[test]
    fn waterfill_matches_subset_enumeration_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let k = rng.gen_range(1..=8);
            let noises: Vec<f64> = (0..k).map(|_| 10f64.powf(rng.gen_range(-18.0..-12.0))).collect();
            let bits = rng.gen_range(100.0..2.0e4);
            let sol = min_power_waterfill(&noises, bits, 0.01, 1.8e5);
            let best = crate::oracle::waterfill_min_by_subsets(&noises, bits, 0.01, 1.8e5);
            assert!(
                (sol.total_power - best).abs() / best < 1e-9,
                "waterfill {} vs oracle {best}",
                sol.total_power
            );
        }
    }

    #[test]
    fn waterfill_homogeneous_in_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let k = rng.gen_range(1..=8);
            let noises: Vec<f64> = (0..k).map(|_| 10f64.powf(rng.gen_range(-16.0..-10.0))).collect();
            let bits = rng.gen_range(10.0..1.0e4);
            let base = min_power_waterfill(&noises, bits, 0.01, 1.8e5);

            let c = if rng.gen_bool(0.5) { 2.0 } else { rng.gen_range(0.1..10.0) };
            let scaled_noises: Vec<f64> = noises.iter().map(|n| n * c).collect();
            let scaled = min_power_waterfill(&scaled_noises, bits, 0.01, 1.8e5);
            assert_eq!(scaled.active, base.active, "active set must not move under scaling");
            assert!(
                (scaled.total_power - base.total_power * c).abs() / (base.total_power * c) < 1e-12,
                "total power must scale linearly with the noises"
            );
            for r in 0..k {
                assert!((scaled.per_rb_rate[r] - base.per_rb_rate[r]).abs() <= 1e-9 * base.per_rb_rate[r].max(1.0));
            }
        }
    }

    #[test]
    fn waterfill_monotone_in_candidate_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..200 {
            let k = rng.gen_range(2..=8);
            let noises: Vec<f64> = (0..k).map(|_| 10f64.powf(rng.gen_range(-16.0..-10.0))).collect();
            let bits = rng.gen_range(10.0..1.0e4);
            let full = min_power_waterfill(&noises, bits, 0.01, 1.8e5).total_power;
            let drop = rng.gen_range(0..k);
            let reduced: Vec<f64> = noises
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != drop)
                .map(|(_, &n)| n)
                .collect();
            let smaller = min_power_waterfill(&reduced, bits, 0.01, 1.8e5).total_power;
            assert!(
                smaller >= full * (1.0 - 1e-12),
                "removing an RB reduced power: {smaller} < {full}"
            );
        }
    }

    #[test]
    fn waterfill_ties_excluded_deterministically() {
        // Second RB's noise exactly equals the single-RB water level: stays out.
        let sol = min_power_waterfill(&[1.0, 2.0], 1.0, 1.0, 1.0);
        assert_eq!(sol.active, vec![0]);
        assert_eq!(sol.per_rb_power[1], 0.0);
    }
}
