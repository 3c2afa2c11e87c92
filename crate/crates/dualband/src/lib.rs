//! Simulator and solver library for joint millimeter-wave / microwave
//! resource-block and power allocation at a dual-mode base station.
//!
//! The base station serves user applications (UAs) over two bands at once:
//! an OFDMA microwave band with Rayleigh fading and a TDMA millimeter-wave
//! band with Rician fading and beamforming gain. Scheduling happens in three
//! stages per QoS class:
//!
//! 1. **Grouping** — [`grouping::group_users`] partitions the class into one
//!    group per time slot, balancing group size and a deterministic per-UA
//!    power proxy.
//! 2. **mmW selection** — [`mmw::select_greedy`] picks the cheapest UAs (by
//!    closed-form minimum power over all mmW RBs) up to the per-slot quota.
//! 3. **µW allocation** — [`muw::allocate_slot`] runs the
//!    estimation/escalation/descent allocator: KKT-based rate estimates seed
//!    a feasible RB ownership map, water-filling settles exact powers, and a
//!    local search keeps transferring single-RB ownership while the best
//!    transfer still reduces total power.
//!
//! All power arithmetic reduces to the effective noise map built by
//! [`channel`] and the closed-form water-filling solver in [`powermodel`].
//! [`runner`] orchestrates whole trials and parameter sweeps (with
//! round-robin and random baselines) and [`audit`] re-checks every emitted
//! allocation against the scheduling constraints with independent math.
//!
//! Brute-force reference solvers live in [`oracle`] behind the `oracle`
//! feature; they are compiled for tests and examples only.
//!
//! Start with the `examples/` directory: each example is a runnable tour of
//! one capability (`cargo run --example full_trial`, etc.). A thin CLI over
//! [`runner`] is available as the `dualband` binary.

pub mod audit;
pub mod channel;
pub mod grouping;
pub mod mmw;
pub mod muw;
pub mod powermodel;
pub mod runner;
pub mod scenario;

#[cfg(feature = "oracle")]
pub mod oracle;

pub use channel::{Band, BandNoiseMaps, EffectiveNoiseMap};
pub use grouping::GroupAssignment;
pub use mmw::MmwSelection;
pub use muw::{MuwAllocation, SlotAllocation};
pub use powermodel::RbSetSolution;
pub use runner::{Algorithm, TrialReport};
pub use scenario::{ScenarioConfig, Topology, UserApp};
