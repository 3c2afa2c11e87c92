//! Scenario configuration and random topology generation.
//!
//! A scenario is a flat key/value configuration (every physical, protocol
//! and algorithm parameter of the simulated cell) plus the randomly drawn
//! user population: each user equipment (UE) sits at a uniform position in
//! the annulus around the base station and hosts a fixed number of user
//! applications (UAs), the unit everything downstream allocates for.
//! Topology generation is a pure function of `(config, seed)`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse config file: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config field `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field, reason: reason.into() }
}

/// How UE distances are drawn over `[min_distance_m, cell_radius_m]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RadialMode {
    /// Uniform in radius (default).
    #[default]
    UniformRadius,
    /// Uniform in area (density-uniform over the annulus).
    UniformArea,
}

/// Meaning of `mmw_tx_time_s` for a UA served over the mmW band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MmwTimeMode {
    /// `mmw_tx_time_s` is the per-UA transmission time directly (default).
    #[default]
    Fixed,
    /// `mmw_tx_time_s` is per-UA beam-training overhead; the served UAs split
    /// the remainder of the slot equally:
    /// `tx = (slot_duration − n_served·overhead) / n_served`.
    Split,
}

/// Whether infeasibility escalation bumps every µW UA or only unmet ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EscalationMode {
    #[default]
    Global,
    PerUa,
}

/// All scenario parameters, flat so the on-disk form is plain `key = value`
/// lines. Every field has a default (see README for the full table); a file
/// only needs the fields it overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub cell_radius_m: f64,
    pub min_distance_m: f64,
    /// Number of UEs, M.
    pub num_ues: usize,
    /// UAs hosted per UE, κ.
    pub uas_per_ue: usize,
    /// Demand per UA in bits per scheduling horizon.
    pub bits_required: f64,
    pub muw_total_bandwidth_hz: f64,
    pub muw_rb_bandwidth_hz: f64,
    pub mmw_total_bandwidth_hz: f64,
    pub mmw_rb_bandwidth_hz: f64,
    /// Slot duration τ in seconds.
    pub slot_duration_s: f64,
    /// Per-UA mmW time τ′ in seconds (see [`MmwTimeMode`]).
    pub mmw_tx_time_s: f64,
    /// Noise power spectral density N0 in W/Hz.
    pub noise_density_w_per_hz: f64,
    pub muw_pathloss_alpha_db: f64,
    pub muw_pathloss_beta: f64,
    pub muw_shadow_sigma_db: f64,
    pub mmw_pathloss_alpha_db: f64,
    pub mmw_pathloss_beta: f64,
    pub mmw_shadow_sigma_db: f64,
    /// Rician K-factor of the mmW small-scale fading.
    pub rician_k: f64,
    /// Beamforming gain ψ in dBi applied on the mmW band.
    pub beam_gain_dbi: f64,
    /// Number of UAs served over mmW per slot, N′.
    pub mmw_quota: usize,
    /// Escalation step Δ added to log2(−β) while the µW assignment is infeasible.
    pub step: f64,
    /// Grouping weight on group-size balance.
    pub eta: f64,
    /// Grouping weight on group-power balance.
    pub gamma: f64,
    /// QoS horizons (slot counts) UAs are drawn from, uniformly when several.
    pub qos_horizons: Vec<usize>,
    pub rng_seed: u64,
    pub radial_mode: RadialMode,
    pub mmw_time_mode: MmwTimeMode,
    pub escalation_mode: EscalationMode,
    /// Hard cap on escalation rounds; hitting it means the µW band cannot
    /// carry the group (more UAs than RBs).
    pub escalation_max_iters: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            cell_radius_m: 200.0,
            min_distance_m: 5.0,
            num_ues: 10,
            uas_per_ue: 3,
            bits_required: 10_000.0,
            muw_total_bandwidth_hz: 10.0e6,
            muw_rb_bandwidth_hz: 180.0e3,
            mmw_total_bandwidth_hz: 1.0e9,
            mmw_rb_bandwidth_hz: 180.0e3,
            slot_duration_s: 10.0e-3,
            mmw_tx_time_s: 0.1e-3,
            // thermal noise floor, −174 dBm/Hz
            noise_density_w_per_hz: 3.981_071_705_534_985e-21,
            muw_pathloss_alpha_db: 38.0,
            muw_pathloss_beta: 3.0,
            muw_shadow_sigma_db: 10.0,
            mmw_pathloss_alpha_db: 70.0,
            mmw_pathloss_beta: 2.0,
            mmw_shadow_sigma_db: 5.2,
            rician_k: 2.4,
            beam_gain_dbi: 18.0,
            mmw_quota: 20,
            step: 0.01,
            eta: 1.0,
            gamma: 1.0,
            qos_horizons: vec![2],
            rng_seed: 1,
            radial_mode: RadialMode::default(),
            mmw_time_mode: MmwTimeMode::default(),
            escalation_mode: EscalationMode::default(),
            escalation_max_iters: 1_000_000,
        }
    }
}

impl ScenarioConfig {
    /// Number of µW RBs, `K₁ = floor(Ω₁/ω₁)`.
    pub fn muw_rb_count(&self) -> usize {
        (self.muw_total_bandwidth_hz / self.muw_rb_bandwidth_hz).floor() as usize
    }

    /// Number of mmW RBs, `K₂ = floor(Ω₂/ω₂)`.
    pub fn mmw_rb_count(&self) -> usize {
        (self.mmw_total_bandwidth_hz / self.mmw_rb_bandwidth_hz).floor() as usize
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.cell_radius_m > 0.0) {
            return Err(invalid("cell_radius_m", "must be positive"));
        }
        if !(self.min_distance_m > 0.0 && self.min_distance_m < self.cell_radius_m) {
            return Err(invalid(
                "min_distance_m",
                format!("must satisfy 0 < min_distance_m < cell_radius_m, got {}", self.min_distance_m),
            ));
        }
        if self.num_ues == 0 {
            return Err(invalid("num_ues", "must be at least 1"));
        }
        if self.uas_per_ue == 0 {
            return Err(invalid("uas_per_ue", "must be at least 1"));
        }
        if !(self.bits_required > 0.0) {
            return Err(invalid("bits_required", "must be positive"));
        }
        if !(self.muw_rb_bandwidth_hz > 0.0) {
            return Err(invalid("muw_rb_bandwidth_hz", "must be positive"));
        }
        if !(self.mmw_rb_bandwidth_hz > 0.0) {
            return Err(invalid("mmw_rb_bandwidth_hz", "must be positive"));
        }
        if self.muw_rb_count() < 1 {
            return Err(invalid("muw_total_bandwidth_hz", "must fit at least one RB"));
        }
        if self.mmw_rb_count() < 1 {
            return Err(invalid("mmw_total_bandwidth_hz", "must fit at least one RB"));
        }
        if !(self.slot_duration_s > 0.0) {
            return Err(invalid("slot_duration_s", "must be positive"));
        }
        if !(self.mmw_tx_time_s > 0.0) {
            return Err(invalid("mmw_tx_time_s", "must be positive"));
        }
        if !(self.noise_density_w_per_hz > 0.0) {
            return Err(invalid("noise_density_w_per_hz", "must be positive"));
        }
        if !(self.muw_pathloss_beta > 0.0) {
            return Err(invalid("muw_pathloss_beta", "must be positive"));
        }
        if !(self.mmw_pathloss_beta > 0.0) {
            return Err(invalid("mmw_pathloss_beta", "must be positive"));
        }
        if self.muw_shadow_sigma_db < 0.0 {
            return Err(invalid("muw_shadow_sigma_db", "must be non-negative"));
        }
        if self.mmw_shadow_sigma_db < 0.0 {
            return Err(invalid("mmw_shadow_sigma_db", "must be non-negative"));
        }
        if self.rician_k < 0.0 {
            return Err(invalid("rician_k", "must be non-negative"));
        }
        if !(self.step > 0.0) {
            return Err(invalid("step", "must be positive"));
        }
        if self.qos_horizons.is_empty() || self.qos_horizons.contains(&0) {
            return Err(invalid("qos_horizons", "must list at least one horizon, all >= 1"));
        }
        if self.escalation_max_iters == 0 {
            return Err(invalid("escalation_max_iters", "must be at least 1"));
        }
        if self.mmw_time_mode == MmwTimeMode::Split
            && self.mmw_quota > 0
            && self.slot_duration_s <= self.mmw_quota as f64 * self.mmw_tx_time_s
        {
            return Err(invalid(
                "mmw_tx_time_s",
                "in split mode the slot must be longer than mmw_quota × overhead",
            ));
        }
        Ok(())
    }
}

/// Parse a config from its on-disk text form and validate it.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let cfg: ScenarioConfig = toml::from_str(text)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Load and validate a config file. Missing fields take their defaults.
pub fn load_config(path: impl AsRef<Path>) -> Result<ScenarioConfig, ConfigError> {
    parse_config(&std::fs::read_to_string(path)?)
}

/// One application instance running on a UE.
#[derive(Debug, Clone, PartialEq)]
pub struct UserApp {
    pub ua_id: usize,
    pub ue_id: usize,
    /// Distance of the hosting UE from the base station, meters.
    pub distance_m: f64,
    /// Angular position of the hosting UE, radians.
    pub angle_rad: f64,
    /// Bits this UA must receive within its QoS horizon.
    pub demand_bits: f64,
    /// Maximum slots this UA tolerates, T.
    pub qos_horizon: usize,
}

/// All UAs tolerating the same horizon T.
#[derive(Debug, Clone, PartialEq)]
pub struct QosClass {
    pub horizon: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    /// `uas[i].ua_id == i`.
    pub uas: Vec<UserApp>,
    /// Nonempty classes, ascending by horizon; they partition the UA set.
    pub classes: Vec<QosClass>,
}

/// Draw the random topology: UE positions on the annulus, κ UAs per UE,
/// each UA's horizon drawn uniformly from `qos_horizons`.
pub fn generate_topology<R: Rng>(cfg: &ScenarioConfig, rng: &mut R) -> Topology {
    let mut uas = Vec::with_capacity(cfg.num_ues * cfg.uas_per_ue);
    for ue_id in 0..cfg.num_ues {
        let u: f64 = rng.gen();
        let distance_m = match cfg.radial_mode {
            RadialMode::UniformRadius => {
                cfg.min_distance_m + u * (cfg.cell_radius_m - cfg.min_distance_m)
            }
            RadialMode::UniformArea => {
                let r0 = cfg.min_distance_m * cfg.min_distance_m;
                let r1 = cfg.cell_radius_m * cfg.cell_radius_m;
                (r0 + u * (r1 - r0)).sqrt()
            }
        };
        let angle_rad = rng.gen::<f64>() * std::f64::consts::TAU;
        for _ in 0..cfg.uas_per_ue {
            let qos_horizon = if cfg.qos_horizons.len() > 1 {
                cfg.qos_horizons[rng.gen_range(0..cfg.qos_horizons.len())]
            } else {
                cfg.qos_horizons[0]
            };
            uas.push(UserApp {
                ua_id: uas.len(),
                ue_id,
                distance_m,
                angle_rad,
                demand_bits: cfg.bits_required,
                qos_horizon,
            });
        }
    }

    let mut horizons: Vec<usize> = cfg.qos_horizons.clone();
    horizons.sort_unstable();
    horizons.dedup();
    let classes: Vec<QosClass> = horizons
        .into_iter()
        .filter_map(|horizon| {
            let members: Vec<usize> =
                uas.iter().filter(|ua| ua.qos_horizon == horizon).map(|ua| ua.ua_id).collect();
            (!members.is_empty()).then_some(QosClass { horizon, members })
        })
        .collect();

    Topology { uas, classes }
}
