//! Large-scale path loss, small-scale fading and the effective noise map.
//!
//! Everything the allocators need from the channel collapses into one number
//! per (UA, RB, slot, band): the effective noise
//!
//! ```text
//! N = ω·N0 / (gain · fading_power · 10^(−0.1·L(d)))
//! ```
//!
//! where `L(d) = α + 10β·log10(d) + X_σ` is the path loss with log-normal
//! shadowing, `fading_power` is `|g|²` (unit-mean Rayleigh on µW) or `|h|²`
//! (unit-mean Rician on mmW), and `gain` is the beamforming gain on mmW
//! only. Shadowing is drawn once per (UE, band) and held for the whole
//! trial; fading is block fading, redrawn per (UE, RB, slot) and shared by
//! the co-located UAs of one UE.

use crate::scenario::ScenarioConfig;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Normal, StandardNormal};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Band {
    Muw,
    Mmw,
}

impl Band {
    pub fn label(self) -> &'static str {
        match self {
            Band::Muw => "muw",
            Band::Mmw => "mmw",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossParams {
    pub alpha_db: f64,
    pub beta: f64,
    pub shadow_sigma_db: f64,
}

impl PathLossParams {
    pub fn of(cfg: &ScenarioConfig, band: Band) -> Self {
        match band {
            Band::Muw => PathLossParams {
                alpha_db: cfg.muw_pathloss_alpha_db,
                beta: cfg.muw_pathloss_beta,
                shadow_sigma_db: cfg.muw_shadow_sigma_db,
            },
            Band::Mmw => PathLossParams {
                alpha_db: cfg.mmw_pathloss_alpha_db,
                beta: cfg.mmw_pathloss_beta,
                shadow_sigma_db: cfg.mmw_shadow_sigma_db,
            },
        }
    }
}

#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// `α + 10β·log10(d) + shadow`, in dB.
pub fn path_loss_db(params: &PathLossParams, distance_m: f64, shadow_db: f64) -> Result<f64, ChannelError> {
    if distance_m <= 0.0 {
        return Err(ChannelError::NonPositiveDistance(distance_m));
    }
    Ok(params.alpha_db + 10.0 * params.beta * distance_m.log10() + shadow_db)
}

/// Beamforming gain (linear) seen by a UA at distance `_distance_m` on mmW.
///
/// Constant today; the distance argument is the hook for a range-dependent
/// gain profile.
pub fn beam_gain_linear(cfg: &ScenarioConfig, _distance_m: f64) -> f64 {
    db_to_linear(cfg.beam_gain_dbi)
}

/// One small-scale fading power draw (`|g|²` or `|h|²`), unit mean.
///
/// µW is Rayleigh (power exponential with mean 1); mmW is Rician with the
/// configured K-factor, normalized so the mean power is 1. A zero draw is
/// resampled so the noise map can never contain infinities.
pub fn draw_fading_power<R: Rng>(band: Band, rician_k: f64, rng: &mut R) -> f64 {
    loop {
        let p = match band {
            Band::Muw => Exp1.sample(rng),
            Band::Mmw => {
                let scatter = 1.0 / (rician_k + 1.0);
                let los = (rician_k * scatter).sqrt();
                let x: f64 = StandardNormal.sample(rng);
                let y: f64 = StandardNormal.sample(rng);
                let s = (scatter / 2.0).sqrt();
                (los + s * x).powi(2) + (s * y).powi(2)
            }
        };
        if p > 0.0 && p.is_finite() {
            return p;
        }
    }
}

/// All random channel state of one trial: one shadow term per (UE, band),
/// one fading power per (UE, band, slot, RB).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDraws {
    pub num_ues: usize,
    pub num_slots: usize,
    pub muw_rbs: usize,
    pub mmw_rbs: usize,
    pub muw_shadow_db: Vec<f64>,
    pub mmw_shadow_db: Vec<f64>,
    muw_fading: Vec<f64>,
    mmw_fading: Vec<f64>,
}

impl ChannelDraws {
    /// Unit fading, zero shadow: the deterministic channel.
    pub fn unit(num_ues: usize, num_slots: usize, muw_rbs: usize, mmw_rbs: usize) -> Self {
        ChannelDraws {
            num_ues,
            num_slots,
            muw_rbs,
            mmw_rbs,
            muw_shadow_db: vec![0.0; num_ues],
            mmw_shadow_db: vec![0.0; num_ues],
            muw_fading: vec![1.0; num_ues * num_slots * muw_rbs],
            mmw_fading: vec![1.0; num_ues * num_slots * mmw_rbs],
        }
    }

    pub fn fading(&self, band: Band, ue: usize, slot: usize, rb: usize) -> f64 {
        match band {
            Band::Muw => self.muw_fading[(ue * self.num_slots + slot) * self.muw_rbs + rb],
            Band::Mmw => self.mmw_fading[(ue * self.num_slots + slot) * self.mmw_rbs + rb],
        }
    }

    pub fn fading_mut(&mut self, band: Band, ue: usize, slot: usize, rb: usize) -> &mut f64 {
        match band {
            Band::Muw => &mut self.muw_fading[(ue * self.num_slots + slot) * self.muw_rbs + rb],
            Band::Mmw => &mut self.mmw_fading[(ue * self.num_slots + slot) * self.mmw_rbs + rb],
        }
    }
}

/// Draw shadows and block fading for `num_slots` slots.
pub fn draw_channel<R: Rng>(cfg: &ScenarioConfig, num_slots: usize, rng: &mut R) -> ChannelDraws {
    let mut draws = ChannelDraws::unit(cfg.num_ues, num_slots, cfg.muw_rb_count(), cfg.mmw_rb_count());
    for ue in 0..cfg.num_ues {
        let muw_shadow = Normal::new(0.0, cfg.muw_shadow_sigma_db).unwrap();
        let mmw_shadow = Normal::new(0.0, cfg.mmw_shadow_sigma_db).unwrap();
        draws.muw_shadow_db[ue] = muw_shadow.sample(rng);
        draws.mmw_shadow_db[ue] = mmw_shadow.sample(rng);
    }
    for band in [Band::Muw, Band::Mmw] {
        for ue in 0..cfg.num_ues {
            for slot in 0..num_slots {
                let rbs = match band {
                    Band::Muw => draws.muw_rbs,
                    Band::Mmw => draws.mmw_rbs,
                };
                for rb in 0..rbs {
                    *draws.fading_mut(band, ue, slot, rb) = draw_fading_power(band, cfg.rician_k, rng);
                }
            }
        }
    }
    draws
}

/// Effective noise per (UA, RB, slot) for one band. Rows are indexed by the
/// UA's position in the slice the map was built from; `ua_ids` remembers the
/// global ids in row order.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveNoiseMap {
    pub band: Band,
    pub ua_ids: Vec<usize>,
    pub num_rbs: usize,
    pub num_slots: usize,
    pub rb_bandwidth_hz: f64,
    values: Vec<f64>,
}

impl EffectiveNoiseMap {
    /// Build a single-slot map from explicit per-UA noise rows; handy for
    /// synthetic instances in tests and examples.
    pub fn from_rows(band: Band, ua_ids: Vec<usize>, rows: &[Vec<f64>], rb_bandwidth_hz: f64) -> Self {
        assert_eq!(ua_ids.len(), rows.len());
        let num_rbs = rows.first().map_or(0, |r| r.len());
        let mut values = Vec::with_capacity(rows.len() * num_rbs);
        for row in rows {
            assert_eq!(row.len(), num_rbs, "all noise rows must have the same length");
            values.extend_from_slice(row);
        }
        EffectiveNoiseMap { band, ua_ids, num_rbs, num_slots: 1, rb_bandwidth_hz, values }
    }

    pub fn get(&self, ua_row: usize, rb: usize, slot: usize) -> f64 {
        self.values[(ua_row * self.num_slots + slot) * self.num_rbs + rb]
    }

    /// All RB noises of one UA row in one slot.
    pub fn row(&self, ua_row: usize, slot: usize) -> &[f64] {
        let start = (ua_row * self.num_slots + slot) * self.num_rbs;
        &self.values[start..start + self.num_rbs]
    }

    /// Row index of a global UA id.
    pub fn ua_row(&self, ua_id: usize) -> usize {
        self.ua_ids
            .iter()
            .position(|&id| id == ua_id)
            .unwrap_or_else(|| panic!("UA {ua_id} is not part of this noise map"))
    }

    pub fn row_for_ua(&self, ua_id: usize, slot: usize) -> &[f64] {
        self.row(self.ua_row(ua_id), slot)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandNoiseMaps {
    pub muw: EffectiveNoiseMap,
    pub mmw: EffectiveNoiseMap,
}

/// Compose path loss, shadowing, fading and beam gain into the per-band
/// noise maps for the given UAs. Co-located UAs share their UE's channel, so
/// their rows are identical.
pub fn effective_noise(
    cfg: &ScenarioConfig,
    uas: &[crate::scenario::UserApp],
    draws: &ChannelDraws,
) -> BandNoiseMaps {
    let build = |band: Band| -> EffectiveNoiseMap {
        let (num_rbs, omega) = match band {
            Band::Muw => (draws.muw_rbs, cfg.muw_rb_bandwidth_hz),
            Band::Mmw => (draws.mmw_rbs, cfg.mmw_rb_bandwidth_hz),
        };
        let params = PathLossParams::of(cfg, band);
        let num_slots = draws.num_slots;
        let mut values = vec![0.0; uas.len() * num_slots * num_rbs];
        for (row, ua) in uas.iter().enumerate() {
            let shadow = match band {
                Band::Muw => draws.muw_shadow_db[ua.ue_id],
                Band::Mmw => draws.mmw_shadow_db[ua.ue_id],
            };
            let loss_db = path_loss_db(&params, ua.distance_m, shadow)
                .expect("topology distances are positive");
            let attenuation = db_to_linear(-loss_db);
            let gain = match band {
                Band::Muw => 1.0,
                Band::Mmw => beam_gain_linear(cfg, ua.distance_m),
            };
            let numerator = omega * cfg.noise_density_w_per_hz;
            for slot in 0..num_slots {
                for rb in 0..num_rbs {
                    let fading = draws.fading(band, ua.ue_id, slot, rb);
                    let n = numerator / (gain * fading * attenuation);
                    debug_assert!(n.is_finite() && n > 0.0);
                    values[(row * num_slots + slot) * num_rbs + rb] = n;
                }
            }
        }
        EffectiveNoiseMap {
            band,
            ua_ids: uas.iter().map(|ua| ua.ua_id).collect(),
            num_rbs,
            num_slots,
            rb_bandwidth_hz: omega,
            values,
        }
    };
    BandNoiseMaps { muw: build(Band::Muw), mmw: build(Band::Mmw) }
}

/// Draw a fresh channel and build both noise maps in one go.
pub fn build_noise_maps<R: Rng>(
    cfg: &ScenarioConfig,
    uas: &[crate::scenario::UserApp],
    num_slots: usize,
    rng: &mut R,
) -> BandNoiseMaps {
    let draws = draw_channel(cfg, num_slots, rng);
    effective_noise(cfg, uas, &draws)
}
