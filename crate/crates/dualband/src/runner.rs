//! Trial orchestration: topology → grouping → per-slot dual-band
//! allocation, baselines, parameter sweeps, and CSV emission.
//!
//! A trial is a pure function of `(config, seed, algorithm)`. The seed
//! feeds three independent ChaCha streams (topology, channel, algorithm
//! randomness), so different algorithms on the same seed see the exact same
//! topology and channel — which is what makes paired baseline comparisons
//! meaningful. Trials run in parallel but results are merged in seed order,
//! so every CSV is byte-stable across re-runs.

use crate::channel::{BandNoiseMaps, build_noise_maps};
use crate::grouping::{group_users, proxy_power, GroupAssignment};
use crate::mmw;
use crate::muw::{self, AllocError, MuwAllocation, MuwProblem, OwnershipMap, SlotAllocation};
use crate::scenario::{generate_topology, ConfigError, ScenarioConfig, Topology};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("trial with seed {seed} failed: {source}")]
    Alloc {
        seed: u64,
        #[source]
        source: AllocError,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write results: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Balanced grouping + estimation/descent µW allocation (the full pipeline).
    GbEod,
    /// Random grouping, same per-slot allocation; isolates the grouping stage.
    RandomGroupEod,
    /// Balanced grouping, µW RBs dealt cyclically, power settled per UA.
    RoundRobin,
    /// Balanced grouping, µW RBs dealt uniformly at random (each UA gets at
    /// least one), power settled per UA.
    Random,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] =
        [Algorithm::GbEod, Algorithm::RandomGroupEod, Algorithm::RoundRobin, Algorithm::Random];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::GbEod => "gb-eod",
            Algorithm::RandomGroupEod => "random-group+eod",
            Algorithm::RoundRobin => "round-robin",
            Algorithm::Random => "random",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gb-eod" => Ok(Algorithm::GbEod),
            "random-group+eod" | "random-group-eod" => Ok(Algorithm::RandomGroupEod),
            "round-robin" => Ok(Algorithm::RoundRobin),
            "random" => Ok(Algorithm::Random),
            other => Err(format!(
                "unknown algorithm `{other}` (expected gb-eod, random-group+eod, round-robin or random)"
            )),
        }
    }
}

/// One QoS class's outcome within a trial.
#[derive(Debug, Clone)]
pub struct ClassReport {
    pub horizon: usize,
    pub assignment: GroupAssignment,
    pub grouping_objective: f64,
    pub slots: Vec<SlotAllocation>,
    pub muw_power: f64,
    pub mmw_power: f64,
}

#[derive(Debug, Clone)]
pub struct TrialReport {
    pub seed: u64,
    pub algorithm: Algorithm,
    pub classes: Vec<ClassReport>,
    pub muw_power: f64,
    pub mmw_power: f64,
    pub total_power: f64,
    pub escalations: u64,
    pub transfers: u64,
    pub runtime_ms: f64,
}

/// The three named random streams of one trial. Topology and channel draws
/// depend only on the seed, never on the algorithm.
pub fn trial_streams(seed: u64) -> (ChaCha8Rng, ChaCha8Rng, ChaCha8Rng) {
    let stream = |idx: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(idx);
        rng
    };
    (stream(0), stream(1), stream(2))
}

/// Noise maps for every QoS class, drawn in class order from the channel
/// stream. Kept separate so re-derivation (for auditing or noise dumps)
/// consumes the stream exactly like `run_trial` does.
pub fn class_noise_maps<R: Rng>(
    cfg: &ScenarioConfig,
    topo: &Topology,
    rng: &mut R,
) -> Vec<BandNoiseMaps> {
    topo.classes
        .iter()
        .map(|class| {
            let members: Vec<_> = class.members.iter().map(|&id| topo.uas[id].clone()).collect();
            build_noise_maps(cfg, &members, class.horizon, rng)
        })
        .collect()
}

/// Random partition with the same nonempty-group guarantee as the balanced
/// heuristic: shuffle, deal one UA to each group, scatter the rest.
fn random_groups<R: Rng>(members: &[(usize, f64)], horizon: usize, rng: &mut R) -> GroupAssignment {
    let mut ids: Vec<usize> = members.iter().map(|&(id, _)| id).collect();
    for i in (1..ids.len()).rev() {
        ids.swap(i, rng.gen_range(0..=i));
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); horizon];
    for (i, &ua) in ids.iter().enumerate() {
        let g = if i < horizon { i } else { rng.gen_range(0..horizon) };
        groups[g].push(ua);
    }
    GroupAssignment { horizon, groups, proxy_power: members.iter().copied().collect() }
}

#[derive(Debug, Clone, Copy)]
enum BaselineKind {
    RoundRobin,
    Random,
}

/// Baseline µW assignment for one slot: mmW selection is shared with the
/// main pipeline, the µW ownership map is dealt cyclically or uniformly at
/// random, and per-UA power is settled by water-filling the owned set.
fn baseline_slot<R: Rng>(
    cfg: &ScenarioConfig,
    uas: &[crate::scenario::UserApp],
    maps: &BandNoiseMaps,
    group: &[usize],
    slot: usize,
    kind: BaselineKind,
    rng: &mut R,
) -> Result<SlotAllocation, AllocError> {
    let demands: Vec<f64> = uas.iter().map(|ua| ua.demand_bits).collect();
    let tx_time = mmw::mmw_tx_time(cfg, group.len());
    let (mmw_sel, muw_ids) =
        mmw::select_greedy(group, &maps.mmw, &demands, slot, cfg.mmw_quota, tx_time);
    let k1 = maps.muw.num_rbs;
    if muw_ids.is_empty() {
        return Ok(SlotAllocation { slot, mmw: mmw_sel, muw: MuwAllocation::empty(k1) });
    }
    let n = muw_ids.len();
    if n > k1 {
        return Err(AllocError::InsufficientRbs { uas: n, rbs: k1 });
    }

    let rb_owner: Vec<Option<usize>> = match kind {
        BaselineKind::RoundRobin => (0..k1).map(|rb| Some(rb % n)).collect(),
        BaselineKind::Random => {
            let mut owner = vec![None; k1];
            let mut rbs: Vec<usize> = (0..k1).collect();
            // one distinct RB per UA first, then scatter the rest
            for ua in 0..n {
                let pick = rng.gen_range(ua..k1);
                rbs.swap(ua, pick);
                owner[rbs[ua]] = Some(ua);
            }
            for &rb in &rbs[n..] {
                owner[rb] = Some(rng.gen_range(0..n));
            }
            owner
        }
    };

    let problem = MuwProblem {
        noise_rows: muw_ids.iter().map(|&ua| maps.muw.row_for_ua(ua, slot)).collect(),
        demands: muw_ids.iter().map(|&ua| demands[ua]).collect(),
        duration_s: cfg.slot_duration_s,
        rb_bandwidth_hz: cfg.muw_rb_bandwidth_hz,
        step: cfg.step,
        escalation_mode: cfg.escalation_mode,
        max_escalations: cfg.escalation_max_iters,
    };
    let map = OwnershipMap { rb_owner };
    let settled = muw::settle_power(&problem, &map);
    let total_power = settled.iter().map(|s| s.total_power).sum();
    Ok(SlotAllocation {
        slot,
        mmw: mmw_sel,
        muw: MuwAllocation {
            rb_owner: map.rb_owner.iter().map(|o| o.map(|ua| muw_ids[ua])).collect(),
            solutions: muw_ids.iter().zip(settled).map(|(&ua, sol)| (ua, sol)).collect(),
            total_power,
            escalations: 0,
            transfers: 0,
            trace: Vec::new(),
            ua_ids: muw_ids,
        },
    })
}

/// Run one trial end to end. Deterministic in `(cfg, seed, algorithm)`.
pub fn run_trial(cfg: &ScenarioConfig, seed: u64, algorithm: Algorithm) -> Result<TrialReport, RunError> {
    let start = Instant::now();
    let (mut rng_topo, mut rng_chan, mut rng_algo) = trial_streams(seed);
    let topo = generate_topology(cfg, &mut rng_topo);
    let maps_per_class = class_noise_maps(cfg, &topo, &mut rng_chan);

    let mut classes = Vec::with_capacity(topo.classes.len());
    for (class, maps) in topo.classes.iter().zip(&maps_per_class) {
        let members: Vec<(usize, f64)> = class
            .members
            .iter()
            .map(|&id| (id, proxy_power(&topo.uas[id], cfg)))
            .collect();
        let assignment = match algorithm {
            Algorithm::RandomGroupEod => random_groups(&members, class.horizon, &mut rng_algo),
            _ => group_users(&members, class.horizon, cfg.eta, cfg.gamma),
        };

        let mut slots = Vec::with_capacity(class.horizon);
        for t in 0..class.horizon {
            let group = &assignment.groups[t];
            let alloc = match algorithm {
                Algorithm::GbEod | Algorithm::RandomGroupEod => {
                    muw::allocate_slot(cfg, &topo.uas, maps, group, t)
                        .map_err(|source| RunError::Alloc { seed, source })?
                }
                Algorithm::RoundRobin => {
                    baseline_slot(cfg, &topo.uas, maps, group, t, BaselineKind::RoundRobin, &mut rng_algo)
                        .map_err(|source| RunError::Alloc { seed, source })?
                }
                Algorithm::Random => {
                    baseline_slot(cfg, &topo.uas, maps, group, t, BaselineKind::Random, &mut rng_algo)
                        .map_err(|source| RunError::Alloc { seed, source })?
                }
            };
            slots.push(alloc);
        }

        let muw_power: f64 = slots.iter().map(|s| s.muw.total_power).sum();
        let mmw_power: f64 = slots.iter().map(|s| s.mmw.total_power).sum();
        classes.push(ClassReport {
            horizon: class.horizon,
            grouping_objective: assignment.objective(),
            assignment,
            slots,
            muw_power,
            mmw_power,
        });
    }

    let muw_power: f64 = classes.iter().map(|c| c.muw_power).sum();
    let mmw_power: f64 = classes.iter().map(|c| c.mmw_power).sum();
    Ok(TrialReport {
        seed,
        algorithm,
        muw_power,
        mmw_power,
        total_power: muw_power + mmw_power,
        escalations: classes
            .iter()
            .flat_map(|c| &c.slots)
            .map(|s| s.muw.escalations)
            .sum(),
        transfers: classes.iter().flat_map(|c| &c.slots).map(|s| s.muw.transfers).sum(),
        classes,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Run trials with seeds `base_seed .. base_seed + trials` in parallel,
/// merged in seed order.
pub fn run_trials(
    cfg: &ScenarioConfig,
    algorithm: Algorithm,
    base_seed: u64,
    trials: usize,
) -> Result<Vec<TrialReport>, RunError> {
    (0..trials as u64)
        .into_par_iter()
        .map(|i| run_trial(cfg, base_seed.wrapping_add(i), algorithm))
        .collect()
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n − 1 denominator); 0 for fewer than 2 points.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    NumUes,
    MmwQuota,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::NumUes => "num_ues",
            SweepVariable::MmwQuota => "mmw_quota",
        }
    }

    fn apply(self, cfg: &ScenarioConfig, value: usize) -> ScenarioConfig {
        let mut c = cfg.clone();
        match self {
            SweepVariable::NumUes => c.num_ues = value,
            SweepVariable::MmwQuota => c.mmw_quota = value,
        }
        c
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "num_ues" => Ok(SweepVariable::NumUes),
            "mmw_quota" => Ok(SweepVariable::MmwQuota),
            other => Err(format!("unknown sweep variable `{other}` (expected num_ues or mmw_quota)")),
        }
    }
}

/// Per-trial totals kept for sweep statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialSummary {
    pub seed: u64,
    pub muw_power: f64,
    pub mmw_power: f64,
    pub total_power: f64,
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub value: usize,
    pub requested_trials: usize,
    pub failures: usize,
    pub samples: Vec<TrialSummary>,
    pub mean_muw: f64,
    pub std_muw: f64,
    pub mean_mmw: f64,
    pub std_mmw: f64,
    pub mean_total: f64,
    pub std_total: f64,
    /// Standard error of the mean total power.
    pub se_total: f64,
}

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub variable: SweepVariable,
    pub algorithm: Algorithm,
    pub points: Vec<SweepPoint>,
}

/// Sweep one variable over `values`, `trials` seeds per point (the same
/// seed set at every point, so points are paired). Per-point failures are
/// recorded and the sweep continues.
pub fn sweep(
    cfg: &ScenarioConfig,
    variable: SweepVariable,
    values: &[usize],
    trials: usize,
    algorithm: Algorithm,
) -> SweepTable {
    let points = values
        .iter()
        .map(|&value| {
            let point_cfg = variable.apply(cfg, value);
            if let Err(err) = point_cfg.validate() {
                eprintln!("sweep point {variable}={value} skipped: {err}");
                return SweepPoint {
                    value,
                    requested_trials: trials,
                    failures: trials,
                    samples: Vec::new(),
                    mean_muw: f64::NAN,
                    std_muw: f64::NAN,
                    mean_mmw: f64::NAN,
                    std_mmw: f64::NAN,
                    mean_total: f64::NAN,
                    std_total: f64::NAN,
                    se_total: f64::NAN,
                };
            }
            let results: Vec<Result<TrialReport, RunError>> = (0..trials as u64)
                .into_par_iter()
                .map(|i| run_trial(&point_cfg, cfg.rng_seed.wrapping_add(i), algorithm))
                .collect();
            let mut samples = Vec::with_capacity(trials);
            let mut failures = 0;
            for res in results {
                match res {
                    Ok(r) => samples.push(TrialSummary {
                        seed: r.seed,
                        muw_power: r.muw_power,
                        mmw_power: r.mmw_power,
                        total_power: r.total_power,
                    }),
                    Err(err) => {
                        failures += 1;
                        eprintln!("sweep point {variable}={value}: {err}");
                    }
                }
            }
            let muw: Vec<f64> = samples.iter().map(|s| s.muw_power).collect();
            let mmw: Vec<f64> = samples.iter().map(|s| s.mmw_power).collect();
            let tot: Vec<f64> = samples.iter().map(|s| s.total_power).collect();
            SweepPoint {
                value,
                requested_trials: trials,
                failures,
                mean_muw: mean(&muw),
                std_muw: sample_std(&muw),
                mean_mmw: mean(&mmw),
                std_mmw: sample_std(&mmw),
                mean_total: mean(&tot),
                std_total: sample_std(&tot),
                se_total: if tot.is_empty() {
                    f64::NAN
                } else {
                    sample_std(&tot) / (tot.len() as f64).sqrt()
                },
                samples,
            }
        })
        .collect();
    SweepTable { variable, algorithm, points }
}

fn open(path: &Path) -> io::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

pub fn write_trials_csv(path: &Path, reports: &[TrialReport]) -> io::Result<()> {
    let mut w = open(path)?;
    writeln!(
        w,
        "trial,seed,algorithm,muw_power_w,mmw_power_w,total_power_w,grouping_objective,escalations,transfers"
    )?;
    for (i, r) in reports.iter().enumerate() {
        let objective: f64 = r.classes.iter().map(|c| c.grouping_objective).sum();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            i, r.seed, r.algorithm, r.muw_power, r.mmw_power, r.total_power, objective,
            r.escalations, r.transfers
        )?;
    }
    w.flush()
}

pub fn write_sweep_trials_csv(path: &Path, table: &SweepTable) -> io::Result<()> {
    let mut w = open(path)?;
    writeln!(w, "{},trial,seed,algorithm,muw_power_w,mmw_power_w,total_power_w", table.variable)?;
    for point in &table.points {
        for (i, s) in point.samples.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                point.value, i, s.seed, table.algorithm, s.muw_power, s.mmw_power, s.total_power
            )?;
        }
    }
    w.flush()
}

pub fn write_results_csv(path: &Path, table: &SweepTable) -> io::Result<()> {
    let mut w = open(path)?;
    writeln!(
        w,
        "variable,value,requested_trials,completed,failures,mean_muw_power_w,std_muw_power_w,\
         mean_mmw_power_w,std_mmw_power_w,mean_total_power_w,std_total_power_w,se_total_power_w"
    )?;
    for p in &table.points {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            table.variable,
            p.value,
            p.requested_trials,
            p.samples.len(),
            p.failures,
            p.mean_muw,
            p.std_muw,
            p.mean_mmw,
            p.std_mmw,
            p.mean_total,
            p.std_total,
            p.se_total
        )?;
    }
    w.flush()
}

/// Per-RB ownership, power and rate of one trial. µW rows list every owned
/// RB (owned-but-unpowered RBs appear with zero power); mmW rows list the
/// RBs actually carrying power.
pub fn write_allocation_csv(path: &Path, report: &TrialReport) -> io::Result<()> {
    let mut w = open(path)?;
    writeln!(w, "class_horizon,slot,band,rb,ua_id,power_w,rate_bps")?;
    for class in &report.classes {
        for slot in &class.slots {
            for (rb, owner) in slot.muw.rb_owner.iter().enumerate() {
                let Some(ua) = owner else { continue };
                let sol = &slot
                    .muw
                    .solutions
                    .iter()
                    .find(|(id, _)| id == ua)
                    .expect("owner always has a solution")
                    .1;
                writeln!(
                    w,
                    "{},{},muw,{},{},{},{}",
                    class.horizon, slot.slot, rb, ua, sol.per_rb_power[rb], sol.per_rb_rate[rb]
                )?;
            }
            for (ua, sol) in &slot.mmw.solutions {
                for &rb in &sol.active {
                    writeln!(
                        w,
                        "{},{},mmw,{},{},{},{}",
                        class.horizon, slot.slot, rb, ua, sol.per_rb_power[rb], sol.per_rb_rate[rb]
                    )?;
                }
            }
        }
    }
    w.flush()
}

/// Dump the effective noise maps a trial would see (re-derived from the
/// seed, so this matches the allocation CSVs of the same run exactly).
pub fn write_noise_csv(path: &Path, cfg: &ScenarioConfig, seed: u64) -> io::Result<()> {
    let (mut rng_topo, mut rng_chan, _) = trial_streams(seed);
    let topo = generate_topology(cfg, &mut rng_topo);
    let maps_per_class = class_noise_maps(cfg, &topo, &mut rng_chan);
    let mut w = open(path)?;
    writeln!(w, "ua,rb,slot,band,value")?;
    for maps in &maps_per_class {
        for m in [&maps.muw, &maps.mmw] {
            for (row, &ua) in m.ua_ids.iter().enumerate() {
                for slot in 0..m.num_slots {
                    for rb in 0..m.num_rbs {
                        writeln!(w, "{},{},{},{},{}", ua, rb, slot, m.band.label(), m.get(row, rb, slot))?;
                    }
                }
            }
        }
    }
    w.flush()
}

pub fn write_groups_csv(path: &Path, report: &TrialReport) -> io::Result<()> {
    let mut w = open(path)?;
    writeln!(w, "ua_id,group_index,proxy_power_w")?;
    for class in &report.classes {
        for (g, group) in class.assignment.groups.iter().enumerate() {
            for &ua in group {
                writeln!(w, "{},{},{}", ua, g, class.assignment.proxy_power[&ua])?;
            }
        }
    }
    w.flush()
}

/// Descent trace of one trial; `iteration` is a running counter across all
/// classes and slots, `total_power_w` the slot's µW total after the move.
pub fn write_descent_csv(path: &Path, report: &TrialReport) -> io::Result<()> {
    let mut w = open(path)?;
    writeln!(w, "iteration,rb,donor,receiver,total_power_w")?;
    let mut iteration = 0u64;
    for class in &report.classes {
        for slot in &class.slots {
            for rec in &slot.muw.trace {
                iteration += 1;
                writeln!(w, "{},{},{},{},{}", iteration, rec.rb, rec.donor, rec.receiver, rec.total_power)?;
            }
        }
    }
    w.flush()
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub trials: usize,
    pub algorithm: Algorithm,
    pub sweep: Option<(SweepVariable, Vec<usize>)>,
    pub out_dir: PathBuf,
    pub dump_noise: bool,
    pub trace_descent: bool,
    pub dump_groups: bool,
}

#[derive(Debug, Clone)]
pub struct ExecSummary {
    pub files: Vec<PathBuf>,
    pub message: String,
}

/// Top-level entry the CLI calls: run trials or a sweep, write every
/// requested CSV under `out_dir`, and return a printable summary.
pub fn execute(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<ExecSummary, RunError> {
    fs::create_dir_all(&opts.out_dir)?;
    let mut cfg = cfg.clone();
    if let Some(seed) = opts.seed {
        cfg.rng_seed = seed;
    }
    let mut files = Vec::new();
    let message;

    match &opts.sweep {
        None => {
            let reports = run_trials(&cfg, opts.algorithm, cfg.rng_seed, opts.trials)?;
            let trials_path = opts.out_dir.join("trials.csv");
            write_trials_csv(&trials_path, &reports)?;
            files.push(trials_path);
            if let Some(last) = reports.last() {
                let alloc_path = opts.out_dir.join("allocation.csv");
                write_allocation_csv(&alloc_path, last)?;
                files.push(alloc_path);
                if opts.dump_noise {
                    let p = opts.out_dir.join("noise.csv");
                    write_noise_csv(&p, &cfg, last.seed)?;
                    files.push(p);
                }
                if opts.dump_groups {
                    let p = opts.out_dir.join("groups.csv");
                    write_groups_csv(&p, last)?;
                    files.push(p);
                }
                if opts.trace_descent {
                    let p = opts.out_dir.join("descent.csv");
                    write_descent_csv(&p, last)?;
                    files.push(p);
                }
            }
            let totals: Vec<f64> = reports.iter().map(|r| r.total_power).collect();
            let muw: Vec<f64> = reports.iter().map(|r| r.muw_power).collect();
            let mmw: Vec<f64> = reports.iter().map(|r| r.mmw_power).collect();
            message = format!(
                "{} trial(s) of {}: mean power {:.6e} W (µW {:.6e}, mmW {:.6e})",
                reports.len(),
                opts.algorithm,
                mean(&totals),
                mean(&muw),
                mean(&mmw),
            );
        }
        Some((variable, values)) => {
            let table = sweep(&cfg, *variable, values, opts.trials, opts.algorithm);
            let results_path = opts.out_dir.join("results.csv");
            write_results_csv(&results_path, &table)?;
            files.push(results_path);
            let trials_path = opts.out_dir.join("trials.csv");
            write_sweep_trials_csv(&trials_path, &table)?;
            files.push(trials_path);

            // allocation dump for the last completed point/seed
            if let Some((point, last)) = table
                .points
                .iter()
                .rev()
                .find_map(|p| p.samples.last().map(|s| (p, s)))
            {
                let point_cfg = variable.apply(&cfg, point.value);
                let report = run_trial(&point_cfg, last.seed, opts.algorithm)?;
                let alloc_path = opts.out_dir.join("allocation.csv");
                write_allocation_csv(&alloc_path, &report)?;
                files.push(alloc_path);
                if opts.dump_noise {
                    let p = opts.out_dir.join("noise.csv");
                    write_noise_csv(&p, &point_cfg, last.seed)?;
                    files.push(p);
                }
                if opts.dump_groups {
                    let p = opts.out_dir.join("groups.csv");
                    write_groups_csv(&p, &report)?;
                    files.push(p);
                }
                if opts.trace_descent {
                    let p = opts.out_dir.join("descent.csv");
                    write_descent_csv(&p, &report)?;
                    files.push(p);
                }
            }
            message = format!(
                "swept {} over {:?} with {} trial(s)/point for {}",
                variable, values, opts.trials, opts.algorithm
            );
        }
    }

    Ok(ExecSummary { files, message })
}
