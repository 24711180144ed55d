//! Randomized sweep experiments comparing the two placement strategies.
//!
//! An experiment fixes an environment family and varies one knob — obstacle
//! count, target count, or grid size — over a ladder of sweep points, running
//! many seeded trials per point. Every trial solves both strategies, checks
//! the results against the oracle, and records robot counts and timings. The
//! summaries use nearest-rank percentiles so a result table can be reproduced
//! bit for bit from the same seed.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use crate::clock::Clock;
use crate::grid::{
    self, EnvironmentKind, GenSpec, GridError, OccupancyGrid, TargetCount,
};
use crate::oracle::verify_separation;
use crate::planner::{
    max_per_target_time, parallel_individual_time_estimate, solve_holistic, solve_individual,
};
use crate::seed::derive_seed;

/// How many fresh seeds a trial may burn through when target placement keeps
/// failing before the trial is abandoned.
pub const MAX_GENERATION_ATTEMPTS: usize = 64;

/// Which parameter a sweep varies.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SweepVariable {
    /// Number of obstacles (rectangles or blocked intersections).
    Obstacles,
    /// Number of target regions.
    Targets,
    /// Grid side length (square grids).
    Size,
}

impl core::fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            SweepVariable::Obstacles => "obstacles",
            SweepVariable::Targets => "targets",
            SweepVariable::Size => "size",
        })
    }
}

/// Randomized part of an experiment: the environment family and the ladder of
/// sweep points.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SweepScenario {
    pub kind: EnvironmentKind,
    pub variable: SweepVariable,
    /// Inclusive ladder `from, from + step, ...` up to `to`.
    pub from: u64,
    pub to: u64,
    pub step: u64,
    pub width: usize,
    pub height: usize,
    /// Obstacle count when it is not the swept variable.
    pub obstacle_count: usize,
    /// Target count when it is not the swept variable.
    pub target_count: TargetCount,
    pub block_size: usize,
}

impl SweepScenario {
    /// The generation spec for one trial at sweep point `point`.
    pub fn gen_spec(&self, point: u64, seed: u64) -> GenSpec {
        let mut spec = GenSpec {
            kind: self.kind,
            width: self.width,
            height: self.height,
            obstacle_count: self.obstacle_count,
            target_count: self.target_count,
            block_size: self.block_size,
            seed,
        };
        match self.variable {
            SweepVariable::Obstacles => spec.obstacle_count = point as usize,
            SweepVariable::Targets => spec.target_count = TargetCount::Fixed(point as u16),
            SweepVariable::Size => {
                spec.width = point as usize;
                spec.height = point as usize;
            }
        }
        spec
    }
}

/// What one experiment runs on: the fixed showcase map, or a random sweep.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scenario {
    /// The hand-built map whose geometry makes the individual strategy waste
    /// a monitor; solved once per trial with no randomness.
    Pathologic,
    Sweep(SweepScenario),
}

/// Full description of an experiment.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExperimentConfig {
    /// Preset number 1-5, or 0 for custom configs.
    pub id: u8,
    pub scenario: Scenario,
    pub trials_per_point: usize,
    pub master_seed: u64,
}

/// Parameter scale for presets: `Desk` finishes on a laptop in minutes,
/// `Paper` reproduces the full-size study.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Scale {
    Desk,
    Paper,
}

impl ExperimentConfig {
    /// The five standard experiments.
    ///
    /// 1. the pathologic showcase map;
    /// 2. open environments, obstacle-count sweep;
    /// 3. closed environments, blocked-intersection sweep;
    /// 4. open environments, target-count sweep;
    /// 5. closed environments, grid-size sweep.
    ///
    /// Returns `None` for ids outside 1-5.
    pub fn preset(id: u8, scale: Scale) -> Option<ExperimentConfig> {
        let desk = scale == Scale::Desk;
        let side = if desk { 60 } else { 100 };
        let trials = if desk { 50 } else { 1000 };
        let range_targets = TargetCount::Range { min: 15, max: 20 };
        let config = match id {
            1 => ExperimentConfig {
                id,
                scenario: Scenario::Pathologic,
                trials_per_point: 1,
                master_seed: 107,
            },
            2 => ExperimentConfig {
                id,
                scenario: Scenario::Sweep(SweepScenario {
                    kind: EnvironmentKind::Open,
                    variable: SweepVariable::Obstacles,
                    from: 10,
                    to: if desk { 220 } else { 235 },
                    step: 15,
                    width: side,
                    height: side,
                    obstacle_count: 0,
                    target_count: range_targets,
                    block_size: grid::DEFAULT_BLOCK_SIZE,
                }),
                trials_per_point: trials,
                master_seed: 2007,
            },
            3 => ExperimentConfig {
                id,
                scenario: Scenario::Sweep(SweepScenario {
                    kind: EnvironmentKind::Closed,
                    variable: SweepVariable::Obstacles,
                    from: 10,
                    to: if desk { 250 } else { 1510 },
                    step: if desk { 30 } else { 50 },
                    width: side,
                    height: side,
                    obstacle_count: 0,
                    target_count: range_targets,
                    block_size: grid::DEFAULT_BLOCK_SIZE,
                }),
                trials_per_point: trials,
                master_seed: 3007,
            },
            4 => ExperimentConfig {
                id,
                scenario: Scenario::Sweep(SweepScenario {
                    kind: EnvironmentKind::Open,
                    variable: SweepVariable::Targets,
                    from: 1,
                    to: 551,
                    step: 50,
                    width: side,
                    height: side,
                    obstacle_count: 100,
                    target_count: range_targets,
                    block_size: grid::DEFAULT_BLOCK_SIZE,
                }),
                trials_per_point: if desk { 20 } else { 100 },
                master_seed: 4007,
            },
            5 => ExperimentConfig {
                id,
                scenario: Scenario::Sweep(SweepScenario {
                    kind: EnvironmentKind::Closed,
                    variable: SweepVariable::Size,
                    from: if desk { 68 } else { 50 },
                    to: if desk { 228 } else { 370 },
                    step: if desk { 20 } else { 40 },
                    width: side,
                    height: side,
                    obstacle_count: if desk { 100 } else { 950 },
                    target_count: range_targets,
                    block_size: grid::DEFAULT_BLOCK_SIZE,
                }),
                trials_per_point: if desk { 30 } else { 1000 },
                master_seed: 5007,
            },
            _ => return None,
        };
        Some(config)
    }

    /// The sweep-point ladder. The showcase scenario has a single point 0.
    pub fn points(&self) -> Vec<u64> {
        match &self.scenario {
            Scenario::Pathologic => vec![0],
            Scenario::Sweep(sw) => {
                let mut points = Vec::new();
                let mut p = sw.from;
                while p <= sw.to {
                    points.push(p);
                    match p.checked_add(sw.step) {
                        Some(next) => p = next,
                        None => break,
                    }
                }
                points
            }
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.trials_per_point == 0 {
            return Err(ExperimentError::InvalidConfig("trials per point must be >= 1"));
        }
        if let Scenario::Sweep(sw) = &self.scenario {
            if sw.step == 0 {
                return Err(ExperimentError::InvalidConfig("sweep step must be >= 1"));
            }
            if sw.from > sw.to {
                return Err(ExperimentError::InvalidConfig("sweep range is empty"));
            }
            match sw.variable {
                SweepVariable::Targets => {
                    if sw.from < 1 {
                        return Err(ExperimentError::InvalidConfig(
                            "target sweep must start at >= 1",
                        ));
                    }
                    if sw.to > u16::MAX as u64 {
                        return Err(ExperimentError::InvalidConfig("target sweep exceeds u16"));
                    }
                }
                SweepVariable::Size => {
                    if sw.from < OccupancyGrid::MIN_SIDE as u64 {
                        return Err(ExperimentError::InvalidConfig(
                            "size sweep must start at >= 3",
                        ));
                    }
                }
                SweepVariable::Obstacles => {}
            }
            // Whatever is not swept must already be valid.
            sw.gen_spec(sw.from, 0).validate().map_err(ExperimentError::Grid)?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid experiment config: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Grid(GridError),
    #[error("point {point}, trial {trial}: target placement failed {attempts} times")]
    GenerationExhausted { point: u64, trial: usize, attempts: usize },
}

/// A generation attempt abandoned because target placement ran out of
/// eligible cells; the trial was retried with a fresh seed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Discard {
    pub point: u64,
    pub trial: usize,
    pub attempt: usize,
    pub seed: u64,
    pub needed: usize,
    pub available: usize,
}

/// Results of one solved trial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TrialRecord {
    pub experiment: u8,
    pub point_index: usize,
    /// Value of the swept variable at this trial's point.
    pub point: u64,
    pub trial: usize,
    /// Seed of the generation attempt that produced the solved grid.
    pub seed: u64,
    pub target_count: u16,
    pub robots_individual: usize,
    pub robots_holistic: usize,
    pub feasible_individual: bool,
    pub feasible_holistic: bool,
    /// Closed sweeps only: the point asked for more blocked intersections
    /// than the street layout has.
    pub saturated: bool,
    /// Both placements passed the separation oracle and the holistic
    /// placement was no larger than the individual one.
    pub oracle_verified: bool,
    pub time_individual_total: Duration,
    /// Total individual time divided by the target count.
    pub time_individual_parallel: Duration,
    /// Slowest single per-target solve.
    pub time_individual_max_target: Duration,
    pub time_holistic: Duration,
}

impl TrialRecord {
    /// True when both strategies produced a complete placement.
    pub fn fully_feasible(&self) -> bool {
        self.feasible_individual && self.feasible_holistic
    }

    /// Robots saved by the holistic strategy; `None` unless both placements
    /// are complete.
    pub fn savings(&self) -> Option<i64> {
        self.fully_feasible()
            .then(|| self.robots_individual as i64 - self.robots_holistic as i64)
    }
}

/// All records and discards of one experiment run.
#[derive(Clone, Debug)]
pub struct ExperimentRun {
    pub records: Vec<TrialRecord>,
    pub discards: Vec<Discard>,
}

/// Runs a single trial: generate (retrying on placement failure), solve both
/// strategies, check the oracle.
pub fn run_trial(
    config: &ExperimentConfig,
    point_index: usize,
    trial: usize,
    clock: &dyn Clock,
) -> Result<(TrialRecord, Vec<Discard>), ExperimentError> {
    let points = config.points();
    let point = points[point_index];
    let mut discards = Vec::new();

    let (environment, seed, saturated) = match &config.scenario {
        Scenario::Pathologic => (pathologic_environment(), config.master_seed, false),
        Scenario::Sweep(sw) => {
            let mut found = None;
            for attempt in 0..MAX_GENERATION_ATTEMPTS {
                let seed = derive_seed(config.master_seed, point_index, trial, attempt);
                let spec = sw.gen_spec(point, seed);
                match grid::generate(&spec) {
                    Ok(g) => {
                        found = Some((g, seed, spec.is_saturated()));
                        break;
                    }
                    Err(GridError::PlacementExhausted { needed, available }) => {
                        discards.push(Discard { point, trial, attempt, seed, needed, available });
                    }
                    Err(e) => return Err(ExperimentError::Grid(e)),
                }
            }
            found.ok_or(ExperimentError::GenerationExhausted {
                point,
                trial,
                attempts: MAX_GENERATION_ATTEMPTS,
            })?
        }
    };

    let individual = solve_individual(&environment, clock);
    let holistic = solve_holistic(&environment, clock);

    let mut oracle_verified = true;
    if individual.feasible {
        oracle_verified &= verify_separation(&environment, &individual.robots);
    }
    if holistic.feasible {
        oracle_verified &= verify_separation(&environment, &holistic.robots);
    }
    if individual.feasible && holistic.feasible {
        oracle_verified &= holistic.robot_count() <= individual.robot_count();
    }

    let record = TrialRecord {
        experiment: config.id,
        point_index,
        point,
        trial,
        seed,
        target_count: environment.target_count(),
        robots_individual: individual.robot_count(),
        robots_holistic: holistic.robot_count(),
        feasible_individual: individual.feasible,
        feasible_holistic: holistic.feasible,
        saturated,
        oracle_verified,
        time_individual_total: individual.solve_time,
        time_individual_parallel: parallel_individual_time_estimate(&individual),
        time_individual_max_target: max_per_target_time(&individual),
        time_holistic: holistic.solve_time,
    };
    Ok((record, discards))
}

/// Runs every trial of every sweep point, in order.
pub fn run_experiment(
    config: &ExperimentConfig,
    clock: &dyn Clock,
) -> Result<ExperimentRun, ExperimentError> {
    config.validate()?;
    let mut run = ExperimentRun { records: Vec::new(), discards: Vec::new() };
    for point_index in 0..config.points().len() {
        for trial in 0..config.trials_per_point {
            let (record, mut discards) = run_trial(config, point_index, trial, clock)?;
            run.records.push(record);
            run.discards.append(&mut discards);
        }
    }
    Ok(run)
}

/// Nearest-rank percentiles of a sample.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Percentiles<T> {
    pub p5: T,
    pub p25: T,
    pub median: T,
    pub p75: T,
    pub p95: T,
}

impl<T: Ord + Copy> Percentiles<T> {
    /// Computes percentiles of `values` (unsorted, consumed). `None` when
    /// empty.
    pub fn compute(mut values: Vec<T>) -> Option<Percentiles<T>> {
        if values.is_empty() {
            return None;
        }
        values.sort_unstable();
        Some(Percentiles {
            p5: nearest_rank(&values, 5),
            p25: nearest_rank(&values, 25),
            median: nearest_rank(&values, 50),
            p75: nearest_rank(&values, 75),
            p95: nearest_rank(&values, 95),
        })
    }
}

/// Nearest-rank percentile of a sorted, non-empty sample: the value at
/// 1-indexed rank `ceil(percent * n / 100)`, clamped to at least 1.
pub fn nearest_rank<T: Copy>(sorted: &[T], percent: usize) -> T {
    debug_assert!(!sorted.is_empty());
    let n = sorted.len();
    let rank = (percent * n).div_ceil(100).max(1);
    sorted[rank.min(n) - 1]
}

/// Per-point aggregate of an experiment's records.
#[derive(Clone, Debug)]
pub struct PointSummary {
    pub point: u64,
    pub trials: usize,
    /// Trials where both strategies were feasible; savings statistics cover
    /// exactly these.
    pub feasible_trials: usize,
    pub saturated: bool,
    pub mean_savings: Option<f64>,
    pub savings: Option<Percentiles<i64>>,
    pub time_individual_total: Option<Percentiles<Duration>>,
    pub time_individual_parallel: Option<Percentiles<Duration>>,
    pub time_holistic: Option<Percentiles<Duration>>,
}

#[derive(Clone, Debug)]
pub struct SweepSummary {
    pub points: Vec<PointSummary>,
}

/// Groups records by sweep point and computes the per-point statistics.
pub fn summarize(records: &[TrialRecord]) -> SweepSummary {
    let mut by_point: BTreeMap<usize, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        by_point.entry(r.point_index).or_default().push(r);
    }
    let points = by_point
        .into_values()
        .map(|group| {
            let savings: Vec<i64> = group.iter().filter_map(|r| r.savings()).collect();
            let mean_savings = (!savings.is_empty())
                .then(|| savings.iter().sum::<i64>() as f64 / savings.len() as f64);
            PointSummary {
                point: group[0].point,
                trials: group.len(),
                feasible_trials: savings.len(),
                saturated: group.iter().any(|r| r.saturated),
                mean_savings,
                savings: Percentiles::compute(savings),
                time_individual_total: Percentiles::compute(
                    group.iter().map(|r| r.time_individual_total).collect(),
                ),
                time_individual_parallel: Percentiles::compute(
                    group.iter().map(|r| r.time_individual_parallel).collect(),
                ),
                time_holistic: Percentiles::compute(
                    group.iter().map(|r| r.time_holistic).collect(),
                ),
            }
        })
        .collect();
    SweepSummary { points }
}

/// Outcome of one trend check.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Finding {
    Holds,
    Fails,
    /// Not applicable to this sweep, or not enough data to tell.
    Inconclusive,
}

impl core::fmt::Display for Finding {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Finding::Holds => "holds",
            Finding::Fails => "fails",
            Finding::Inconclusive => "inconclusive",
        })
    }
}

/// The qualitative claims a sweep can support.
#[derive(Clone, Copy, Debug)]
pub struct TrendReport {
    /// Obstacle sweeps: median savings peak strictly inside the sweep range,
    /// not at its ends.
    pub interior_peak: Finding,
    /// Size sweeps: median savings on the smallest grids beat the largest.
    pub small_env_advantage: Finding,
    /// Target sweeps: mean savings at the top of the ladder reach at least
    /// twice the mean at the lowest nontrivial point.
    pub target_scaling: Finding,
    /// Obstacle sweeps: the holistic / parallel-individual time ratio falls
    /// as obstacles increase.
    pub timing_ratio_decreases: Finding,
    /// Spearman rank correlation behind `timing_ratio_decreases`.
    pub timing_ratio_rho: Option<f64>,
}

/// Evaluates the trend checks relevant to `config` against a summary.
/// Inapplicable checks come back `Inconclusive`.
pub fn trend_checks(config: &ExperimentConfig, summary: &SweepSummary) -> TrendReport {
    let mut report = TrendReport {
        interior_peak: Finding::Inconclusive,
        small_env_advantage: Finding::Inconclusive,
        target_scaling: Finding::Inconclusive,
        timing_ratio_decreases: Finding::Inconclusive,
        timing_ratio_rho: None,
    };
    let Scenario::Sweep(sw) = &config.scenario else {
        return report;
    };
    let points = &summary.points;
    if points.len() < 3 {
        return report;
    }

    match sw.variable {
        SweepVariable::Obstacles => {
            if let Some(medians) = median_savings(points) {
                let peak = *medians.iter().max().unwrap();
                report.interior_peak =
                    if medians[0] < peak && *medians.last().unwrap() < peak {
                        Finding::Holds
                    } else {
                        Finding::Fails
                    };
            }
            report.timing_ratio_rho = timing_ratio_rho(points);
            report.timing_ratio_decreases = match report.timing_ratio_rho {
                Some(rho) if rho < 0.0 => Finding::Holds,
                Some(_) => Finding::Fails,
                None => Finding::Inconclusive,
            };
        }
        SweepVariable::Size => {
            if let Some(medians) = median_savings(points) {
                report.small_env_advantage = if medians[0] > *medians.last().unwrap() {
                    Finding::Holds
                } else {
                    Finding::Fails
                };
            }
        }
        SweepVariable::Targets => {
            let low = points
                .iter()
                .find(|p| p.point >= 2)
                .and_then(|p| p.mean_savings);
            let high = points.last().and_then(|p| p.mean_savings);
            if let (Some(low), Some(high)) = (low, high) {
                report.target_scaling =
                    if high >= 2.0 * low { Finding::Holds } else { Finding::Fails };
            }
        }
    }
    report
}

/// Median savings per point; `None` if any point lacks feasible trials.
fn median_savings(points: &[PointSummary]) -> Option<Vec<i64>> {
    points.iter().map(|p| p.savings.map(|s| s.median)).collect()
}

/// Spearman correlation between sweep point and the ratio of median holistic
/// time to median parallel-individual time. `None` when timing data is
/// missing or degenerate (for example under a null clock).
fn timing_ratio_rho(points: &[PointSummary]) -> Option<f64> {
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for p in points {
        let hol = p.time_holistic?.median;
        let par = p.time_individual_parallel?.median;
        if par.is_zero() {
            return None;
        }
        xs.push(p.point as f64);
        ys.push(hol.as_secs_f64() / par.as_secs_f64());
    }
    spearman_rho(&xs, &ys)
}

/// Spearman rank correlation with average ranks for ties. `None` for samples
/// shorter than 3 or with zero variance in either coordinate.
pub fn spearman_rho(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return None;
    }
    pearson(&ranks(xs), &ranks(ys))
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| values[*a].partial_cmp(&values[*b]).expect("rank of NaN"));
    let mut out = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg_rank = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            out[order[k]] = avg_rank;
        }
        i = j + 1;
    }
    out
}

fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx) * (x - mx);
        vy += (y - my) * (y - my);
    }
    let denom = libm::sqrt(vx * vy);
    if denom == 0.0 {
        return None;
    }
    Some(cov / denom)
}

/// The hand-built showcase environment: three pockets opening into a shared
/// antechamber with a two-cell doorway. Sealing each pocket separately costs
/// three monitors; sealing the doorway costs two.
pub fn pathologic_environment() -> OccupancyGrid {
    OccupancyGrid::from_ascii(PATHOLOGIC_ART).expect("showcase map is valid")
}

const PATHOLOGIC_ART: &str = "\
...........
...........
..#######..
..#A#B#C#..
..#.#.#.#..
..#.....#..
..#.....#..
..##..###..
...........
...........";
