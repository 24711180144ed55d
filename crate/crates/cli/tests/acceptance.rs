//! Acceptance gate: one test (and one printed pass line) per shipping
//! criterion. Expensive fixtures — the desk-scale sweeps and the random
//! corpora — are built once and shared across criteria.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::sync::LazyLock;
use std::time::{Duration, Instant};

use cordon::clock::WallClock;
use cordon::csvout::{strip_timing_columns, summary_csv, trials_csv};
use cordon::parallel::run_experiment_parallel;

use cordon_core::clock::NullClock;
use cordon_core::experiments::{
    pathologic_environment, run_experiment, run_trial, summarize, trend_checks,
    ExperimentConfig, ExperimentRun, Finding, Scale, Scenario, SweepScenario, SweepSummary,
    SweepVariable, TrendReport, TrialRecord,
};
use cordon_core::grid::{
    self, Coord, EnvironmentKind, GenSpec, OccupancyGrid, TargetCount,
};
use cordon_core::maxflow::{min_vertex_cut, CutResult, CutValue, TargetSelection};
use cordon_core::oracle::{brute_force_min_cut, find_breach, verify_separation};

const SWEEP_BUDGET: Duration = Duration::from_secs(600);

struct SweepFixture {
    config: ExperimentConfig,
    run: ExperimentRun,
    summary: SweepSummary,
    trends: TrendReport,
    elapsed: Duration,
}

fn run_preset(id: u8) -> SweepFixture {
    let config = ExperimentConfig::preset(id, Scale::Desk).unwrap();
    let started = Instant::now();
    let run = run_experiment(&config, &WallClock::new()).unwrap();
    let elapsed = started.elapsed();
    let summary = summarize(&run.records);
    let trends = trend_checks(&config, &summary);
    SweepFixture { config, run, summary, trends, elapsed }
}

static EXP2: LazyLock<SweepFixture> = LazyLock::new(|| run_preset(2));
static EXP3: LazyLock<SweepFixture> = LazyLock::new(|| run_preset(3));
static EXP4: LazyLock<SweepFixture> = LazyLock::new(|| run_preset(4));
static EXP5: LazyLock<SweepFixture> = LazyLock::new(|| run_preset(5));

/// 5,000 trials across both environment kinds for the dominance check.
static DOMINANCE: LazyLock<Vec<TrialRecord>> = LazyLock::new(|| {
    let mut records = Vec::new();
    for (kind, seed) in [(EnvironmentKind::Open, 70), (EnvironmentKind::Closed, 71)] {
        let config = ExperimentConfig {
            id: 0,
            scenario: Scenario::Sweep(SweepScenario {
                kind,
                variable: SweepVariable::Obstacles,
                from: 10,
                to: 50,
                step: 10,
                width: 40,
                height: 40,
                obstacle_count: 0,
                target_count: TargetCount::Range { min: 1, max: 5 },
                block_size: 3,
            }),
            trials_per_point: 500,
            master_seed: seed,
        };
        records.extend(run_experiment(&config, &NullClock).unwrap().records);
    }
    records
});

struct SmallCase {
    grid: OccupancyGrid,
    holistic: CutResult,
}

/// Random grids at most 12x12 whose holistic cut is at most 4 monitors and
/// small enough for exhaustive search.
static SMALL_GRIDS: LazyLock<Vec<SmallCase>> = LazyLock::new(|| {
    let mut cases = Vec::new();
    let mut seed: u64 = 0;
    while cases.len() < 200 {
        seed += 1;
        assert!(seed < 4000, "could not gather 200 small oracle grids");
        let side = 6 + (seed % 7) as usize;
        let obstacles = 2 + (seed % 5) as usize;
        let targets = 1 + (seed % 2) as u16;
        let Some(grid) = (0..32).find_map(|attempt| {
            let spec = GenSpec::open(
                side,
                side,
                obstacles,
                TargetCount::Fixed(targets),
                seed * 131 + attempt,
            );
            grid::generate(&spec).ok()
        }) else {
            continue;
        };
        let holistic = min_vertex_cut(&grid, TargetSelection::All);
        let CutValue::Finite(value) = holistic.value else { continue };
        // Keep the exhaustive search tractable: size-4 cuts only on grids
        // with few candidate cells.
        let candidates = grid.interior_free_cells().count();
        if value > 4 || (value == 4 && candidates > 50) {
            continue;
        }
        cases.push(SmallCase { grid, holistic });
    }
    cases
});

fn pass(criterion: u8, label: &str) {
    println!("criterion {criterion} ({label}): pass");
}

#[test]
fn criterion_1_pathologic_reproduction() {
    let config = ExperimentConfig::preset(1, Scale::Desk).unwrap();
    let started = Instant::now();
    let (record, discards) = run_trial(&config, 0, 0, &NullClock).unwrap();
    let elapsed = started.elapsed();
    assert!(discards.is_empty(), "criterion 1: showcase trial must not discard");
    assert_eq!(record.robots_individual, 3, "criterion 1: individual robot count");
    assert_eq!(record.robots_holistic, 2, "criterion 1: holistic robot count");
    assert_eq!(record.savings(), Some(1), "criterion 1: savings");
    assert!(record.oracle_verified, "criterion 1: oracle verification");
    assert!(elapsed < Duration::from_secs(1), "criterion 1: took {elapsed:?}, budget 1s");
    pass(1, "pathologic reproduction");
}

#[test]
fn criterion_2_dominance_invariant() {
    let started = Instant::now();
    let records = &*DOMINANCE;
    let elapsed = started.elapsed();
    assert!(records.len() >= 5000, "criterion 2: only {} trials", records.len());

    let mut violations = 0usize;
    let mut compared = 0usize;
    for r in records {
        assert!(r.fully_feasible(), "criterion 2: generated trials must be feasible");
        compared += 1;
        if r.robots_holistic > r.robots_individual {
            violations += 1;
        }
    }
    assert_eq!(violations, 0, "criterion 2: {violations} dominance violations");
    assert!(compared >= 5000);
    assert!(
        elapsed < Duration::from_secs(300),
        "criterion 2: corpus took {elapsed:?}, budget 5 min"
    );
    pass(2, "dominance invariant, 5000+ trials");
}

#[test]
fn criterion_3_optimality_oracle() {
    let cases = &*SMALL_GRIDS;
    assert!(cases.len() >= 200, "criterion 3: only {} cases", cases.len());
    let mut mismatches = 0usize;
    for (i, case) in cases.iter().enumerate() {
        let CutValue::Finite(value) = case.holistic.value else { unreachable!() };
        let brute = brute_force_min_cut(&case.grid, value as usize);
        if brute != Some(value as usize) {
            mismatches += 1;
            eprintln!(
                "criterion 3: case {i}: holistic={value}, brute={brute:?}\n{}",
                case.grid.to_ascii()
            );
        }
    }
    assert_eq!(mismatches, 0, "criterion 3: {mismatches} optimality mismatches");
    pass(3, "optimality vs exhaustive search, 200+ grids");
}

#[test]
fn criterion_4_validity_oracle() {
    // Every randomized trial already ran the separation oracle on both
    // strategies; re-assert that none failed.
    for r in DOMINANCE.iter() {
        assert!(r.oracle_verified, "criterion 4: unverified dominance trial {}", r.trial);
    }

    // Separation plus leave-one-out minimality on the small-grid corpus and
    // the showcase map.
    let showcase = pathologic_environment();
    let showcase_cut = min_vertex_cut(&showcase, TargetSelection::All);
    let mut checked = 0usize;
    for (grid, cut) in SMALL_GRIDS
        .iter()
        .map(|c| (&c.grid, &c.holistic))
        .chain([(&showcase, &showcase_cut)])
    {
        let robots: BTreeSet<Coord> = cut.cells.iter().copied().collect();
        assert!(
            verify_separation(grid, &robots),
            "criterion 4: holistic placement leaks\n{}",
            grid.to_ascii()
        );
        for removed in &robots {
            let mut reduced = robots.clone();
            reduced.remove(removed);
            assert!(
                find_breach(grid, &reduced).is_some(),
                "criterion 4: placement is not minimal, {removed} is redundant\n{}",
                grid.to_ascii()
            );
        }
        checked += 1;
    }
    assert!(checked > 200);
    pass(4, "separation and one-robot minimality");
}

#[test]
fn criterion_5_flow_cut_duality() {
    // Debug assertions must be live: the solver checks duality on every
    // extraction across the whole suite.
    assert!(cfg!(debug_assertions), "criterion 5: suite must run with debug assertions");

    let mut checks = 0usize;
    let showcase = pathologic_environment();
    let mut cuts: Vec<CutResult> = vec![min_vertex_cut(&showcase, TargetSelection::All)];
    for id in 0..showcase.target_count() {
        cuts.push(min_vertex_cut(&showcase, TargetSelection::Single(id)));
    }
    for case in SMALL_GRIDS.iter() {
        cuts.push(case.holistic.clone());
    }
    for cut in &cuts {
        let CutValue::Finite(value) = cut.value else {
            panic!("criterion 5: expected finite cuts in this corpus");
        };
        assert_eq!(value, cut.flow_value, "criterion 5: flow != cut value");
        assert_eq!(value as usize, cut.cells.len(), "criterion 5: cut value != cell count");
        checks += 1;
    }
    assert!(checks > 200);
    pass(5, "max-flow equals min-cut on every solve");
}

#[test]
fn criterion_6_trend_reproduction() {
    for (fixture, what, finding) in [
        (&*EXP2, "open obstacle sweep interior peak", EXP2.trends.interior_peak),
        (&*EXP3, "closed obstacle sweep interior peak", EXP3.trends.interior_peak),
        (&*EXP4, "target scaling at least 2x", EXP4.trends.target_scaling),
        (&*EXP5, "small environments beat large", EXP5.trends.small_env_advantage),
    ] {
        let points = fixture.summary.points.len();
        assert!(points >= 8, "criterion 6: {what}: only {points} sweep points");
        assert!(
            fixture.config.trials_per_point >= 20,
            "criterion 6: {what}: too few trials per point"
        );
        assert_eq!(
            finding,
            Finding::Holds,
            "criterion 6: {what} does not hold (experiment {})",
            fixture.config.id
        );
        assert!(
            fixture.elapsed <= SWEEP_BUDGET,
            "criterion 6: experiment {} took {:?}, budget 10 min",
            fixture.config.id,
            fixture.elapsed
        );
        assert!(fixture.run.records.iter().all(|r| r.oracle_verified));
    }
    pass(6, "qualitative trends of all four sweeps");
}

#[test]
fn criterion_7_timing_crossover() {
    let rho = EXP2.trends.timing_ratio_rho.expect("criterion 7: rho must be defined");
    assert_eq!(
        EXP2.trends.timing_ratio_decreases,
        Finding::Holds,
        "criterion 7: holistic/parallel-individual ratio must fall with obstacles (rho={rho})"
    );
    assert!(rho < 0.0, "criterion 7: Spearman rho = {rho}, expected negative");
    println!(
        "criterion 7 detail: exp2 rho={rho:.4}, exp3 rho={:?}",
        EXP3.trends.timing_ratio_rho
    );
    pass(7, "holistic catches up as obstacles grow");
}

#[test]
fn criterion_8_determinism() {
    // In-process: same config, serial and parallel, thrice.
    let config = ExperimentConfig {
        id: 0,
        scenario: Scenario::Sweep(SweepScenario {
            kind: EnvironmentKind::Closed,
            variable: SweepVariable::Obstacles,
            from: 5,
            to: 25,
            step: 10,
            width: 24,
            height: 24,
            obstacle_count: 0,
            target_count: TargetCount::Range { min: 1, max: 4 },
            block_size: 3,
        }),
        trials_per_point: 8,
        master_seed: 2024,
    };
    let runs = [
        run_experiment(&config, &WallClock::new()).unwrap(),
        run_experiment(&config, &WallClock::new()).unwrap(),
        run_experiment_parallel(&config, &WallClock::new(), 2).unwrap(),
    ];
    let tables: Vec<(String, String)> = runs
        .iter()
        .map(|r| {
            (
                strip_timing_columns(&trials_csv(&r.records)),
                strip_timing_columns(&summary_csv(&summarize(&r.records))),
            )
        })
        .collect();
    assert_eq!(tables[0], tables[1], "criterion 8: in-process rerun differs");
    assert_eq!(tables[0], tables[2], "criterion 8: parallel run differs");

    // Through the binary: two sweeps of the bundled showcase config.
    let dir = tempfile::tempdir().unwrap();
    let config_path =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/exp1.cfg");
    let mut outputs = Vec::new();
    for sub in ["a", "b"] {
        let out_dir = dir.path().join(sub);
        let status = Command::new(env!("CARGO_BIN_EXE_cordon"))
            .arg("sweep")
            .arg(&config_path)
            .arg("-o")
            .arg(&out_dir)
            .env_remove("CORDON_SEED")
            .output()
            .expect("running the cordon binary");
        assert!(status.status.success(), "criterion 8: sweep failed: {status:?}");
        let trials = std::fs::read_to_string(out_dir.join("exp1_trials.csv")).unwrap();
        outputs.push(strip_timing_columns(&trials));
    }
    assert_eq!(outputs[0], outputs[1], "criterion 8: binary rerun differs");
    pass(8, "byte-identical results modulo timing columns");
}
