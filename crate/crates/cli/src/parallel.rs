//! Multi-threaded experiment execution.
//!
//! Trials are independent once seeded, so workers pull (point, trial) tasks
//! from a shared cursor and write into preassigned result slots. Reassembling
//! the slots in task order makes the output identical to the serial runner no
//! matter how the threads interleave.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use cordon_core::clock::Clock;
use cordon_core::experiments::{
    run_experiment, run_trial, Discard, ExperimentConfig, ExperimentError, ExperimentRun,
    TrialRecord,
};

type TrialResult = Result<(TrialRecord, Vec<Discard>), ExperimentError>;

/// Runs an experiment on `jobs` worker threads. `jobs <= 1` falls back to the
/// serial runner; the results are equal either way, byte for byte.
pub fn run_experiment_parallel<C: Clock + Sync>(
    config: &ExperimentConfig,
    clock: &C,
    jobs: usize,
) -> Result<ExperimentRun, ExperimentError> {
    if jobs <= 1 {
        return run_experiment(config, clock);
    }
    config.validate()?;

    let tasks: Vec<(usize, usize)> = (0..config.points().len())
        .flat_map(|point| (0..config.trials_per_point).map(move |trial| (point, trial)))
        .collect();
    let cursor = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<TrialResult>>> = Mutex::new(vec![None; tasks.len()]);

    std::thread::scope(|scope| {
        for _ in 0..jobs.min(tasks.len()) {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                let Some(&(point, trial)) = tasks.get(i) else {
                    return;
                };
                let result = run_trial(config, point, trial, clock);
                slots.lock().unwrap()[i] = Some(result);
            });
        }
    });

    let mut run = ExperimentRun { records: Vec::new(), discards: Vec::new() };
    for slot in slots.into_inner().unwrap() {
        let (record, mut discards) = slot.expect("worker left a task unfinished")?;
        run.records.push(record);
        run.discards.append(&mut discards);
    }
    Ok(run)
}
