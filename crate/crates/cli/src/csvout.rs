//! CSV serialization of experiment results.
//!
//! Hand-rolled on purpose: no value ever contains a comma or quote, and
//! keeping the writer trivial makes the column contract easy to audit. All
//! timing columns sit at the end and carry a `_ns` suffix, so two runs of the
//! same seed can be compared by dropping them (see [`strip_timing_columns`]).

use cordon_core::experiments::{SweepSummary, TrialRecord};

/// Column order of the per-trial table.
pub const TRIAL_COLUMNS: &[&str] = &[
    "experiment",
    "point_index",
    "point",
    "trial",
    "seed",
    "targets",
    "robots_individual",
    "robots_holistic",
    "savings",
    "feasible_individual",
    "feasible_holistic",
    "saturated",
    "oracle_verified",
    "time_individual_total_ns",
    "time_individual_parallel_ns",
    "time_individual_max_target_ns",
    "time_holistic_ns",
];

/// Column order of the per-point summary table.
pub const SUMMARY_COLUMNS: &[&str] = &[
    "point",
    "trials",
    "feasible_trials",
    "saturated",
    "savings_mean",
    "savings_p5",
    "savings_p25",
    "savings_median",
    "savings_p75",
    "savings_p95",
    "time_individual_total_median_ns",
    "time_individual_parallel_median_ns",
    "time_holistic_median_ns",
];

/// One row per trial. Savings is empty unless both strategies were feasible.
pub fn trials_csv(records: &[TrialRecord]) -> String {
    let mut out = TRIAL_COLUMNS.join(",");
    out.push('\n');
    for r in records {
        let savings = r.savings().map_or(String::new(), |s| s.to_string());
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{savings},{},{},{},{},{},{},{},{}\n",
            r.experiment,
            r.point_index,
            r.point,
            r.trial,
            r.seed,
            r.target_count,
            r.robots_individual,
            r.robots_holistic,
            r.feasible_individual,
            r.feasible_holistic,
            r.saturated,
            r.oracle_verified,
            r.time_individual_total.as_nanos(),
            r.time_individual_parallel.as_nanos(),
            r.time_individual_max_target.as_nanos(),
            r.time_holistic.as_nanos(),
        ));
    }
    out
}

/// One row per sweep point. Statistics over zero feasible trials are empty
/// cells.
pub fn summary_csv(summary: &SweepSummary) -> String {
    let mut out = SUMMARY_COLUMNS.join(",");
    out.push('\n');
    for p in &summary.points {
        let mean = p.mean_savings.map_or(String::new(), |m| format!("{m:.4}"));
        let sv = |f: fn(&cordon_core::experiments::Percentiles<i64>) -> i64| {
            p.savings.as_ref().map_or(String::new(), |s| f(s).to_string())
        };
        let med = |perc: &Option<cordon_core::experiments::Percentiles<core::time::Duration>>| {
            perc.as_ref()
                .map_or(String::new(), |t| t.median.as_nanos().to_string())
        };
        out.push_str(&format!(
            "{},{},{},{},{mean},{},{},{},{},{},{},{},{}\n",
            p.point,
            p.trials,
            p.feasible_trials,
            p.saturated,
            sv(|s| s.p5),
            sv(|s| s.p25),
            sv(|s| s.median),
            sv(|s| s.p75),
            sv(|s| s.p95),
            med(&p.time_individual_total),
            med(&p.time_individual_parallel),
            med(&p.time_holistic),
        ));
    }
    out
}

/// Drops every `*_ns` column, leaving only the seed-determined cells. Two
/// runs with the same configuration must agree on the result byte for byte.
pub fn strip_timing_columns(csv: &str) -> String {
    let mut lines = csv.lines();
    let Some(header) = lines.next() else {
        return String::new();
    };
    let keep: Vec<bool> = header.split(',').map(|name| !name.ends_with("_ns")).collect();
    let filter = |line: &str| -> String {
        line.split(',')
            .zip(&keep)
            .filter(|(_, k)| **k)
            .map(|(cell, _)| cell)
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut out = filter(header);
    out.push('\n');
    for line in lines {
        out.push_str(&filter(line));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use cordon_core::clock::NullClock;
    use cordon_core::experiments::{run_experiment, summarize, ExperimentConfig, Scale};

    fn showcase_records() -> Vec<TrialRecord> {
        let config = ExperimentConfig::preset(1, Scale::Desk).unwrap();
        run_experiment(&config, &NullClock).unwrap().records
    }

    #[test]
    fn trial_rows_match_the_column_contract() {
        let records = showcase_records();
        let csv = trials_csv(&records);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), TRIAL_COLUMNS.join(","));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), TRIAL_COLUMNS.len());
        assert_eq!(row[0], "1"); // experiment
        assert_eq!(row[5], "3"); // targets
        assert_eq!(row[6], "3"); // robots_individual
        assert_eq!(row[7], "2"); // robots_holistic
        assert_eq!(row[8], "1"); // savings
        assert_eq!(row[12], "true"); // oracle_verified
        assert!(lines.next().is_none());
    }

    #[test]
    fn infeasible_trials_have_empty_savings() {
        let mut records = showcase_records();
        records[0].feasible_holistic = false;
        let csv = trials_csv(&records);
        let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[8], "");
    }

    #[test]
    fn summary_rows_match_the_column_contract() {
        let records = showcase_records();
        let csv = summary_csv(&summarize(&records));
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), SUMMARY_COLUMNS.join(","));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), SUMMARY_COLUMNS.len());
        assert_eq!(row[1], "1"); // trials
        assert_eq!(row[2], "1"); // feasible_trials
        assert_eq!(row[4], "1.0000"); // savings_mean
        assert_eq!(row[7], "1"); // savings_median
    }

    #[test]
    fn stripping_removes_exactly_the_timing_columns() {
        let records = showcase_records();
        let stripped = strip_timing_columns(&trials_csv(&records));
        let header: Vec<&str> = stripped.lines().next().unwrap().split(',').collect();
        assert_eq!(header.len(), TRIAL_COLUMNS.len() - 4);
        assert!(!header.iter().any(|h| h.ends_with("_ns")));
        for line in stripped.lines().skip(1) {
            assert_eq!(line.split(',').count(), header.len());
        }
    }

    #[test]
    fn stripped_output_is_identical_across_reruns() {
        let a = strip_timing_columns(&trials_csv(&showcase_records()));
        let b = strip_timing_columns(&trials_csv(&showcase_records()));
        assert_eq!(a, b);
    }
}
