//! Experiment configuration files.
//!
//! A config is a flat `key = value` list under an `[experiment]` header, with
//! `#` comments:
//!
//! ```text
//! [experiment]
//! experiment = 2     # preset 1-5, or `custom`
//! scale = desk       # desk | paper (preset base, default desk)
//! trials = 10        # overrides below are optional for presets
//! seed = 99
//! ```
//!
//! `experiment = custom` builds a sweep from scratch; then `kind`, `sweep`,
//! `from`, `to`, `step`, `width`, `height`, `trials` and `targets` are
//! required, `obstacles` is required unless it is the swept variable, and
//! `block-size` (default 3) and `seed` (default 0) are optional. For presets
//! every one of those keys acts as an override. The showcase preset
//! (`experiment = 1`) has no sweep, so only `trials` and `seed` apply.

use std::collections::BTreeMap;

use cordon_core::experiments::{
    ExperimentConfig, Scale, Scenario, SweepScenario, SweepVariable,
};
use cordon_core::grid::{EnvironmentKind, TargetCount, DEFAULT_BLOCK_SIZE};

use crate::FormatError;

const KEYS: &[&str] = &[
    "experiment",
    "scale",
    "seed",
    "trials",
    "kind",
    "sweep",
    "from",
    "to",
    "step",
    "width",
    "height",
    "obstacles",
    "targets",
    "block-size",
];

/// Keys that shape the sweep and therefore mean nothing for the showcase
/// preset.
const SWEEP_KEYS: &[&str] = &[
    "kind", "sweep", "from", "to", "step", "width", "height", "obstacles", "targets",
    "block-size",
];

/// Parses `N` or `MIN-MAX` into a target count. Also serves as the clap value
/// parser for `--targets`.
pub fn parse_target_count(raw: &str) -> Result<TargetCount, String> {
    let parse = |s: &str| {
        s.trim()
            .parse::<u16>()
            .map_err(|_| format!("bad target count {raw:?}: expected `N` or `MIN-MAX`"))
    };
    match raw.split_once('-') {
        Some((min, max)) => Ok(TargetCount::Range { min: parse(min)?, max: parse(max)? }),
        None => Ok(TargetCount::Fixed(parse(raw)?)),
    }
}

/// Parses a config file into an experiment description.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, FormatError> {
    let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !seen_header {
            if line != "[experiment]" {
                return Err(FormatError::at(n, "expected `[experiment]` header"));
            }
            seen_header = true;
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(FormatError::at(n, format!("expected `key = value`, got {line:?}")));
        };
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(FormatError::at(n, format!("unknown key {key:?}")));
        }
        if value.is_empty() {
            return Err(FormatError::at(n, format!("key {key:?} has no value")));
        }
        if entries.insert(key, (n, value)).is_some() {
            return Err(FormatError::at(n, format!("duplicate key {key:?}")));
        }
    }
    if !seen_header {
        return Err(FormatError::whole("missing `[experiment]` header"));
    }
    build(&entries)
}

fn build(entries: &BTreeMap<&str, (usize, &str)>) -> Result<ExperimentConfig, FormatError> {
    let scale = match entries.get("scale") {
        None => Scale::Desk,
        Some(&(_, "desk")) => Scale::Desk,
        Some(&(_, "paper")) => Scale::Paper,
        Some(&(n, other)) => {
            return Err(FormatError::at(n, format!("scale must be desk or paper, got {other:?}")))
        }
    };

    let &(exp_line, exp) = entries
        .get("experiment")
        .ok_or_else(|| FormatError::whole("missing key `experiment`"))?;
    let mut config = if exp == "custom" {
        custom_config(entries)?
    } else {
        let id: u8 = exp.parse().map_err(|_| {
            FormatError::at(exp_line, format!("experiment must be 1-5 or `custom`, got {exp:?}"))
        })?;
        ExperimentConfig::preset(id, scale).ok_or_else(|| {
            FormatError::at(exp_line, format!("experiment must be 1-5 or `custom`, got {id}"))
        })?
    };

    apply_overrides(&mut config, entries)?;
    config
        .validate()
        .map_err(|e| FormatError::whole(e.to_string()))?;
    Ok(config)
}

fn custom_config(entries: &BTreeMap<&str, (usize, &str)>) -> Result<ExperimentConfig, FormatError> {
    let variable = require(entries, "sweep").and_then(sweep_variable)?;
    let scenario = SweepScenario {
        kind: require(entries, "kind").and_then(environment_kind)?,
        variable,
        from: require(entries, "from").and_then(int)?,
        to: require(entries, "to").and_then(int)?,
        step: require(entries, "step").and_then(int)?,
        width: require(entries, "width").and_then(int)?,
        height: require(entries, "height").and_then(int)?,
        obstacle_count: match variable {
            SweepVariable::Obstacles => 0,
            _ => require(entries, "obstacles").and_then(int)?,
        },
        target_count: require(entries, "targets")
            .and_then(|(n, raw)| parse_target_count(raw).map_err(|e| FormatError::at(n, e)))?,
        block_size: match entries.get("block-size") {
            Some(&entry) => int(entry)?,
            None => DEFAULT_BLOCK_SIZE,
        },
    };
    Ok(ExperimentConfig {
        id: 0,
        scenario: Scenario::Sweep(scenario),
        trials_per_point: require(entries, "trials").and_then(int)?,
        master_seed: match entries.get("seed") {
            Some(&entry) => int(entry)?,
            None => 0,
        },
    })
}

fn apply_overrides(
    config: &mut ExperimentConfig,
    entries: &BTreeMap<&str, (usize, &str)>,
) -> Result<(), FormatError> {
    if let Some(&entry) = entries.get("trials") {
        config.trials_per_point = int(entry)?;
    }
    if let Some(&entry) = entries.get("seed") {
        config.master_seed = int(entry)?;
    }
    match &mut config.scenario {
        Scenario::Pathologic => {
            for key in SWEEP_KEYS {
                if let Some(&(n, _)) = entries.get(key) {
                    return Err(FormatError::at(
                        n,
                        format!("experiment 1 has no sweep; key {key:?} does not apply"),
                    ));
                }
            }
        }
        Scenario::Sweep(sw) => {
            if let Some(&entry) = entries.get("kind") {
                sw.kind = environment_kind(entry)?;
            }
            if let Some(&entry) = entries.get("sweep") {
                sw.variable = sweep_variable(entry)?;
            }
            if let Some(&entry) = entries.get("from") {
                sw.from = int(entry)?;
            }
            if let Some(&entry) = entries.get("to") {
                sw.to = int(entry)?;
            }
            if let Some(&entry) = entries.get("step") {
                sw.step = int(entry)?;
            }
            if let Some(&entry) = entries.get("width") {
                sw.width = int(entry)?;
            }
            if let Some(&entry) = entries.get("height") {
                sw.height = int(entry)?;
            }
            if let Some(&entry) = entries.get("obstacles") {
                sw.obstacle_count = int(entry)?;
            }
            if let Some(&(n, raw)) = entries.get("targets") {
                sw.target_count =
                    parse_target_count(raw).map_err(|e| FormatError::at(n, e))?;
            }
            if let Some(&entry) = entries.get("block-size") {
                sw.block_size = int(entry)?;
            }
        }
    }
    Ok(())
}

fn require<'a>(
    entries: &BTreeMap<&str, (usize, &'a str)>,
    key: &str,
) -> Result<(usize, &'a str), FormatError> {
    entries
        .get(key)
        .copied()
        .ok_or_else(|| FormatError::whole(format!("custom experiment needs key {key:?}")))
}

fn int<T: core::str::FromStr>((line, raw): (usize, &str)) -> Result<T, FormatError> {
    raw.parse()
        .map_err(|_| FormatError::at(line, format!("bad number {raw:?}")))
}

fn environment_kind((line, raw): (usize, &str)) -> Result<EnvironmentKind, FormatError> {
    match raw {
        "open" => Ok(EnvironmentKind::Open),
        "closed" => Ok(EnvironmentKind::Closed),
        _ => Err(FormatError::at(line, format!("kind must be open or closed, got {raw:?}"))),
    }
}

fn sweep_variable((line, raw): (usize, &str)) -> Result<SweepVariable, FormatError> {
    match raw {
        "obstacles" => Ok(SweepVariable::Obstacles),
        "targets" => Ok(SweepVariable::Targets),
        "size" => Ok(SweepVariable::Size),
        _ => Err(FormatError::at(
            line,
            format!("sweep must be obstacles, targets or size, got {raw:?}"),
        )),
    }
}
