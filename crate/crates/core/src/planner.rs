//! The two placement strategies.
//!
//! *Individual*: solve one minimum vertex cut per target region and take the
//! union of the cut cells. Each per-target solve rebuilds its network from
//! the grid, so the recorded time divided by the target count is a fair
//! estimate of running the per-target solves in parallel.
//!
//! *Holistic*: attach all target regions to one merged sink and solve a
//! single cut. Never worse than the individual union, and often better when
//! targets share approach corridors.

use alloc::collections::BTreeSet;
use core::fmt;
use core::time::Duration;

use crate::clock::Clock;
use crate::grid::{Coord, OccupancyGrid};
use crate::maxflow::{min_vertex_cut, TargetSelection};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Approach {
    Individual,
    Holistic,
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Approach::Individual => "individual",
            Approach::Holistic => "holistic",
        })
    }
}

/// A monitor placement produced by one of the strategies.
#[derive(Clone, Debug)]
pub struct Placement {
    pub approach: Approach,
    /// Cells to occupy. For a partially infeasible individual solve this
    /// still holds the monitors for the targets that *could* be sealed; for
    /// an infeasible holistic solve it is empty.
    pub robots: BTreeSet<Coord>,
    /// True when every requested target can be sealed.
    pub feasible: bool,
    /// Individual only: feasibility per target id. Empty for holistic.
    pub per_target_feasible: alloc::vec::Vec<bool>,
    /// Wall time of the whole solve, network building included.
    pub solve_time: Duration,
    /// Individual only: wall time per target solve. Empty for holistic.
    pub per_target_times: alloc::vec::Vec<Duration>,
}

impl Placement {
    pub fn robot_count(&self) -> usize {
        self.robots.len()
    }
}

/// Seals each target with its own minimum cut and unions the results.
///
/// Panics if the grid has no targets.
pub fn solve_individual(grid: &OccupancyGrid, clock: &dyn Clock) -> Placement {
    let m = grid.target_count();
    assert!(m >= 1, "grid has no targets");
    let mut robots = BTreeSet::new();
    let mut per_target_feasible = alloc::vec::Vec::with_capacity(m as usize);
    let mut per_target_times = alloc::vec::Vec::with_capacity(m as usize);
    let start = clock.now();
    for id in 0..m {
        let t0 = clock.now();
        let cut = min_vertex_cut(grid, TargetSelection::Single(id));
        per_target_times.push(clock.now().saturating_sub(t0));
        per_target_feasible.push(cut.value.is_finite());
        robots.extend(cut.cells);
    }
    let solve_time = clock.now().saturating_sub(start);
    Placement {
        approach: Approach::Individual,
        feasible: per_target_feasible.iter().all(|f| *f),
        robots,
        per_target_feasible,
        solve_time,
        per_target_times,
    }
}

/// Seals all targets with one merged cut.
///
/// Panics if the grid has no targets.
pub fn solve_holistic(grid: &OccupancyGrid, clock: &dyn Clock) -> Placement {
    assert!(grid.target_count() >= 1, "grid has no targets");
    let start = clock.now();
    let cut = min_vertex_cut(grid, TargetSelection::All);
    let solve_time = clock.now().saturating_sub(start);
    let feasible = cut.value.is_finite();
    Placement {
        approach: Approach::Holistic,
        robots: cut.cells.into_iter().collect(),
        feasible,
        per_target_feasible: alloc::vec::Vec::new(),
        solve_time,
        per_target_times: alloc::vec::Vec::new(),
    }
}

/// Estimated wall time of the individual strategy if its per-target solves
/// ran on one worker each: total time divided by the number of targets.
///
/// Panics on non-individual placements.
pub fn parallel_individual_time_estimate(p: &Placement) -> Duration {
    assert_eq!(p.approach, Approach::Individual, "estimate needs an individual placement");
    let m = p.per_target_times.len() as u32;
    assert!(m >= 1);
    p.solve_time / m
}

/// The slowest single per-target solve — a lower bound on any parallel
/// schedule of the individual strategy.
///
/// Panics on non-individual placements.
pub fn max_per_target_time(p: &Placement) -> Duration {
    assert_eq!(p.approach, Approach::Individual, "estimate needs an individual placement");
    p.per_target_times.iter().copied().max().unwrap_or(Duration::ZERO)
}
