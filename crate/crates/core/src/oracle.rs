//! Independent checkers for solver output.
//!
//! Everything here is deliberately built on plain breadth-first search over
//! the grid — no flow networks, no shared code with the solvers — so that an
//! agreement between solver and oracle actually means something.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use itertools::Itertools;

use crate::grid::{CellState, Coord, OccupancyGrid};

/// Core reachability probe: starting from every free border cell, can a walk
/// over traversable, unblocked cells reach any target? Returns the first
/// such walk found (border cell first, target cell last), or `None` when the
/// targets are sealed.
fn search_for_breach(
    grid: &OccupancyGrid,
    mut blocked: impl FnMut(Coord) -> bool,
) -> Option<Vec<Coord>> {
    let width = grid.width();
    let mut parent: Vec<u32> = vec![u32::MAX; grid.area()];
    let mut queue = VecDeque::new();
    let idx = |c: Coord| c.row * width + c.col;

    for start in grid.border_free_cells() {
        if blocked(start) {
            continue;
        }
        parent[idx(start)] = idx(start) as u32;
        queue.push_back(start);
    }
    while let Some(c) = queue.pop_front() {
        if matches!(grid.cell(c), CellState::Target(_)) {
            // Walk parents back to the border.
            let mut path = vec![c];
            let mut at = c;
            while parent[idx(at)] != idx(at) as u32 {
                let p = parent[idx(at)] as usize;
                at = Coord::new(p / width, p % width);
                path.push(at);
            }
            path.reverse();
            return Some(path);
        }
        for n in grid.neighbors(c) {
            if grid.cell(n) == CellState::Obstacle || blocked(n) {
                continue;
            }
            if parent[idx(n)] == u32::MAX {
                parent[idx(n)] = idx(c) as u32;
                queue.push_back(n);
            }
        }
    }
    None
}

/// True when the monitors in `robots` cut every path from the free border to
/// every target cell.
///
/// Panics if a robot sits on a non-free or border cell — such a placement is
/// a caller bug, not an unsafe environment.
pub fn verify_separation(grid: &OccupancyGrid, robots: &BTreeSet<Coord>) -> bool {
    find_breach(grid, robots).is_none()
}

/// Like [`verify_separation`], but on failure returns a witness walk from a
/// free border cell to a target that avoids every robot.
pub fn find_breach(grid: &OccupancyGrid, robots: &BTreeSet<Coord>) -> Option<Vec<Coord>> {
    for r in robots {
        assert!(
            grid.in_bounds(*r) && grid.cell(*r) == CellState::Free && !grid.is_border(*r),
            "robot at {r} is not on an interior free cell"
        );
    }
    search_for_breach(grid, |c| robots.contains(&c))
}

/// Smallest number of interior free cells whose removal seals every target,
/// found by exhaustive search over all subsets of size `0..=max_size`.
/// Returns `None` when even `max_size` cells are not enough.
///
/// Exponential, of course; meant for cross-checking the flow solver on small
/// grids.
pub fn brute_force_min_cut(grid: &OccupancyGrid, max_size: usize) -> Option<usize> {
    let candidates: Vec<Coord> = grid.interior_free_cells().collect();
    let mut blocked = vec![false; grid.area()];
    let idx = |c: Coord| c.row * grid.width() + c.col;
    for size in 0..=max_size.min(candidates.len()) {
        for combo in (0..candidates.len()).combinations(size) {
            for &i in &combo {
                blocked[idx(candidates[i])] = true;
            }
            let sealed = search_for_breach(grid, |c| blocked[idx(c)]).is_none();
            for &i in &combo {
                blocked[idx(candidates[i])] = false;
            }
            if sealed {
                return Some(size);
            }
        }
    }
    None
}
