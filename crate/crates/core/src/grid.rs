//! Occupancy-grid environment model and the seeded random generators that
//! produce experiment environments.
//!
//! A grid is a `width x height` array of cells in row-major order, row 0 at
//! the top. Connectivity is 4-adjacency throughout. The outermost ring of
//! cells is the *border*; anything that reaches a free border cell is
//! considered connected to the outside world.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Number of target ids that fit in the `A`-`Z` / `a`-`z` character alphabet
/// used by the text fixtures and the on-disk map format.
pub const LETTER_TARGET_IDS: u16 = 52;

/// Grid coordinate. `row` 0 is the top row, `col` 0 the leftmost column.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Coord {
    pub row: usize,
    pub col: usize,
}

impl Coord {
    pub fn new(row: usize, col: usize) -> Self {
        Coord { row, col }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

/// State of a single grid cell.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CellState {
    /// Traversable open space.
    Free,
    /// Impassable cell.
    Obstacle,
    /// Cell belonging to the target region with this id. Targets stay
    /// traversable; they differ from `Free` only in being the regions the
    /// placement must seal off.
    Target(u16),
}

/// Errors from grid construction and generation.
#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum GridError {
    /// A structural parameter is out of range or inconsistent.
    #[error("invalid grid spec: {0}")]
    InvalidSpec(&'static str),
    /// Target placement ran out of eligible cells.
    #[error("cannot place {needed} targets: only {available} eligible interior cells")]
    PlacementExhausted { needed: usize, available: usize },
    /// A text fixture contained a character or shape the parser rejects.
    #[error("bad grid text: {0}")]
    BadText(&'static str),
}

/// Occupancy grid with zero or more target regions.
///
/// Target ids are contiguous: a grid with `target_count() == m` uses exactly
/// the ids `0..m`, each on at least one cell.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OccupancyGrid {
    width: usize,
    height: usize,
    cells: Vec<CellState>,
    target_count: u16,
}

impl OccupancyGrid {
    /// Minimum side length. Anything smaller has no interior.
    pub const MIN_SIDE: usize = 3;

    /// Creates an all-free grid.
    pub fn new(width: usize, height: usize) -> Result<Self, GridError> {
        if width < Self::MIN_SIDE || height < Self::MIN_SIDE {
            return Err(GridError::InvalidSpec("grid sides must be at least 3"));
        }
        Ok(OccupancyGrid {
            width,
            height,
            cells: vec![CellState::Free; width * height],
            target_count: 0,
        })
    }

    /// Builds a grid from an explicit row-major cell vector.
    ///
    /// Validates dimensions and that target ids are exactly `0..m` for some
    /// `m`, each used at least once.
    pub fn from_cells(
        width: usize,
        height: usize,
        cells: Vec<CellState>,
    ) -> Result<Self, GridError> {
        if width < Self::MIN_SIDE || height < Self::MIN_SIDE {
            return Err(GridError::InvalidSpec("grid sides must be at least 3"));
        }
        if cells.len() != width * height {
            return Err(GridError::InvalidSpec("cell vector length != width * height"));
        }
        let mut max_id: Option<u16> = None;
        for cell in &cells {
            if let CellState::Target(id) = cell {
                max_id = Some(max_id.map_or(*id, |m| m.max(*id)));
            }
        }
        let target_count = max_id.map_or(0, |m| m + 1);
        let mut seen = vec![false; target_count as usize];
        for cell in &cells {
            if let CellState::Target(id) = cell {
                seen[*id as usize] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(GridError::InvalidSpec("target ids must be contiguous from 0"));
        }
        Ok(OccupancyGrid { width, height, cells, target_count })
    }

    /// Parses a fixture written as ASCII art: one line per row, `.` free,
    /// `#` obstacle, `A`-`Z` targets 0-25, `a`-`z` targets 26-51.
    ///
    /// Meant for hand-written test maps; the on-disk map format (with its
    /// header and support for >52 targets) lives in the companion crate.
    pub fn from_ascii(art: &str) -> Result<Self, GridError> {
        let rows: Vec<&str> = art.lines().filter(|l| !l.trim().is_empty()).collect();
        if rows.is_empty() {
            return Err(GridError::BadText("no rows"));
        }
        let width = rows[0].trim().len();
        let height = rows.len();
        let mut cells = Vec::with_capacity(width * height);
        for row in &rows {
            let row = row.trim();
            if row.len() != width {
                return Err(GridError::BadText("ragged rows"));
            }
            for ch in row.chars() {
                cells.push(match ch {
                    '.' => CellState::Free,
                    '#' => CellState::Obstacle,
                    'A'..='Z' => CellState::Target(ch as u16 - 'A' as u16),
                    'a'..='z' => CellState::Target(ch as u16 - 'a' as u16 + 26),
                    _ => return Err(GridError::BadText("unknown cell character")),
                });
            }
        }
        Self::from_cells(width, height, cells)
    }

    /// Renders the grid in the same alphabet `from_ascii` accepts. Target ids
    /// beyond the letter range render as `*`.
    pub fn to_ascii(&self) -> String {
        let mut out = String::with_capacity((self.width + 1) * self.height);
        for row in 0..self.height {
            for col in 0..self.width {
                out.push(match self.cell(Coord::new(row, col)) {
                    CellState::Free => '.',
                    CellState::Obstacle => '#',
                    CellState::Target(id) if id < 26 => (b'A' + id as u8) as char,
                    CellState::Target(id) if id < LETTER_TARGET_IDS => {
                        (b'a' + (id - 26) as u8) as char
                    }
                    CellState::Target(_) => '*',
                });
            }
            out.push('\n');
        }
        out
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Total cell count, obstacles included.
    pub fn area(&self) -> usize {
        self.width * self.height
    }

    /// Number of distinct target regions.
    pub fn target_count(&self) -> u16 {
        self.target_count
    }

    #[inline]
    fn idx(&self, c: Coord) -> usize {
        debug_assert!(self.in_bounds(c));
        c.row * self.width + c.col
    }

    #[inline]
    pub fn in_bounds(&self, c: Coord) -> bool {
        c.row < self.height && c.col < self.width
    }

    #[inline]
    pub fn cell(&self, c: Coord) -> CellState {
        self.cells[self.idx(c)]
    }

    pub(crate) fn set_cell(&mut self, c: Coord, state: CellState) {
        let i = self.idx(c);
        self.cells[i] = state;
    }

    /// True for cells on the outermost ring.
    #[inline]
    pub fn is_border(&self, c: Coord) -> bool {
        c.row == 0 || c.col == 0 || c.row == self.height - 1 || c.col == self.width - 1
    }

    /// 4-neighbors in fixed order: up, down, left, right.
    pub fn neighbors(&self, c: Coord) -> impl Iterator<Item = Coord> + '_ {
        assert!(self.in_bounds(c), "neighbors of out-of-bounds cell {c}");
        let up = (c.row > 0).then(|| Coord::new(c.row - 1, c.col));
        let down = (c.row + 1 < self.height).then(|| Coord::new(c.row + 1, c.col));
        let left = (c.col > 0).then(|| Coord::new(c.row, c.col - 1));
        let right = (c.col + 1 < self.width).then(|| Coord::new(c.row, c.col + 1));
        [up, down, left, right].into_iter().flatten()
    }

    /// All coordinates in row-major order.
    pub fn coords(&self) -> impl Iterator<Item = Coord> + '_ {
        (0..self.height).flat_map(move |row| (0..self.width).map(move |col| Coord::new(row, col)))
    }

    pub fn free_cell_count(&self) -> usize {
        self.cells.iter().filter(|c| **c == CellState::Free).count()
    }

    pub fn obstacle_count(&self) -> usize {
        self.cells.iter().filter(|c| **c == CellState::Obstacle).count()
    }

    /// Free cells on the border ring, row-major.
    pub fn border_free_cells(&self) -> impl Iterator<Item = Coord> + '_ {
        self.coords()
            .filter(|c| self.is_border(*c) && self.cell(*c) == CellState::Free)
    }

    /// Cells of one target region, row-major.
    pub fn cells_of_target(&self, id: u16) -> impl Iterator<Item = Coord> + '_ {
        self.coords().filter(move |c| self.cell(*c) == CellState::Target(id))
    }

    /// All target cells with their ids, row-major.
    pub fn target_cells(&self) -> impl Iterator<Item = (Coord, u16)> + '_ {
        self.coords().filter_map(move |c| match self.cell(c) {
            CellState::Target(id) => Some((c, id)),
            _ => None,
        })
    }

    /// Interior free cells — the candidate positions for monitors.
    pub fn interior_free_cells(&self) -> impl Iterator<Item = Coord> + '_ {
        self.coords()
            .filter(|c| !self.is_border(*c) && self.cell(*c) == CellState::Free)
    }

    /// Cells eligible to become targets: interior free cells that do not
    /// touch a free border cell.
    ///
    /// A target 4-adjacent to a free border cell can never be sealed off —
    /// monitors sit on interior free cells, and there is no interior cell on a
    /// path of length one — so such placements are rejected at generation
    /// time rather than produced and discarded as unsolvable. Targets placed
    /// this way may still end up adjacent to each other; that is fine, because
    /// every path from the border into the clump crosses an eligible (hence
    /// interior, non-border-adjacent) free cell.
    pub fn target_eligible_cells(&self) -> impl Iterator<Item = Coord> + '_ {
        self.interior_free_cells().filter(move |c| {
            !self
                .neighbors(*c)
                .any(|n| self.is_border(n) && self.cell(n) == CellState::Free)
        })
    }
}

/// Which random environment family to generate.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EnvironmentKind {
    /// Open field scattered with random axis-aligned rectangular obstacles.
    Open,
    /// City-block maze: square blocks separated by 1-wide streets, with a
    /// chosen number of street intersections blocked off.
    Closed,
}

impl fmt::Display for EnvironmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnvironmentKind::Open => "open",
            EnvironmentKind::Closed => "closed",
        })
    }
}

/// Number of targets to place: fixed, or drawn uniformly from an inclusive
/// range per trial.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TargetCount {
    Fixed(u16),
    Range { min: u16, max: u16 },
}

impl TargetCount {
    pub fn validate(&self) -> Result<(), GridError> {
        match *self {
            TargetCount::Fixed(n) if n >= 1 => Ok(()),
            TargetCount::Range { min, max } if min >= 1 && min <= max => Ok(()),
            _ => Err(GridError::InvalidSpec("target count must be >= 1 and min <= max")),
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> u16 {
        match *self {
            TargetCount::Fixed(n) => n,
            TargetCount::Range { min, max } => rng.gen_range(min..=max),
        }
    }
}

impl fmt::Display for TargetCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetCount::Fixed(n) => write!(f, "{n}"),
            TargetCount::Range { min, max } => write!(f, "{min}-{max}"),
        }
    }
}

/// Complete recipe for one random environment.
///
/// The same spec (same seed included) always produces the same grid, bit for
/// bit, on every platform.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GenSpec {
    pub kind: EnvironmentKind,
    pub width: usize,
    pub height: usize,
    /// Open: number of rectangles stamped. Closed: number of street
    /// intersections blocked (clamped to the number that exist).
    pub obstacle_count: usize,
    pub target_count: TargetCount,
    /// Side length of city blocks; ignored for open environments.
    pub block_size: usize,
    pub seed: u64,
}

/// Default city-block side length.
pub const DEFAULT_BLOCK_SIZE: usize = 3;

/// Largest obstacle-rectangle side in open environments (clamped to the grid
/// dimension).
pub const MAX_RECT_SIDE: usize = 10;

impl GenSpec {
    pub fn open(
        width: usize,
        height: usize,
        obstacle_count: usize,
        target_count: TargetCount,
        seed: u64,
    ) -> Self {
        GenSpec {
            kind: EnvironmentKind::Open,
            width,
            height,
            obstacle_count,
            target_count,
            block_size: DEFAULT_BLOCK_SIZE,
            seed,
        }
    }

    pub fn closed(
        width: usize,
        height: usize,
        blocked_intersections: usize,
        target_count: TargetCount,
        block_size: usize,
        seed: u64,
    ) -> Self {
        GenSpec {
            kind: EnvironmentKind::Closed,
            width,
            height,
            obstacle_count: blocked_intersections,
            target_count,
            block_size,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), GridError> {
        if self.width < OccupancyGrid::MIN_SIDE || self.height < OccupancyGrid::MIN_SIDE {
            return Err(GridError::InvalidSpec("grid sides must be at least 3"));
        }
        if self.kind == EnvironmentKind::Closed && self.block_size < 1 {
            return Err(GridError::InvalidSpec("block size must be at least 1"));
        }
        self.target_count.validate()
    }

    /// True when a closed spec asks for more blocked intersections than the
    /// street layout has. The generator then blocks them all; sweeps record
    /// the point as saturated.
    pub fn is_saturated(&self) -> bool {
        self.kind == EnvironmentKind::Closed
            && self.obstacle_count > ClosedLayout::new(self.width, self.height, self.block_size)
                .intersection_count()
    }
}

/// Street geometry of a closed environment, before any intersections are
/// blocked.
#[derive(Clone, Copy, Debug)]
pub struct ClosedLayout {
    width: usize,
    height: usize,
    /// Streets repeat every `block_size + 1` rows/columns.
    period: usize,
}

impl ClosedLayout {
    pub fn new(width: usize, height: usize, block_size: usize) -> Self {
        assert!(block_size >= 1, "block size must be at least 1");
        ClosedLayout { width, height, period: block_size + 1 }
    }

    /// Rows carrying an east-west street. The last row is forced to be a
    /// street so blocks never touch the border.
    #[inline]
    pub fn is_street_row(&self, row: usize) -> bool {
        row % self.period == 0 || row == self.height - 1
    }

    #[inline]
    pub fn is_street_col(&self, col: usize) -> bool {
        col % self.period == 0 || col == self.width - 1
    }

    /// True for any cell lying on a street.
    #[inline]
    pub fn is_street(&self, c: Coord) -> bool {
        self.is_street_row(c.row) || self.is_street_col(c.col)
    }

    /// True where a row street crosses a column street.
    #[inline]
    pub fn is_intersection(&self, c: Coord) -> bool {
        self.is_street_row(c.row) && self.is_street_col(c.col)
    }

    /// All intersections, row-major.
    pub fn intersections(&self) -> Vec<Coord> {
        let mut out = Vec::new();
        for row in 0..self.height {
            if !self.is_street_row(row) {
                continue;
            }
            for col in 0..self.width {
                if self.is_street_col(col) {
                    out.push(Coord::new(row, col));
                }
            }
        }
        out
    }

    pub fn intersection_count(&self) -> usize {
        let rows = (0..self.height).filter(|r| self.is_street_row(*r)).count();
        let cols = (0..self.width).filter(|c| self.is_street_col(*c)).count();
        rows * cols
    }
}

/// Stamps `spec.obstacle_count` random rectangles onto `grid`.
fn fill_open<R: Rng>(grid: &mut OccupancyGrid, spec: &GenSpec, rng: &mut R) {
    let max_w = MAX_RECT_SIDE.min(spec.width);
    let max_h = MAX_RECT_SIDE.min(spec.height);
    for _ in 0..spec.obstacle_count {
        // Side lengths first, then a position where the rectangle fits whole.
        let rect_w = rng.gen_range(2..=max_w);
        let rect_h = rng.gen_range(2..=max_h);
        let top = rng.gen_range(0..=spec.height - rect_h);
        let left = rng.gen_range(0..=spec.width - rect_w);
        for row in top..top + rect_h {
            for col in left..left + rect_w {
                grid.set_cell(Coord::new(row, col), CellState::Obstacle);
            }
        }
    }
}

/// Carves the city-block maze and blocks a random sample of intersections.
fn fill_closed<R: Rng>(grid: &mut OccupancyGrid, spec: &GenSpec, rng: &mut R) {
    let layout = ClosedLayout::new(spec.width, spec.height, spec.block_size);
    for c in layout_block_cells(&layout) {
        grid.set_cell(c, CellState::Obstacle);
    }
    let intersections = layout.intersections();
    let take = spec.obstacle_count.min(intersections.len());
    // Sample without replacement; index order is part of the deterministic
    // output and must not change.
    let picks = rand::seq::index::sample(rng, intersections.len(), take);
    for i in picks.iter() {
        grid.set_cell(intersections[i], CellState::Obstacle);
    }
}

fn layout_block_cells(layout: &ClosedLayout) -> impl Iterator<Item = Coord> + '_ {
    (0..layout.height).flat_map(move |row| {
        (0..layout.width)
            .map(move |col| Coord::new(row, col))
            .filter(move |c| !layout.is_street(*c))
    })
}

/// Generates the environment only (no targets).
pub fn generate_environment(spec: &GenSpec) -> Result<OccupancyGrid, GridError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    generate_environment_with(spec, &mut rng)
}

fn generate_environment_with<R: Rng>(
    spec: &GenSpec,
    rng: &mut R,
) -> Result<OccupancyGrid, GridError> {
    let mut grid = OccupancyGrid::new(spec.width, spec.height)?;
    match spec.kind {
        EnvironmentKind::Open => fill_open(&mut grid, spec, rng),
        EnvironmentKind::Closed => fill_closed(&mut grid, spec, rng),
    }
    Ok(grid)
}

/// Turns `count` eligible cells of `grid` into single-cell targets, sampled
/// without replacement. Ids are assigned in the order the sample draws them.
///
/// Fails with [`GridError::PlacementExhausted`] when fewer than `count` cells
/// are eligible (see [`OccupancyGrid::target_eligible_cells`]); callers
/// regenerate with a fresh seed.
pub fn place_targets<R: Rng>(
    grid: &mut OccupancyGrid,
    count: u16,
    rng: &mut R,
) -> Result<(), GridError> {
    assert_eq!(grid.target_count(), 0, "grid already has targets");
    if count == 0 {
        return Err(GridError::InvalidSpec("target count must be >= 1 and min <= max"));
    }
    let eligible: Vec<Coord> = grid.target_eligible_cells().collect();
    if eligible.len() < count as usize {
        return Err(GridError::PlacementExhausted {
            needed: count as usize,
            available: eligible.len(),
        });
    }
    let picks = rand::seq::index::sample(rng, eligible.len(), count as usize);
    for (id, i) in picks.iter().enumerate() {
        grid.set_cell(eligible[i], CellState::Target(id as u16));
    }
    grid.target_count = count;
    Ok(())
}

/// Full pipeline: environment, then target count, then placement, all driven
/// by one RNG seeded from `spec.seed`.
pub fn generate(spec: &GenSpec) -> Result<OccupancyGrid, GridError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut grid = generate_environment_with(spec, &mut rng)?;
    let count = spec.target_count.sample(&mut rng);
    place_targets(&mut grid, count, &mut rng)?;
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    #[test]
    fn new_rejects_degenerate_sides() {
        assert!(matches!(OccupancyGrid::new(2, 5), Err(GridError::InvalidSpec(_))));
        assert!(matches!(OccupancyGrid::new(5, 2), Err(GridError::InvalidSpec(_))));
        assert!(OccupancyGrid::new(3, 3).is_ok());
    }

    #[test]
    fn from_cells_requires_contiguous_target_ids() {
        let mut cells = vec![CellState::Free; 9];
        cells[4] = CellState::Target(1); // id 0 missing
        assert!(matches!(
            OccupancyGrid::from_cells(3, 3, cells),
            Err(GridError::InvalidSpec(_))
        ));
    }

    #[test]
    fn ascii_round_trip() {
        let art = "\
.....
.#A#.
.#.#.
.....";
        let grid = OccupancyGrid::from_ascii(art).unwrap();
        assert_eq!(grid.width(), 5);
        assert_eq!(grid.height(), 4);
        assert_eq!(grid.target_count(), 1);
        assert_eq!(grid.cell(Coord::new(1, 2)), CellState::Target(0));
        let reparsed = OccupancyGrid::from_ascii(&grid.to_ascii()).unwrap();
        assert_eq!(grid, reparsed);
    }

    #[test]
    fn neighbors_respect_bounds_and_order() {
        let grid = OccupancyGrid::new(4, 3).unwrap();
        // Corner cell: only down and right exist.
        let corner: Vec<Coord> = grid.neighbors(Coord::new(0, 0)).collect();
        assert_eq!(corner, vec![Coord::new(1, 0), Coord::new(0, 1)]);
        // Interior cell: up, down, left, right.
        let inner: Vec<Coord> = grid.neighbors(Coord::new(1, 1)).collect();
        assert_eq!(
            inner,
            vec![
                Coord::new(0, 1),
                Coord::new(2, 1),
                Coord::new(1, 0),
                Coord::new(1, 2)
            ]
        );
    }

    #[test]
    fn border_classification() {
        let grid = OccupancyGrid::new(5, 4).unwrap();
        let border: Vec<Coord> = grid.coords().filter(|c| grid.is_border(*c)).collect();
        // 5x4 grid: perimeter = 2*5 + 2*4 - 4.
        assert_eq!(border.len(), 14);
        assert!(grid.is_border(Coord::new(0, 2)));
        assert!(!grid.is_border(Coord::new(1, 2)));
    }

    #[test]
    fn open_generation_is_deterministic() {
        let spec = GenSpec::open(40, 30, 25, TargetCount::Fixed(4), 0xFEED);
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a, b);
        let other = generate(&GenSpec { seed: 0xFEED + 1, ..spec }).unwrap();
        assert_ne!(a, other, "different seeds should give different grids");
    }

    #[test]
    fn open_rectangles_stay_in_bounds_and_cover_something() {
        // Stamping is total: obstacle count > 0 implies obstacles appear, and
        // from_cells/set_cell would panic on out-of-bounds writes.
        let spec = GenSpec::open(20, 20, 10, TargetCount::Fixed(1), 7);
        let grid = generate_environment(&spec).unwrap();
        assert!(grid.obstacle_count() >= 4, "at least one 2x2 rectangle");
    }

    #[test]
    fn open_rect_sides_clamp_to_small_grids() {
        // 5-wide grid: max rectangle side is 5; generation must not panic.
        let spec = GenSpec::open(5, 30, 12, TargetCount::Fixed(1), 3);
        generate(&spec).unwrap();
    }

    #[test]
    fn closed_layout_street_pattern() {
        let layout = ClosedLayout::new(13, 9, 3);
        // Street rows for height 9, period 4: 0, 4, 8 (8 is also forced last).
        let rows: Vec<usize> = (0..9).filter(|r| layout.is_street_row(*r)).collect();
        assert_eq!(rows, vec![0, 4, 8]);
        // Street cols for width 13: 0, 4, 8, 12.
        let cols: Vec<usize> = (0..13).filter(|c| layout.is_street_col(*c)).collect();
        assert_eq!(cols, vec![0, 4, 8, 12]);
        assert_eq!(layout.intersection_count(), 12);
    }

    #[test]
    fn closed_generation_blocks_sampled_intersections() {
        let spec = GenSpec::closed(21, 21, 5, TargetCount::Fixed(1), 3, 11);
        let grid = generate_environment(&spec).unwrap();
        let layout = ClosedLayout::new(21, 21, 3);
        let blocked: Vec<Coord> = layout
            .intersections()
            .into_iter()
            .filter(|c| grid.cell(*c) == CellState::Obstacle)
            .collect();
        assert_eq!(blocked.len(), 5);
        // Streets away from blocked intersections stay free.
        let free_street = grid
            .coords()
            .filter(|c| layout.is_street(*c) && grid.cell(*c) == CellState::Free)
            .count();
        assert!(free_street > 0);
        // Block interiors are all obstacles.
        for c in grid.coords() {
            if !layout.is_street(c) {
                assert_eq!(grid.cell(c), CellState::Obstacle);
            }
        }
    }

    #[test]
    fn closed_saturation_clamps() {
        // 100x100, blocks of 3: streets every 4th row/col plus the forced
        // last ones -> 26 street rows and 26 street cols, 676 intersections.
        let layout = ClosedLayout::new(100, 100, 3);
        assert_eq!(layout.intersection_count(), 676);
        let spec = GenSpec::closed(100, 100, 1510, TargetCount::Fixed(1), 3, 3);
        assert!(spec.is_saturated());
        let grid = generate_environment(&spec).unwrap();
        let blocked = layout
            .intersections()
            .into_iter()
            .filter(|c| grid.cell(*c) == CellState::Obstacle)
            .count();
        assert_eq!(blocked, 676, "all intersections blocked when saturated");
    }

    #[test]
    fn place_targets_rejects_pigeonhole() {
        // 7x3 grid: interior is a 5x1 strip, and every interior cell touches
        // the free border, so nothing is eligible.
        let mut grid = OccupancyGrid::new(7, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = place_targets(&mut grid, 1, &mut rng).unwrap_err();
        assert!(matches!(err, GridError::PlacementExhausted { needed: 1, available: 0 }));
    }

    #[test]
    fn place_targets_avoids_border_adjacent_cells() {
        let mut grid = OccupancyGrid::new(10, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        place_targets(&mut grid, 1, &mut rng).unwrap();
        let (pos, id) = grid.target_cells().next().unwrap();
        assert_eq!(id, 0);
        assert!(!grid.is_border(pos));
        assert!(pos.row >= 2 && pos.row <= 7 && pos.col >= 2 && pos.col <= 7);
    }

    #[test]
    fn place_targets_produces_distinct_cells_and_contiguous_ids() {
        let mut grid = OccupancyGrid::new(100, 100).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        place_targets(&mut grid, 20, &mut rng).unwrap();
        let cells: Vec<(Coord, u16)> = grid.target_cells().collect();
        assert_eq!(cells.len(), 20);
        let coords: BTreeSet<Coord> = cells.iter().map(|(c, _)| *c).collect();
        assert_eq!(coords.len(), 20, "targets are distinct cells");
        let ids: BTreeSet<u16> = cells.iter().map(|(_, id)| *id).collect();
        assert_eq!(ids, (0..20).collect::<BTreeSet<u16>>());
    }

    #[test]
    fn generated_targets_never_touch_free_border() {
        for seed in 0..20 {
            let spec = GenSpec::open(30, 30, 12, TargetCount::Range { min: 2, max: 5 }, seed);
            let grid = generate(&spec).unwrap();
            for (pos, _) in grid.target_cells() {
                assert!(!grid.is_border(pos));
                for n in grid.neighbors(pos) {
                    assert!(
                        !(grid.is_border(n) && grid.cell(n) == CellState::Free),
                        "target {pos} touches free border cell {n} (seed {seed})"
                    );
                }
            }
        }
    }

    #[test]
    fn target_range_sampling_stays_in_range() {
        for seed in 0..30 {
            let spec =
                GenSpec::open(40, 40, 5, TargetCount::Range { min: 15, max: 20 }, seed);
            let grid = generate(&spec).unwrap();
            assert!((15..=20).contains(&grid.target_count()));
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let bad_range = GenSpec::open(10, 10, 1, TargetCount::Range { min: 5, max: 2 }, 0);
        assert!(bad_range.validate().is_err());
        let zero_targets = GenSpec::open(10, 10, 1, TargetCount::Fixed(0), 0);
        assert!(zero_targets.validate().is_err());
        let thin = GenSpec::open(2, 10, 1, TargetCount::Fixed(1), 0);
        assert!(thin.validate().is_err());
        let bad_block = GenSpec::closed(10, 10, 1, TargetCount::Fixed(1), 0, 0);
        assert!(bad_block.validate().is_err());
    }
}
