//! On-disk text formats for maps and placements.
//!
//! A map file is a one-line header followed by the grid:
//!
//! ```text
//! cordon-map v1 <width> <height> <targets>
//! ...........
//! ..#######..
//! ..#A#B#C#..
//! ```
//!
//! Cells use the fixture alphabet: `.` free, `#` obstacle, `A`-`Z` targets
//! 0-25, `a`-`z` targets 26-51. Target ids beyond the letter range render as
//! `*`, and each such cell is listed after the grid in an index line
//! `<id>,<row>,<col>` (sorted by id, then row-major) so the file stays exact
//! at any target count.
//!
//! A placement file is a map file followed by one `R <row> <col>` line per
//! monitor, sorted row-major. Writers always produce canonical output, so
//! writing what was parsed reproduces the input byte for byte.

use std::collections::BTreeSet;

use cordon_core::grid::{CellState, Coord, OccupancyGrid, LETTER_TARGET_IDS};

use crate::FormatError;

pub const MAP_HEADER: &str = "cordon-map v1";

/// Serializes a grid in map format.
pub fn write_map(grid: &OccupancyGrid) -> String {
    let mut out = format!(
        "{MAP_HEADER} {} {} {}\n",
        grid.width(),
        grid.height(),
        grid.target_count()
    );
    out.push_str(&grid.to_ascii());
    let mut starred: Vec<(u16, Coord)> = grid
        .target_cells()
        .filter(|(_, id)| *id >= LETTER_TARGET_IDS)
        .map(|(c, id)| (id, c))
        .collect();
    starred.sort();
    for (id, c) in starred {
        out.push_str(&format!("{id},{},{}\n", c.row, c.col));
    }
    out
}

/// Serializes a placement: the map followed by its monitor positions.
pub fn write_placement(grid: &OccupancyGrid, robots: &BTreeSet<Coord>) -> String {
    let mut out = write_map(grid);
    for r in robots {
        out.push_str(&format!("R {} {}\n", r.row, r.col));
    }
    out
}

/// Parses a map file. Trailing content (such as placement lines) is an error;
/// use [`parse_placement`] for placement files.
pub fn parse_map(text: &str) -> Result<OccupancyGrid, FormatError> {
    let mut lines = text.lines().enumerate().peekable();
    let grid = parse_map_block(&mut lines)?;
    if let Some((i, line)) = lines.next() {
        return Err(FormatError::at(
            i + 1,
            format!("unexpected content after map: {line:?} (placement file?)"),
        ));
    }
    Ok(grid)
}

/// Parses a placement file into its grid and monitor set.
pub fn parse_placement(text: &str) -> Result<(OccupancyGrid, BTreeSet<Coord>), FormatError> {
    let mut lines = text.lines().enumerate().peekable();
    let grid = parse_map_block(&mut lines)?;
    let mut robots = BTreeSet::new();
    for (i, line) in lines {
        let n = i + 1;
        let mut parts = line.split_whitespace();
        if parts.next() != Some("R") {
            return Err(FormatError::at(n, format!("expected `R <row> <col>`, got {line:?}")));
        }
        let row = parse_field(parts.next(), n, "row")?;
        let col = parse_field(parts.next(), n, "col")?;
        if parts.next().is_some() {
            return Err(FormatError::at(n, "trailing fields after `R <row> <col>`"));
        }
        let c = Coord::new(row, col);
        if !grid.in_bounds(c) {
            return Err(FormatError::at(n, format!("monitor {c} is out of bounds")));
        }
        if grid.cell(c) != CellState::Free {
            return Err(FormatError::at(n, format!("monitor {c} is not on a free cell")));
        }
        if !robots.insert(c) {
            return Err(FormatError::at(n, format!("duplicate monitor {c}")));
        }
    }
    Ok((grid, robots))
}

type Lines<'a> = core::iter::Peekable<core::iter::Enumerate<core::str::Lines<'a>>>;

fn parse_field(field: Option<&str>, line: usize, what: &str) -> Result<usize, FormatError> {
    let raw = field.ok_or_else(|| FormatError::at(line, format!("missing {what}")))?;
    raw.parse()
        .map_err(|_| FormatError::at(line, format!("bad {what} {raw:?}")))
}

/// Consumes the header, grid rows and `*` index of one map block, leaving any
/// following lines (placement entries) in the iterator.
fn parse_map_block(lines: &mut Lines<'_>) -> Result<OccupancyGrid, FormatError> {
    let (i, header) = lines
        .next()
        .ok_or_else(|| FormatError::whole("empty file"))?;
    let rest = header
        .strip_prefix(MAP_HEADER)
        .ok_or_else(|| FormatError::at(i + 1, format!("expected `{MAP_HEADER} ...` header")))?;
    let mut fields = rest.split_whitespace();
    let width: usize = parse_field(fields.next(), i + 1, "width")?;
    let height: usize = parse_field(fields.next(), i + 1, "height")?;
    let targets: usize = parse_field(fields.next(), i + 1, "target count")?;
    if fields.next().is_some() {
        return Err(FormatError::at(i + 1, "trailing fields in header"));
    }
    if targets > u16::MAX as usize {
        return Err(FormatError::at(i + 1, "target count out of range"));
    }

    // Grid rows. `*` cells get a placeholder id resolved by the index below.
    let mut cells = Vec::with_capacity(width * height);
    let mut starred: Vec<(usize, Coord)> = Vec::new();
    for row in 0..height {
        let (i, line) = lines
            .next()
            .ok_or_else(|| FormatError::whole(format!("expected {height} grid rows")))?;
        let n = i + 1;
        if line.chars().count() != width {
            return Err(FormatError::at(n, format!("expected {width} cells in grid row")));
        }
        for (col, ch) in line.chars().enumerate() {
            cells.push(match ch {
                '.' => CellState::Free,
                '#' => CellState::Obstacle,
                'A'..='Z' => CellState::Target(ch as u16 - 'A' as u16),
                'a'..='z' => CellState::Target(ch as u16 - 'a' as u16 + 26),
                '*' => {
                    starred.push((n, Coord::new(row, col)));
                    CellState::Free // placeholder, patched from the index
                }
                _ => return Err(FormatError::at(n, format!("unknown cell character {ch:?}"))),
            });
        }
    }

    // Index lines assign ids to `*` cells.
    let mut pending: BTreeSet<Coord> = starred.iter().map(|(_, c)| *c).collect();
    while let Some((_, line)) = lines.peek() {
        if !line.contains(',') {
            break;
        }
        let (i, line) = lines.next().unwrap();
        let n = i + 1;
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 3 {
            return Err(FormatError::at(n, "expected index line `<id>,<row>,<col>`"));
        }
        let id: usize = parse_field(Some(parts[0]), n, "target id")?;
        let row: usize = parse_field(Some(parts[1]), n, "row")?;
        let col: usize = parse_field(Some(parts[2]), n, "col")?;
        let c = Coord::new(row, col);
        if id < LETTER_TARGET_IDS as usize || id >= targets {
            return Err(FormatError::at(n, format!("index target id {id} out of range")));
        }
        if !pending.remove(&c) {
            return Err(FormatError::at(n, format!("index entry for {c} does not match a `*` cell")));
        }
        cells[row * width + col] = CellState::Target(id as u16);
    }
    if let Some(c) = pending.first() {
        return Err(FormatError::whole(format!("`*` cell {c} has no index entry")));
    }

    let grid = OccupancyGrid::from_cells(width, height, cells)
        .map_err(|e| FormatError::whole(e.to_string()))?;
    if grid.target_count() as usize != targets {
        return Err(FormatError::whole(format!(
            "header claims {targets} targets but grid has {}",
            grid.target_count()
        )));
    }
    Ok(grid)
}
