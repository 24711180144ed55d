//! Rendering of grids and placements as SVG or annotated ASCII.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use cordon_core::grid::{CellState, Coord, OccupancyGrid};

/// Pixel size of one cell in SVG output.
const CELL: usize = 12;

/// Renders the grid as a standalone SVG document; monitors are drawn as
/// circles on top of their cells. The output is deterministic.
pub fn render_svg(grid: &OccupancyGrid, robots: &BTreeSet<Coord>) -> String {
    let w = grid.width() * CELL;
    let h = grid.height() * CELL;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(svg, r##"<rect width="{w}" height="{h}" fill="#ffffff"/>"##);
    for c in grid.coords() {
        let (x, y) = (c.col * CELL, c.row * CELL);
        match grid.cell(c) {
            CellState::Free => {}
            CellState::Obstacle => {
                let _ = writeln!(
                    svg,
                    r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="#444444"/>"##
                );
            }
            CellState::Target(id) => {
                let _ = writeln!(
                    svg,
                    r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="#d94f4f"/>"##
                );
                let _ = writeln!(
                    svg,
                    r##"<text x="{}" y="{}" font-size="{}" text-anchor="middle" fill="#ffffff">{}</text>"##,
                    x + CELL / 2,
                    y + CELL - 3,
                    CELL - 4,
                    target_glyph(id),
                );
            }
        }
    }
    for r in robots {
        let _ = writeln!(
            svg,
            r##"<circle cx="{}" cy="{}" r="{}" fill="#2a6fdb"/>"##,
            r.col * CELL + CELL / 2,
            r.row * CELL + CELL / 2,
            CELL / 2 - 1,
        );
    }
    // Faint cell borders make counting positions by eye possible.
    for row in 0..=grid.height() {
        let _ = writeln!(
            svg,
            r##"<line x1="0" y1="{0}" x2="{w}" y2="{0}" stroke="#dddddd" stroke-width="0.5"/>"##,
            row * CELL
        );
    }
    for col in 0..=grid.width() {
        let _ = writeln!(
            svg,
            r##"<line x1="{0}" y1="0" x2="{0}" y2="{h}" stroke="#dddddd" stroke-width="0.5"/>"##,
            col * CELL
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn target_glyph(id: u16) -> char {
    match id {
        0..=25 => (b'A' + id as u8) as char,
        26..=51 => (b'a' + (id - 26) as u8) as char,
        _ => '*',
    }
}

/// Renders the grid in the fixture alphabet with monitors overlaid as `R`.
pub fn render_ascii(grid: &OccupancyGrid, robots: &BTreeSet<Coord>) -> String {
    let mut art = grid.to_ascii().into_bytes();
    let stride = grid.width() + 1; // rows end with '\n'
    for r in robots {
        debug_assert_eq!(grid.cell(*r), CellState::Free, "monitor {r} not on a free cell");
        art[r.row * stride + r.col] = b'R';
    }
    String::from_utf8(art).expect("ascii rendering")
}
