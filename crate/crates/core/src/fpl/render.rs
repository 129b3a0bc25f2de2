use std::fmt::Write;

use crate::fpl::state::{FplState, Stub};
use crate::patterns::LinkPattern;

fn column_x(c: usize) -> usize {
    5 + 4 * c
}

/// Draws the state on a character grid: `+` for internal vertices, `---`
/// and `|` for selected edges, with the boundary labels around the border.
pub fn render_state_ascii(state: &FplState) -> String {
    let n = state.n();
    let width = column_x(n) + 3;
    let height = 2 * n + 3;
    let mut grid = vec![vec![b' '; width]; height];
    let put_label = |grid: &mut Vec<Vec<u8>>, line: usize, col: usize, label: usize| {
        for (i, b) in label.to_string().bytes().enumerate() {
            grid[line][col + i] = b;
        }
    };
    for r in 0..n {
        let line = 2 * r + 2;
        for c in 0..=n {
            if state.horizontal(r, c) {
                let x = column_x(c);
                grid[line][x - 3..x].copy_from_slice(b"---");
            }
            if c < n {
                grid[line][column_x(c)] = b'+';
            }
        }
    }
    for r in 0..=n {
        for c in 0..n {
            if state.vertical(r, c) {
                grid[2 * r + 1][column_x(c)] = b'|';
            }
        }
    }
    for p in 0..4 * n {
        let stub = Stub::from_position(n, p);
        let Some(label) = stub.label(n) else { continue };
        match stub {
            Stub::Top(c) => put_label(&mut grid, 0, column_x(c), label),
            Stub::Bottom(c) => put_label(&mut grid, height - 1, column_x(c), label),
            Stub::Left(r) => {
                let col = if label >= 10 { 0 } else { 1 };
                put_label(&mut grid, 2 * r + 2, col, label)
            }
            Stub::Right(r) => put_label(&mut grid, 2 * r + 2, column_x(n), label),
        }
    }
    let mut out = String::new();
    for line in grid {
        let text = String::from_utf8(line).expect("ascii");
        out.push_str(text.trim_end());
        out.push('\n');
    }
    out
}

/// A chord diagram of the pattern: points `1..=2n` clockwise from the top
/// of a circle, each arc drawn as a straight chord.
pub fn render_pattern_svg(pattern: &LinkPattern) -> String {
    const SIZE: f64 = 240.0;
    const CENTER: f64 = SIZE / 2.0;
    const RADIUS: f64 = 90.0;
    let points = pattern.points();
    let at = |label: usize, radius: f64| -> (f64, f64) {
        let angle = -std::f64::consts::FRAC_PI_2
            + std::f64::consts::TAU * (label - 1) as f64 / points as f64;
        (CENTER + radius * angle.cos(), CENTER + radius * angle.sin())
    };
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        svg,
        r##"  <circle cx="{CENTER}" cy="{CENTER}" r="{RADIUS}" fill="none" stroke="#999" stroke-width="1"/>"##
    );
    for (a, b) in pattern.arcs() {
        let (x1, y1) = at(a, RADIUS);
        let (x2, y2) = at(b, RADIUS);
        let _ = writeln!(
            svg,
            r#"  <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="black" stroke-width="2"/>"#
        );
    }
    for label in 1..=points {
        let (x, y) = at(label, RADIUS);
        let (tx, ty) = at(label, RADIUS + 16.0);
        let _ = writeln!(svg, r#"  <circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"#);
        let _ = writeln!(
            svg,
            r#"  <text x="{tx:.2}" y="{ty:.2}" font-size="12" text-anchor="middle" dominant-baseline="middle">{label}</text>"#
        );
    }
    svg.push_str("</svg>\n");
    svg
}
