//! Reference single-turn transfer matrix: category accuracies (x100) after
//! training on each source, the zero-shot baseline row, and the printed
//! delta subscripts.

use std::collections::BTreeMap;

use gymv_core::metrics::TransferMatrix;

pub const CATEGORIES: [&str; 6] = ["Algorithmic", "Cognition", "Geometry", "Graphs", "Logic", "Puzzles"];

pub const BASELINE: [f64; 6] = [3.6, 31.6, 5.3, 1.2, 36.7, 7.5];

pub const CELLS: [[f64; 6]; 6] = [
    [4.5, 47.1, 7.4, 1.6, 45.8, 8.1],
    [5.7, 48.3, 8.5, 1.7, 42.5, 12.2],
    [2.5, 36.2, 11.9, 0.8, 42.6, 4.1],
    [3.7, 40.3, 8.1, 1.3, 45.1, 11.0],
    [5.8, 42.6, 7.2, 1.1, 45.6, 10.5],
    [5.4, 40.1, 5.1, 2.6, 46.5, 14.4],
];

pub const PRINTED_DELTAS: [[f64; 6]; 6] = [
    [0.9, 15.5, 2.1, 0.5, 9.2, 0.5],
    [2.2, 16.7, 3.2, 0.5, 5.8, 4.7],
    [-1.1, 4.6, 6.6, -0.3, 5.9, -3.4],
    [0.1, 8.7, 2.8, 0.1, 8.4, 3.5],
    [2.3, 11.0, 1.9, -0.1, 9.0, 3.0],
    [1.9, 8.5, -0.3, 1.4, 9.9, 6.9],
];

/// Reference breadths of the Cognition and Geometry rows.
pub const BREADTH_COGNITION: f64 = 33.1;
pub const BREADTH_GEOMETRY: f64 = 17.1;

/// Half of the last printed decimal.
pub const CELL_TOL: f64 = 0.05;
/// Sums of one-decimal numbers only carry float noise.
pub const BREADTH_TOL: f64 = 1e-9;

fn named(row: &[f64; 6]) -> BTreeMap<String, f64> {
    CATEGORIES
        .iter()
        .map(|c| c.to_string())
        .zip(row.iter().copied())
        .collect()
}

pub fn matrix() -> TransferMatrix {
    let cells = CATEGORIES
        .iter()
        .zip(CELLS.iter())
        .map(|(s, row)| (s.to_string(), named(row)))
        .collect();
    let names: Vec<String> = CATEGORIES.iter().map(|c| c.to_string()).collect();
    TransferMatrix::new(names.clone(), names, named(&BASELINE), cells).unwrap()
}

pub fn printed_row(source: &str) -> [f64; 6] {
    PRINTED_DELTAS[CATEGORIES.iter().position(|c| *c == source).unwrap()]
}

/// Cells whose recomputed delta misses the printed subscript by more than
/// the rounding tolerance.
pub fn subscript_mismatches(m: &TransferMatrix, sources: &[&str]) -> Vec<(String, String, f64, f64)> {
    let mut out = Vec::new();
    for s in sources {
        let printed = printed_row(s);
        for (t, p) in CATEGORIES.iter().zip(printed) {
            let d = m.deltas[*s][*t];
            if (d - p).abs() > CELL_TOL + 1e-9 {
                out.push((s.to_string(), t.to_string(), d, p));
            }
        }
    }
    out
}
