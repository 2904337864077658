//! Area of the largest 4-connected island on a water/land grid.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use super::common::{grid_image, info, matrix_caption};
use super::{Task, Verdict};
use crate::env::Rendered;
use crate::grammar::last_int;
use crate::protocol::{Category, DifficultyTable, Params, ParamsExt};
use crate::registry::EnvInfo;
use crate::render::{Cell, Role};
use crate::rng::StreamRng;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Island {
    /// `true` is land.
    pub land: Vec<Vec<bool>>,
}

pub struct LargestIsland;

/// Disjoint-set forest with union by size.
struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: alloc::vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

pub fn max_island_area(land: &[Vec<bool>]) -> usize {
    let rows = land.len();
    let cols = land.first().map_or(0, |r| r.len());
    let mut dsu = Dsu::new(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            if !land[r][c] {
                continue;
            }
            if r + 1 < rows && land[r + 1][c] {
                dsu.union(r * cols + c, (r + 1) * cols + c);
            }
            if c + 1 < cols && land[r][c + 1] {
                dsu.union(r * cols + c, r * cols + c + 1);
            }
        }
    }
    let mut best = 0;
    for (r, row) in land.iter().enumerate() {
        for (c, &cell) in row.iter().enumerate() {
            if cell {
                let root = dsu.find(r * cols + c);
                best = best.max(dsu.size[root]);
            }
        }
    }
    best
}

impl Task for LargestIsland {
    type Instance = Island;

    fn info() -> EnvInfo {
        info(
            "largest_island",
            Category::Geometry,
            DifficultyTable::new(
                &["side"],
                [
                    &[("side", 6.into()), ("land_prob", 0.45.into())],
                    &[("side", 10.into()), ("land_prob", 0.45.into())],
                    &[("side", 14.into()), ("land_prob", 0.45.into())],
                ],
            ),
            "The grid shows water (blue) and land (green). An island is a maximal group of land cells \
             connected horizontally or vertically. Report the area, in cells, of the largest island; \
             report 0 if there is no land.",
            "a single integer",
            "one line per row; L = land, W = water",
        )
    }

    fn generate(params: &Params, rng: &mut StreamRng) -> Option<Island> {
        let side = params.int("side", 6) as usize;
        let p = params.float("land_prob", 0.45);
        let land = (0..side)
            .map(|_| (0..side).map(|_| rng.gen_bool(p)).collect())
            .collect();
        Some(Island { land })
    }

    fn solve(inst: &Island) -> String {
        max_island_area(&inst.land).to_string()
    }

    fn verify(inst: &Island, answer: &str) -> Verdict {
        Verdict::integer(last_int(answer), max_island_area(&inst.land) as i64)
    }

    fn question(inst: &Island) -> String {
        format!(
            "The {n}x{n} grid in the image has blue water cells and green land cells. What is the area \
             of the largest island (4-directionally connected land)? Answer with a single integer.",
            n = inst.land.len()
        )
    }

    fn caption(inst: &Island) -> String {
        let rows: Vec<Vec<char>> = inst
            .land
            .iter()
            .map(|r| r.iter().map(|&l| if l { 'L' } else { 'W' }).collect())
            .collect();
        matrix_caption(&rows)
    }

    fn render(inst: &Island, _rng: &mut StreamRng) -> Rendered {
        let cells: Vec<Vec<Cell>> = inst
            .land
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&l| Cell::plain(if l { Role::Land } else { Role::Water }))
                    .collect()
            })
            .collect();
        grid_image(&cells)
    }

    fn random_answer(inst: &Island, rng: &mut dyn RngCore) -> String {
        let n = inst.land.len();
        rng.gen_range(0..=n * n).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn empty_and_full_grids() {
        let water = Island {
            land: vec![vec![false; 4]; 4],
        };
        assert!(LargestIsland::verify(&water, "0").correct);
        let full = Island {
            land: vec![vec![true; 3]; 3],
        };
        assert!(LargestIsland::verify(&full, "9").correct);
        assert!(!LargestIsland::verify(&full, "8").correct);
        assert_eq!(LargestIsland::verify(&full, "no idea").detail, "parse");
    }

    #[test]
    fn diagonal_cells_are_separate_islands() {
        let g = Island {
            land: vec![vec![true, false], vec![false, true]],
        };
        assert_eq!(max_island_area(&g.land), 1);
    }

    #[test]
    fn caption_matches_state() {
        let g = Island {
            land: vec![vec![true, false], vec![false, false]],
        };
        assert_eq!(LargestIsland::caption(&g), "LW\nWW");
    }
}
