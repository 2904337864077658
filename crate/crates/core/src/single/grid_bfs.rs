//! Fewest moves from start to goal through a walled grid.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use super::common::{grid_image, info, matrix_caption, neighbors4};
use super::{Task, Verdict};
use crate::env::Rendered;
use crate::grammar::last_int;
use crate::protocol::{Category, DifficultyTable, Params, ParamsExt};
use crate::registry::EnvInfo;
use crate::render::{Cell, Role};
use crate::rng::StreamRng;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Maze {
    /// `true` is a wall.
    pub walls: Vec<Vec<bool>>,
    pub start: (usize, usize),
    pub goal: (usize, usize),
}

pub struct GridBfs;

/// BFS distance, or `None` when the goal is walled off.
pub fn bfs_distance(m: &Maze) -> Option<u32> {
    let rows = m.walls.len();
    let cols = m.walls.first().map_or(0, |r| r.len());
    let mut dist = vec![vec![u32::MAX; cols]; rows];
    dist[m.start.0][m.start.1] = 0;
    let mut q = VecDeque::from([m.start]);
    while let Some((r, c)) = q.pop_front() {
        if (r, c) == m.goal {
            return Some(dist[r][c]);
        }
        for (nr, nc) in neighbors4(r, c, rows, cols) {
            if !m.walls[nr][nc] && dist[nr][nc] == u32::MAX {
                dist[nr][nc] = dist[r][c] + 1;
                q.push_back((nr, nc));
            }
        }
    }
    None
}

impl Task for GridBfs {
    type Instance = Maze;

    fn info() -> EnvInfo {
        info(
            "grid_bfs",
            Category::Algorithmic,
            DifficultyTable::new(
                &["side"],
                [
                    &[("side", 6.into()), ("wall_prob", 0.3.into())],
                    &[("side", 10.into()), ("wall_prob", 0.3.into())],
                    &[("side", 14.into()), ("wall_prob", 0.3.into())],
                ],
            ),
            "Move between open cells one step at a time (up, down, left, right); dark cells are walls. \
             Report the minimum number of moves from the blue start cell S to the red goal cell G.",
            "a single integer",
            "one line per row; . = open, # = wall, S = start, G = goal",
        )
    }

    fn generate(params: &Params, rng: &mut StreamRng) -> Option<Maze> {
        let side = params.int("side", 6) as usize;
        let p = params.float("wall_prob", 0.3);
        let mut walls: Vec<Vec<bool>> = (0..side)
            .map(|_| (0..side).map(|_| rng.gen_bool(p)).collect())
            .collect();
        let start = (rng.gen_range(0..side), rng.gen_range(0..side));
        let goal = (rng.gen_range(0..side), rng.gen_range(0..side));
        if start == goal {
            return None;
        }
        walls[start.0][start.1] = false;
        walls[goal.0][goal.1] = false;
        let m = Maze { walls, start, goal };
        bfs_distance(&m).map(|_| m)
    }

    fn solve(inst: &Maze) -> String {
        bfs_distance(inst).map_or(-1, i64::from).to_string()
    }

    fn verify(inst: &Maze, answer: &str) -> Verdict {
        Verdict::integer(last_int(answer), bfs_distance(inst).map_or(-1, i64::from))
    }

    fn question(inst: &Maze) -> String {
        format!(
            "In the {n}x{n} grid, dark cells are walls. Moving one cell up, down, left or right per step \
             through open cells, what is the minimum number of steps from S to G? Answer with a single \
             integer.",
            n = inst.walls.len()
        )
    }

    fn caption(inst: &Maze) -> String {
        let rows: Vec<Vec<char>> = inst
            .walls
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(|(c, &w)| {
                        if (r, c) == inst.start {
                            'S'
                        } else if (r, c) == inst.goal {
                            'G'
                        } else if w {
                            '#'
                        } else {
                            '.'
                        }
                    })
                    .collect()
            })
            .collect();
        matrix_caption(&rows)
    }

    fn render(inst: &Maze, _rng: &mut StreamRng) -> Rendered {
        let cells: Vec<Vec<Cell>> = inst
            .walls
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(|(c, &w)| {
                        if (r, c) == inst.start {
                            Cell::text(Role::Start, "S")
                        } else if (r, c) == inst.goal {
                            Cell::text(Role::Goal, "G")
                        } else if w {
                            Cell::plain(Role::Blocked)
                        } else {
                            Cell::plain(Role::Open)
                        }
                    })
                    .collect()
            })
            .collect();
        grid_image(&cells)
    }

    fn random_answer(inst: &Maze, rng: &mut dyn RngCore) -> String {
        let n = inst.walls.len();
        rng.gen_range(1..=2 * n).to_string()
    }
}
