//! Minutes until every fresh orange rots, spreading one cell per minute.

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

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orange {
    Empty,
    Fresh,
    Rotten,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Crate {
    pub cells: Vec<Vec<Orange>>,
}

pub struct RottenOranges;

/// Multi-source BFS from every rotten orange. `-1` if some fresh orange is
/// unreachable.
pub fn minutes_to_rot(cells: &[Vec<Orange>]) -> i64 {
    let rows = cells.len();
    let cols = cells.first().map_or(0, |r| r.len());
    let mut dist = vec![vec![u32::MAX; cols]; rows];
    let mut queue = VecDeque::new();
    for r in 0..rows {
        for c in 0..cols {
            if cells[r][c] == Orange::Rotten {
                dist[r][c] = 0;
                queue.push_back((r, c));
            }
        }
    }
    while let Some((r, c)) = queue.pop_front() {
        for (nr, nc) in neighbors4(r, c, rows, cols) {
            if cells[nr][nc] == Orange::Fresh && dist[nr][nc] == u32::MAX {
                dist[nr][nc] = dist[r][c] + 1;
                queue.push_back((nr, nc));
            }
        }
    }
    let mut worst = 0;
    for r in 0..rows {
        for c in 0..cols {
            if cells[r][c] == Orange::Fresh {
                if dist[r][c] == u32::MAX {
                    return -1;
                }
                worst = worst.max(dist[r][c]);
            }
        }
    }
    i64::from(worst)
}

impl Task for RottenOranges {
    type Instance = Crate;

    fn info() -> EnvInfo {
        info(
            "rotten_oranges",
            Category::Algorithmic,
            DifficultyTable::new(
                &["side"],
                [
                    &[
                        ("side", 6.into()),
                        ("empty_prob", 0.2.into()),
                        ("rotten_prob", 0.08.into()),
                    ],
                    &[
                        ("side", 10.into()),
                        ("empty_prob", 0.2.into()),
                        ("rotten_prob", 0.08.into()),
                    ],
                    &[
                        ("side", 14.into()),
                        ("empty_prob", 0.2.into()),
                        ("rotten_prob", 0.08.into()),
                    ],
                ],
            ),
            "Each cell is empty (gray), holds a fresh orange (orange) or a rotten orange (brown). Every \
             minute, fresh oranges next to a rotten one (up, down, left, right) become rotten. Report the \
             minimum number of minutes until no fresh orange remains, or -1 if that never happens.",
            "a single integer (-1 when impossible)",
            "one line per row; . = empty, F = fresh, R = rotten",
        )
    }

    fn generate(params: &Params, rng: &mut StreamRng) -> Option<Crate> {
        let side = params.int("side", 6) as usize;
        let pe = params.float("empty_prob", 0.2);
        let pr = params.float("rotten_prob", 0.08);
        let cells: Vec<Vec<Orange>> = (0..side)
            .map(|_| {
                (0..side)
                    .map(|_| {
                        let u: f64 = rng.gen();
                        if u < pe {
                            Orange::Empty
                        } else if u < pe + pr {
                            Orange::Rotten
                        } else {
                            Orange::Fresh
                        }
                    })
                    .collect()
            })
            .collect();
        let has = |o: Orange| cells.iter().flatten().any(|&x| x == o);
        (has(Orange::Fresh) && has(Orange::Rotten)).then_some(Crate { cells })
    }

    fn solve(inst: &Crate) -> String {
        minutes_to_rot(&inst.cells).to_string()
    }

    fn verify(inst: &Crate, answer: &str) -> Verdict {
        Verdict::integer(last_int(answer), minutes_to_rot(&inst.cells))
    }

    fn question(inst: &Crate) -> String {
        format!(
            "The {n}x{n} grid shows empty cells (gray), fresh oranges (orange) and rotten oranges (brown). \
             Each minute, rot spreads from every rotten orange to the fresh oranges directly above, \
             below, left and right of it. How many minutes until no fresh orange remains? Answer with \
             a single integer, or -1 if some orange never rots.",
            n = inst.cells.len()
        )
    }

    fn caption(inst: &Crate) -> String {
        let rows: Vec<Vec<char>> = inst
            .cells
            .iter()
            .map(|r| {
                r.iter()
                    .map(|o| match o {
                        Orange::Empty => '.',
                        Orange::Fresh => 'F',
                        Orange::Rotten => 'R',
                    })
                    .collect()
            })
            .collect();
        matrix_caption(&rows)
    }

    fn render(inst: &Crate, _rng: &mut StreamRng) -> Rendered {
        let cells: Vec<Vec<Cell>> = inst
            .cells
            .iter()
            .map(|r| {
                r.iter()
                    .map(|o| {
                        Cell::plain(match o {
                            Orange::Empty => Role::Empty,
                            Orange::Fresh => Role::Fresh,
                            Orange::Rotten => Role::Rotten,
                        })
                    })
                    .collect()
            })
            .collect();
        grid_image(&cells)
    }

    fn random_answer(inst: &Crate, rng: &mut dyn RngCore) -> String {
        let n = inst.cells.len() as i64;
        rng.gen_range(-1..=2 * n).to_string()
    }
}
