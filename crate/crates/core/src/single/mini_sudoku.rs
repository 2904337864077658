//! 4x4 sudoku with 2x2 boxes and a unique completion.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

use super::common::{grid_image, info};
use super::{Task, Verdict};
use crate::env::Rendered;
use crate::grammar::digits;
use crate::protocol::{Category, DifficultyTable, Params, ParamsExt};
use crate::registry::EnvInfo;
use crate::render::{Cell, Role};
use crate::rng::StreamRng;

pub const SIDE: usize = 4;
pub type Board = [[u8; SIDE]; SIDE];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Puzzle {
    /// `0` marks a blank.
    pub clues: Board,
    pub solution: Board,
}

pub struct MiniSudoku;

fn fits(b: &Board, r: usize, c: usize, v: u8) -> bool {
    let (br, bc) = (r / 2 * 2, c / 2 * 2);
    (0..SIDE).all(|i| b[r][i] != v && b[i][c] != v) && (0..2).all(|i| (0..2).all(|j| b[br + i][bc + j] != v))
}

/// Counts completions of `b`, stopping once `limit` is reached.
pub fn count_solutions(b: &mut Board, limit: usize) -> usize {
    let Some(pos) = (0..SIDE * SIDE).find(|&k| b[k / SIDE][k % SIDE] == 0) else {
        return 1;
    };
    let (r, c) = (pos / SIDE, pos % SIDE);
    let mut found = 0;
    for v in 1..=SIDE as u8 {
        if fits(b, r, c, v) {
            b[r][c] = v;
            found += count_solutions(b, limit - found);
            b[r][c] = 0;
            if found >= limit {
                break;
            }
        }
    }
    found
}

fn fill_random(b: &mut Board, rng: &mut StreamRng) -> bool {
    let Some(pos) = (0..SIDE * SIDE).find(|&k| b[k / SIDE][k % SIDE] == 0) else {
        return true;
    };
    let (r, c) = (pos / SIDE, pos % SIDE);
    let mut vals: Vec<u8> = (1..=SIDE as u8).collect();
    vals.shuffle(rng);
    for v in vals {
        if fits(b, r, c, v) {
            b[r][c] = v;
            if fill_random(b, rng) {
                return true;
            }
            b[r][c] = 0;
        }
    }
    false
}

/// Row, column and box constraints of a full board.
pub fn is_valid_solution(b: &Board) -> bool {
    let full = |cells: [u8; SIDE]| {
        let mut seen = [false; SIDE + 1];
        cells
            .iter()
            .all(|&v| (1..=SIDE as u8).contains(&v) && !core::mem::replace(&mut seen[v as usize], true))
    };
    (0..SIDE).all(|i| {
        let row = b[i];
        let col = [b[0][i], b[1][i], b[2][i], b[3][i]];
        let (br, bc) = (i / 2 * 2, i % 2 * 2);
        let bx = [b[br][bc], b[br][bc + 1], b[br + 1][bc], b[br + 1][bc + 1]];
        full(row) && full(col) && full(bx)
    })
}

fn board_text(b: &Board, blank: char) -> String {
    let rows: Vec<String> = b
        .iter()
        .map(|r| {
            r.iter()
                .map(|&v| if v == 0 { blank } else { char::from(b'0' + v) })
                .collect()
        })
        .collect();
    rows.join("\n")
}

impl Task for MiniSudoku {
    type Instance = Puzzle;

    fn info() -> EnvInfo {
        info(
            "mini_sudoku",
            Category::Logic,
            DifficultyTable::new(
                &["blanks"],
                [
                    &[("blanks", 8.into())],
                    &[("blanks", 10.into())],
                    &[("blanks", 12.into())],
                ],
            ),
            "Fill the 4x4 grid with digits 1-4 so that every row, every column and every 2x2 box contains \
             each digit exactly once. Shaded cells are given and must be kept.",
            "the completed grid: 16 digits, row by row",
            "four lines of four characters; . = blank",
        )
    }

    fn generate(params: &Params, rng: &mut StreamRng) -> Option<Puzzle> {
        let blanks = params.int("blanks", 8) as usize;
        let mut solution = [[0u8; SIDE]; SIDE];
        fill_random(&mut solution, rng);
        let mut clues = solution;
        let mut cells: Vec<usize> = (0..SIDE * SIDE).collect();
        cells.shuffle(rng);
        let mut removed = 0;
        for k in cells {
            if removed == blanks {
                break;
            }
            let (r, c) = (k / SIDE, k % SIDE);
            let keep = clues[r][c];
            clues[r][c] = 0;
            if count_solutions(&mut clues.clone(), 2) == 1 {
                removed += 1;
            } else {
                clues[r][c] = keep;
            }
        }
        (removed == blanks).then_some(Puzzle { clues, solution })
    }

    fn solve(p: &Puzzle) -> String {
        board_text(&p.solution, '.')
    }

    fn verify(p: &Puzzle, answer: &str) -> Verdict {
        let d = digits(answer);
        if d.len() < SIDE * SIDE {
            return Verdict::wrong("parse");
        }
        let tail = &d[d.len() - SIDE * SIDE..];
        let mut b = [[0u8; SIDE]; SIDE];
        for (k, &v) in tail.iter().enumerate() {
            b[k / SIDE][k % SIDE] = v;
        }
        let keeps_clues = (0..SIDE * SIDE).all(|k| {
            let clue = p.clues[k / SIDE][k % SIDE];
            clue == 0 || clue == b[k / SIDE][k % SIDE]
        });
        if !keeps_clues {
            return Verdict::wrong("changes a given");
        }
        Verdict::check(is_valid_solution(&b), "constraint violated")
    }

    fn question(p: &Puzzle) -> String {
        format!(
            "Solve the 4x4 sudoku in the image ({} blank cells). Every row, column and 2x2 box must hold \
             1, 2, 3 and 4 exactly once. Answer with the completed grid as four rows of four digits.",
            p.clues.iter().flatten().filter(|&&v| v == 0).count()
        )
    }

    fn caption(p: &Puzzle) -> String {
        board_text(&p.clues, '.')
    }

    fn render(p: &Puzzle, _rng: &mut StreamRng) -> Rendered {
        let cells: Vec<Vec<Cell>> = p
            .clues
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| {
                        if v == 0 {
                            Cell::plain(Role::Open)
                        } else {
                            Cell::text(Role::Given, v.to_string())
                        }
                    })
                    .collect()
            })
            .collect();
        grid_image(&cells)
    }

    fn random_answer(p: &Puzzle, rng: &mut dyn RngCore) -> String {
        let mut b = p.clues;
        for v in b.iter_mut().flatten() {
            if *v == 0 {
                *v = rng.gen_range(1..=SIDE as u8);
            }
        }
        board_text(&b, '.')
    }
}
