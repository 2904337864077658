//! Complete an n-queens placement around pre-placed queens.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::RngCore;

use super::common::{grid_image, info, matrix_caption};
use super::{Task, Verdict};
use crate::env::Rendered;
use crate::grammar::paren_pairs;
use crate::protocol::{Category, DifficultyTable, Params, ParamsExt};
use crate::registry::EnvInfo;
use crate::render::{Cell, Role};
use crate::rng::StreamRng;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Board {
    pub n: usize,
    /// Pre-placed queens as `(row, col)`.
    pub fixed: Vec<(usize, usize)>,
    /// One completing placement, `cols[row]`.
    pub witness: Vec<usize>,
}

pub struct NQueens;

fn attacks((r1, c1): (usize, usize), (r2, c2): (usize, usize)) -> bool {
    r1 == r2 || c1 == c2 || r1.abs_diff(r2) == c1.abs_diff(c2)
}

/// Backtracking over rows; fills `cols` with a placement honouring `fixed`.
pub fn complete(n: usize, fixed: &[(usize, usize)], order: &[usize], cols: &mut Vec<usize>) -> bool {
    let row = cols.len();
    if row == n {
        return true;
    }
    let forced = fixed.iter().find(|q| q.0 == row).map(|q| q.1);
    for &c in order {
        if forced.is_some_and(|f| f != c) {
            continue;
        }
        let ok = cols.iter().enumerate().all(|(r, &cc)| !attacks((r, cc), (row, c)))
            && fixed
                .iter()
                .all(|&q| q == (row, c) || q.0 == row || !attacks(q, (row, c)));
        if ok {
            cols.push(c);
            if complete(n, fixed, order, cols) {
                return true;
            }
            cols.pop();
        }
    }
    false
}

impl Task for NQueens {
    type Instance = Board;

    fn info() -> EnvInfo {
        info(
            "n_queens",
            Category::Logic,
            DifficultyTable::new(
                &["n", "fixed"],
                [
                    &[("n", 4.into()), ("fixed", 1.into())],
                    &[("n", 6.into()), ("fixed", 2.into())],
                    &[("n", 8.into()), ("fixed", 3.into())],
                ],
            ),
            "Place n queens on the n x n board so that no two share a row, column or diagonal. The queens \
             already shown must stay. Rows and columns are numbered from 0 at the top-left corner.",
            "every queen as `(row,col)`, the shown ones may be included or left out",
            "one line per row; Q = queen, . = empty",
        )
    }

    fn generate(params: &Params, rng: &mut StreamRng) -> Option<Board> {
        let n = params.int("n", 4) as usize;
        let k = params.int("fixed", 1) as usize;
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut full = Vec::new();
        if !complete(n, &[], &order, &mut full) {
            return None;
        }
        let mut rows: Vec<usize> = (0..n).collect();
        rows.shuffle(rng);
        let mut fixed: Vec<(usize, usize)> = rows.into_iter().take(k).map(|r| (r, full[r])).collect();
        fixed.sort_unstable();
        Some(Board {
            n,
            fixed,
            witness: full,
        })
    }

    fn solve(b: &Board) -> String {
        let parts: Vec<String> = b
            .witness
            .iter()
            .enumerate()
            .map(|(r, c)| format!("({r},{c})"))
            .collect();
        parts.join(" ")
    }

    fn verify(b: &Board, answer: &str) -> Verdict {
        let pairs = paren_pairs(answer);
        if pairs.is_empty() {
            return Verdict::wrong("parse");
        }
        let n = b.n as i64;
        if pairs.iter().any(|&(r, c)| !(0..n).contains(&r) || !(0..n).contains(&c)) {
            return Verdict::wrong("off board");
        }
        let mut set: BTreeSet<(usize, usize)> = pairs.iter().map(|&(r, c)| (r as usize, c as usize)).collect();
        set.extend(b.fixed.iter().copied());
        if set.len() != b.n {
            return Verdict::wrong(format!("{} queens instead of {}", set.len(), b.n));
        }
        let qs: Vec<(usize, usize)> = set.into_iter().collect();
        let clash = qs
            .iter()
            .enumerate()
            .any(|(i, &a)| qs[i + 1..].iter().any(|&q| attacks(a, q)));
        Verdict::check(!clash, "queens attack each other")
    }

    fn question(b: &Board) -> String {
        format!(
            "The {n}x{n} board already holds {k} queen(s). Add queens until there are {n} in total with no \
             two attacking each other (same row, column or diagonal). Answer with every queen as (row,col), \
             counting rows and columns from 0 at the top-left.",
            n = b.n,
            k = b.fixed.len()
        )
    }

    fn caption(b: &Board) -> String {
        let rows: Vec<Vec<char>> = (0..b.n)
            .map(|r| {
                (0..b.n)
                    .map(|c| if b.fixed.contains(&(r, c)) { 'Q' } else { '.' })
                    .collect()
            })
            .collect();
        matrix_caption(&rows)
    }

    fn render(b: &Board, _rng: &mut StreamRng) -> Rendered {
        let cells: Vec<Vec<Cell>> = (0..b.n)
            .map(|r| {
                (0..b.n)
                    .map(|c| {
                        if b.fixed.contains(&(r, c)) {
                            Cell::mark(Role::Queen, "Q", Role::Background)
                        } else if (r + c) % 2 == 0 {
                            Cell::plain(Role::Open)
                        } else {
                            Cell::plain(Role::Given)
                        }
                    })
                    .collect()
            })
            .collect();
        grid_image(&cells)
    }

    fn random_answer(b: &Board, rng: &mut dyn RngCore) -> String {
        let mut cols: Vec<usize> = (0..b.n).collect();
        cols.shuffle(rng);
        let parts: Vec<String> = cols.iter().enumerate().map(|(r, c)| format!("({r},{c})")).collect();
        parts.join(" ")
    }
}
