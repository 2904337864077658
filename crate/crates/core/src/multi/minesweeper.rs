//! Reveal every safe cell without touching a mine. Mines are laid after
//! the first reveal, away from the revealed cell.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
use serde_json::json;

use super::{board_lines, info, invalid_action, parse, MultiTurn};
use crate::env::{Game, Outcome, Rendered};
use crate::grammar::{Command, Grammar};
use crate::protocol::{AgentMap, Category, DifficultyTable, Params, ParamsExt, Seed, SOLO_AGENT};
use crate::registry::EnvInfo;
use crate::render::{Cell, Role};
use crate::rng::{stable_hash, StreamRng};
use crate::single::common::grid_image;
use crate::Result;

pub type Pos = (usize, usize);

pub struct Minesweeper {
    side: usize,
    n_mines: usize,
    /// `None` until the first reveal.
    mines: Option<Vec<Vec<bool>>>,
    revealed: Vec<Vec<bool>>,
    exploded: Option<Pos>,
    rng: StreamRng,
    reward_mine: f64,
}

fn neighbors8(p: Pos, side: usize) -> impl Iterator<Item = Pos> {
    (-1i64..=1)
        .flat_map(|dr| (-1i64..=1).map(move |dc| (dr, dc)))
        .filter(|&d| d != (0, 0))
        .filter_map(move |(dr, dc)| {
            let r = p.0 as i64 + dr;
            let c = p.1 as i64 + dc;
            (r >= 0 && c >= 0 && (r as usize) < side && (c as usize) < side).then_some((r as usize, c as usize))
        })
}

/// Number of mines around `p`.
pub fn adjacent_mines(mines: &[Vec<bool>], p: Pos) -> usize {
    neighbors8(p, mines.len()).filter(|&(r, c)| mines[r][c]).count()
}

/// Cells opened by revealing safe cell `p`: zero-count cells spread to all
/// eight neighbours. Already-open cells are skipped.
pub fn flood(mines: &[Vec<bool>], revealed: &[Vec<bool>], p: Pos) -> Vec<Pos> {
    let side = mines.len();
    let mut seen = vec![vec![false; side]; side];
    let mut out = Vec::new();
    let mut stack = vec![p];
    seen[p.0][p.1] = true;
    while let Some(q) = stack.pop() {
        if revealed[q.0][q.1] || mines[q.0][q.1] {
            continue;
        }
        out.push(q);
        if adjacent_mines(mines, q) == 0 {
            for n in neighbors8(q, side) {
                if !seen[n.0][n.1] {
                    seen[n.0][n.1] = true;
                    stack.push(n);
                }
            }
        }
    }
    out
}

impl Minesweeper {
    pub fn new(side: usize, n_mines: usize, rng: StreamRng, params: &Params) -> Self {
        Minesweeper {
            side,
            n_mines,
            mines: None,
            revealed: vec![vec![false; side]; side],
            exploded: None,
            rng,
            reward_mine: params.float("reward_mine", 0.0),
        }
    }

    /// A board with a fixed mine layout, as if the first reveal already
    /// happened elsewhere.
    pub fn with_mines(mines: Vec<Vec<bool>>, params: &Params) -> Self {
        let side = mines.len();
        let n = mines.iter().flatten().filter(|&&m| m).count();
        let mut g = Minesweeper::new(side, n, Seed(0).dynamics(), params);
        g.mines = Some(mines);
        g
    }

    pub fn mines(&self) -> Option<&Vec<Vec<bool>>> {
        self.mines.as_ref()
    }

    pub fn revealed(&self) -> &Vec<Vec<bool>> {
        &self.revealed
    }

    pub fn safe_total(&self) -> usize {
        self.side * self.side - self.n_mines
    }

    pub fn revealed_count(&self) -> usize {
        self.revealed.iter().flatten().filter(|&&r| r).count()
    }

    fn lay_mines(&mut self, first: Pos) {
        let mut cells: Vec<Pos> = (0..self.side)
            .flat_map(|r| (0..self.side).map(move |c| (r, c)))
            .filter(|&p| p != first)
            .collect();
        cells.shuffle(&mut self.rng);
        let mut mines = vec![vec![false; self.side]; self.side];
        for &(r, c) in cells.iter().take(self.n_mines) {
            mines[r][c] = true;
        }
        self.mines = Some(mines);
    }

    fn all_safe_open(&self) -> bool {
        self.revealed_count() == self.safe_total()
    }

    fn hidden_cells(&self) -> Vec<Pos> {
        (0..self.side)
            .flat_map(|r| (0..self.side).map(move |c| (r, c)))
            .filter(|&(r, c)| !self.revealed[r][c])
            .collect()
    }
}

impl MultiTurn for Minesweeper {
    fn info() -> EnvInfo {
        info(
            "minesweeper",
            Category::Games,
            DifficultyTable::new(
                &["side", "mine_density"],
                [
                    &[
                        ("side", 5.into()),
                        ("mine_density", 0.12.into()),
                        ("reward_mine", 0.0.into()),
                    ],
                    &[
                        ("side", 7.into()),
                        ("mine_density", 0.16.into()),
                        ("reward_mine", 0.0.into()),
                    ],
                    &[
                        ("side", 9.into()),
                        ("mine_density", 0.2.into()),
                        ("reward_mine", 0.0.into()),
                    ],
                ],
            ),
            "Hidden cells are blue. Reveal one cell per turn with `reveal <row> <col>`, counting from 0 at \
             the top-left. A revealed cell shows how many of its eight neighbours hold mines; cells with no \
             neighbouring mine open their neighbours automatically. The first reveal is always safe. Each \
             turn earns the fraction of safe cells it opened; revealing a mine ends the game.",
            Grammar::Reveal,
            "one line per row; # hidden, 0-8 revealed count, * exploded mine",
            &[SOLO_AGENT],
        )
    }

    fn build(params: &Params, seed: Seed) -> Result<Self> {
        let side = params.int("side", 5) as usize;
        let density = params.float("mine_density", 0.12);
        let n = libm::round(density * (side * side) as f64) as usize;
        Ok(Minesweeper::new(side, n.min(side * side - 1), seed.dynamics(), params))
    }
}

impl Game for Minesweeper {
    fn render(&self, _rng: &mut StreamRng) -> Rendered {
        let cells: Vec<Vec<Cell>> = (0..self.side)
            .map(|r| {
                (0..self.side)
                    .map(|c| {
                        if self.exploded == Some((r, c)) {
                            Cell::text(Role::Mine, "*")
                        } else if !self.revealed[r][c] {
                            Cell::plain(Role::Hidden)
                        } else {
                            let n = self.mines.as_ref().map_or(0, |m| adjacent_mines(m, (r, c)));
                            if n == 0 {
                                Cell::plain(Role::Revealed)
                            } else {
                                Cell::text(Role::Revealed, n.to_string())
                            }
                        }
                    })
                    .collect()
            })
            .collect();
        grid_image(&cells)
    }

    fn question(&self, _agent: &str) -> String {
        format!(
            "The {n}x{n} board hides {} mines; {} of {} safe cells are open. Which cell do you reveal? \
             Answer exactly as `reveal <row> <col>`.",
            self.n_mines,
            self.revealed_count(),
            self.safe_total(),
            n = self.side
        )
    }

    fn caption(&self) -> Option<String> {
        let rows: Vec<Vec<char>> = (0..self.side)
            .map(|r| {
                (0..self.side)
                    .map(|c| {
                        if self.exploded == Some((r, c)) {
                            '*'
                        } else if !self.revealed[r][c] {
                            '#'
                        } else {
                            let n = self.mines.as_ref().map_or(0, |m| adjacent_mines(m, (r, c)));
                            char::from(b'0' + n as u8)
                        }
                    })
                    .collect()
            })
            .collect();
        Some(board_lines(&rows))
    }

    fn apply(&mut self, actions: &AgentMap<String>) -> Outcome {
        let raw = actions.get(SOLO_AGENT).map(String::as_str).unwrap_or_default();
        let Some(Command::Reveal(r, c)) = parse(Grammar::Reveal, raw) else {
            return invalid_action(raw, Grammar::Reveal);
        };
        let n = self.side as i64;
        if !(0..n).contains(&r) || !(0..n).contains(&c) {
            return invalid_action(raw, Grammar::Reveal).with_info("reason", json!("out of bounds"));
        }
        let p = (r as usize, c as usize);
        if self.revealed[p.0][p.1] {
            return Outcome::solo(0.0, false, "Already open.");
        }
        if self.mines.is_none() {
            self.lay_mines(p);
        }
        let mines = self.mines.as_ref().expect("laid above");
        if mines[p.0][p.1] {
            self.exploded = Some(p);
            return Outcome::solo(self.reward_mine, true, "Boom! That was a mine.");
        }
        let opened = flood(mines, &self.revealed, p);
        for &(a, b) in &opened {
            self.revealed[a][b] = true;
        }
        let reward = opened.len() as f64 / self.safe_total() as f64;
        let done = self.all_safe_open();
        let feedback = if done {
            "Every safe cell is open. You win!".to_string()
        } else {
            format!("Opened {} cell(s).", opened.len())
        };
        Outcome::solo(reward, done, feedback).with_info("opened", json!(opened.len()))
    }

    fn oracle_action(&self, _agent: &str) -> String {
        let Some(mines) = &self.mines else {
            let m = self.side / 2;
            return format!("reveal {m} {m}");
        };
        // prefer zero cells: they open the most at once
        let safe: Vec<Pos> = self.hidden_cells().into_iter().filter(|&(r, c)| !mines[r][c]).collect();
        let pick = safe
            .iter()
            .copied()
            .find(|&p| adjacent_mines(mines, p) == 0)
            .or_else(|| safe.first().copied())
            .unwrap_or((0, 0));
        format!("reveal {} {}", pick.0, pick.1)
    }

    fn random_action(&self, _agent: &str, rng: &mut dyn RngCore) -> String {
        let hidden = self.hidden_cells();
        let (r, c) = if hidden.is_empty() {
            (0, 0)
        } else {
            hidden[rng.gen_range(0..hidden.len())]
        };
        format!("reveal {r} {c}")
    }

    fn state_hash(&self) -> u64 {
        stable_hash(&(&self.mines, &self.revealed, self.exploded, self.rng.get_word_pos()))
    }

    fn is_over(&self) -> bool {
        self.exploded.is_some() || self.all_safe_open()
    }
}
