//! Slide-and-merge tiles on a 4x4 board until the target tile appears.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, RngCore};
use serde_json::json;

use super::{info, invalid_action, parse, MultiTurn};
use crate::env::{Game, Outcome, Rendered};
use crate::grammar::{Command, Direction, Grammar};
use crate::protocol::{AgentMap, Category, DifficultyTable, Params, ParamsExt, Seed, SOLO_AGENT};
use crate::registry::EnvInfo;
use crate::render::{Cell, Role};
use crate::rng::{stable_hash, StreamRng};
use crate::single::common::grid_image;
use crate::Result;

pub const SIDE: usize = 4;
pub type Board = [[u32; SIDE]; SIDE];

/// Slides one line toward index 0. Returns the new line and the sum of
/// merged tile values.
pub fn slide_line(line: [u32; SIDE]) -> ([u32; SIDE], u32) {
    let tiles: Vec<u32> = line.iter().copied().filter(|&v| v != 0).collect();
    let mut out = [0u32; SIDE];
    let mut merged = 0;
    let (mut i, mut k) = (0, 0);
    while i < tiles.len() {
        if i + 1 < tiles.len() && tiles[i] == tiles[i + 1] {
            out[k] = tiles[i] * 2;
            merged += out[k];
            i += 2;
        } else {
            out[k] = tiles[i];
            i += 1;
        }
        k += 1;
    }
    (out, merged)
}

/// Board coordinates of line `i`, ordered from the edge tiles slide toward.
fn line_cells(d: Direction, i: usize) -> [(usize, usize); SIDE] {
    let mut cells = [(0, 0); SIDE];
    for (j, cell) in cells.iter_mut().enumerate() {
        *cell = match d {
            Direction::Left => (i, j),
            Direction::Right => (i, SIDE - 1 - j),
            Direction::Up => (j, i),
            Direction::Down => (SIDE - 1 - j, i),
        };
    }
    cells
}

/// Slides the whole board; returns the new board and the merge sum.
pub fn slide(board: &Board, d: Direction) -> (Board, u32) {
    let mut out = *board;
    let mut merged = 0;
    for i in 0..SIDE {
        let cells = line_cells(d, i);
        let line = cells.map(|(r, c)| board[r][c]);
        let (new, m) = slide_line(line);
        merged += m;
        for (j, &(r, c)) in cells.iter().enumerate() {
            out[r][c] = new[j];
        }
    }
    (out, merged)
}

pub fn has_move(board: &Board) -> bool {
    Direction::ALL.iter().any(|&d| slide(board, d).0 != *board)
}

pub fn board_sum(board: &Board) -> u32 {
    board.iter().flatten().sum()
}

fn max_tile(board: &Board) -> u32 {
    board.iter().flatten().copied().max().unwrap_or(0)
}

pub struct Game2048 {
    pub board: Board,
    rng: StreamRng,
    target: u32,
    spawn_four_prob: f64,
    target_bonus: f64,
    moves: u32,
}

impl Game2048 {
    pub fn new(board: Board, params: &Params, rng: StreamRng) -> Self {
        Game2048 {
            board,
            rng,
            target: params.int("target", 64) as u32,
            spawn_four_prob: params.float("spawn_four_prob", 0.1),
            target_bonus: params.float("target_bonus", 1.0),
            moves: 0,
        }
    }

    pub fn target(&self) -> u32 {
        self.target
    }

    /// Places a 2 (or, rarely, a 4) on a uniformly chosen empty cell.
    fn spawn(&mut self) -> Option<((usize, usize), u32)> {
        let empty: Vec<(usize, usize)> = (0..SIDE)
            .flat_map(|r| (0..SIDE).map(move |c| (r, c)))
            .filter(|&(r, c)| self.board[r][c] == 0)
            .collect();
        if empty.is_empty() {
            return None;
        }
        let (r, c) = empty[self.rng.gen_range(0..empty.len())];
        let v = if self.rng.gen_bool(self.spawn_four_prob) { 4 } else { 2 };
        self.board[r][c] = v;
        Some(((r, c), v))
    }

    fn won(&self) -> bool {
        max_tile(&self.board) >= self.target
    }
}

impl MultiTurn for Game2048 {
    fn info() -> EnvInfo {
        let row = |t: i64| -> [(&'static str, crate::protocol::ParamValue); 4] {
            [
                ("target", t.into()),
                ("spawn_four_prob", 0.1.into()),
                ("target_bonus", 1.0.into()),
                ("start_tiles", 2.into()),
            ]
        };
        let (a, b, c) = (row(64), row(128), row(256));
        info(
            "game2048",
            Category::Games,
            DifficultyTable::new(&["target"], [&a, &b, &c]),
            "Numbered tiles sit on a 4x4 board. Each move slides every tile as far as possible up, down, \
             left or right; two equal tiles that collide merge into their sum, at most once per move. \
             After a move that changes the board, a new 2 (sometimes a 4) appears on an empty cell. Each \
             merge earns its value divided by the target; making the target tile earns +1 and ends the \
             game, as does running out of moves.",
            Grammar::Direction,
            "four lines of four space-separated values; . = empty",
            &[SOLO_AGENT],
        )
    }

    fn build(params: &Params, seed: Seed) -> Result<Self> {
        let mut g = Game2048::new([[0; SIDE]; SIDE], params, seed.dynamics());
        for _ in 0..params.int("start_tiles", 2) {
            g.spawn();
        }
        Ok(g)
    }
}

impl Game for Game2048 {
    fn render(&self, _rng: &mut StreamRng) -> Rendered {
        let cells: Vec<Vec<Cell>> = self
            .board
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| {
                        if v == 0 {
                            Cell::plain(Role::TileEmpty)
                        } else {
                            Cell::text(Role::Tile, v.to_string())
                        }
                    })
                    .collect()
            })
            .collect();
        grid_image(&cells)
    }

    fn question(&self, _agent: &str) -> String {
        format!(
            "Target tile: {}. Largest tile so far: {}. Which way do you slide? Answer with exactly one of: \
             up, down, left, right.",
            self.target,
            max_tile(&self.board)
        )
    }

    fn caption(&self) -> Option<String> {
        let rows: Vec<String> = self
            .board
            .iter()
            .map(|r| {
                let cells: Vec<String> = r
                    .iter()
                    .map(|&v| if v == 0 { ".".to_string() } else { v.to_string() })
                    .collect();
                cells.join(" ")
            })
            .collect();
        Some(rows.join("\n"))
    }

    fn apply(&mut self, actions: &AgentMap<String>) -> Outcome {
        let raw = actions.get(SOLO_AGENT).map(String::as_str).unwrap_or_default();
        let Some(Command::Move(d)) = parse(Grammar::Direction, raw) else {
            return invalid_action(raw, Grammar::Direction);
        };
        let (next, merged) = slide(&self.board, d);
        if next == self.board {
            return Outcome::solo(0.0, false, "Nothing moved.").with_info("merged", json!(0));
        }
        self.board = next;
        self.moves += 1;
        let mut reward = f64::from(merged) / f64::from(self.target);
        let won = self.won();
        let spawned = if won { None } else { self.spawn() };
        if won {
            reward += self.target_bonus;
        }
        let stuck = !won && !has_move(&self.board);
        let feedback = if won {
            format!("You made {}!", self.target)
        } else if stuck {
            "No moves left. Game over.".to_string()
        } else if merged > 0 {
            format!("Slid {}; merged tiles worth {merged}.", d.name())
        } else {
            format!("Slid {}.", d.name())
        };
        let mut out = Outcome::solo(reward, won || stuck, feedback).with_info("merged", json!(merged));
        if let Some(((r, c), v)) = spawned {
            out = out.with_info("spawn", json!({"row": r, "col": c, "value": v}));
        }
        out
    }

    fn oracle_action(&self, _agent: &str) -> String {
        // greedy: most merged value, then most empty cells, then a corner-keeping order
        let order = [Direction::Left, Direction::Up, Direction::Right, Direction::Down];
        let score = |d: Direction| {
            let (b, m) = slide(&self.board, d);
            if b == self.board {
                return None;
            }
            let empty = b.iter().flatten().filter(|&&v| v == 0).count() as u32;
            let corner = u32::from(b[0][0] == max_tile(&b));
            Some((m, empty, corner))
        };
        let mut best: Option<(Direction, (u32, u32, u32))> = None;
        for d in order {
            if let Some(s) = score(d) {
                if best.is_none_or(|(_, b)| s > b) {
                    best = Some((d, s));
                }
            }
        }
        best.map_or(Direction::Left, |b| b.0).name().to_string()
    }

    fn random_action(&self, _agent: &str, rng: &mut dyn RngCore) -> String {
        Direction::ALL[rng.gen_range(0..4)].name().to_string()
    }

    fn state_hash(&self) -> u64 {
        stable_hash(&(self.board, self.moves, self.rng.get_word_pos()))
    }

    fn is_over(&self) -> bool {
        self.won() || !has_move(&self.board)
    }
}
