//! Two-player noughts and crosses. `agent_x` moves first.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};
use serde_json::json;

use super::{board_lines, info, parse, MultiTurn};
use crate::env::{Game, Outcome, Rendered};
use crate::grammar::{Command, Grammar};
use crate::protocol::{AgentMap, Category, DifficultyTable, Params, ParamsExt, Seed};
use crate::registry::EnvInfo;
use crate::render::{Cell, Role};
use crate::rng::{stable_hash, StreamRng};
use crate::single::common::grid_image;
use crate::Result;

pub const AGENT_X: &str = "agent_x";
pub const AGENT_O: &str = "agent_o";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mark {
    X,
    O,
}

impl Mark {
    fn other(self) -> Mark {
        match self {
            Mark::X => Mark::O,
            Mark::O => Mark::X,
        }
    }

    fn agent(self) -> &'static str {
        match self {
            Mark::X => AGENT_X,
            Mark::O => AGENT_O,
        }
    }

    fn symbol(self) -> char {
        match self {
            Mark::X => 'X',
            Mark::O => 'O',
        }
    }
}

pub type Board = [[Option<Mark>; 3]; 3];

const LINES: [[(usize, usize); 3]; 8] = [
    [(0, 0), (0, 1), (0, 2)],
    [(1, 0), (1, 1), (1, 2)],
    [(2, 0), (2, 1), (2, 2)],
    [(0, 0), (1, 0), (2, 0)],
    [(0, 1), (1, 1), (2, 1)],
    [(0, 2), (1, 2), (2, 2)],
    [(0, 0), (1, 1), (2, 2)],
    [(0, 2), (1, 1), (2, 0)],
];

pub fn winner(b: &Board) -> Option<Mark> {
    LINES.iter().find_map(|l| {
        let m = b[l[0].0][l[0].1]?;
        (b[l[1].0][l[1].1] == Some(m) && b[l[2].0][l[2].1] == Some(m)).then_some(m)
    })
}

fn empty_cells(b: &Board) -> Vec<(usize, usize)> {
    (0..3)
        .flat_map(|r| (0..3).map(move |c| (r, c)))
        .filter(|&(r, c)| b[r][c].is_none())
        .collect()
}

/// Game value for `to_move` under perfect play: +1 win, 0 draw, -1 loss.
pub fn minimax(b: &mut Board, to_move: Mark) -> i32 {
    if let Some(w) = winner(b) {
        return if w == to_move { 1 } else { -1 };
    }
    let cells = empty_cells(b);
    if cells.is_empty() {
        return 0;
    }
    let mut best = -2;
    for (r, c) in cells {
        b[r][c] = Some(to_move);
        best = best.max(-minimax(b, to_move.other()));
        b[r][c] = None;
        if best == 1 {
            break;
        }
    }
    best
}

#[derive(Debug, Clone)]
pub struct TicTacToe {
    pub board: Board,
    pub turn: Mark,
    over: bool,
    reward_win: f64,
    reward_loss: f64,
    reward_draw: f64,
    reward_forfeit: f64,
}

impl TicTacToe {
    pub fn new(params: &Params) -> Self {
        TicTacToe {
            board: [[None; 3]; 3],
            turn: Mark::X,
            over: false,
            reward_win: params.float("reward_win", 1.0),
            reward_loss: params.float("reward_loss", -1.0),
            reward_draw: params.float("reward_draw", 0.0),
            reward_forfeit: params.float("reward_forfeit", -1.0),
        }
    }

    fn end(&mut self, rewards: [(Mark, f64); 2], feedback: String) -> Outcome {
        self.over = true;
        let mut out = Outcome {
            terminated: true,
            feedback,
            ..Outcome::default()
        };
        for (m, r) in rewards {
            out.rewards.insert(m.agent().to_string(), r);
        }
        out
    }
}

impl MultiTurn for TicTacToe {
    fn info() -> EnvInfo {
        let row = [
            ("side", 3.into()),
            ("reward_win", 1.0.into()),
            ("reward_loss", (-1.0).into()),
            ("reward_draw", 0.0.into()),
            ("reward_forfeit", (-1.0).into()),
        ];
        info(
            "tictactoe",
            Category::Games,
            DifficultyTable::new(&[], [&row, &row, &row]),
            "Two players take turns marking empty cells of a 3x3 grid; X (agent_x) moves first, O \
             (agent_o) second. Rows and columns are numbered 0 to 2 from the top-left. Three marks in a \
             row, column or diagonal win (+1, the loser gets -1); a full board without a line is a draw. \
             Marking an occupied or non-existent cell forfeits the game (-1 for the offender, +1 for the \
             opponent).",
            Grammar::Place,
            "three lines of three characters (X, O or .), then `to move: X|O`",
            &[AGENT_X, AGENT_O],
        )
    }

    fn build(params: &Params, _seed: Seed) -> Result<Self> {
        Ok(TicTacToe::new(params))
    }
}

impl Game for TicTacToe {
    fn agents(&self) -> Vec<String> {
        vec![AGENT_X.to_string(), AGENT_O.to_string()]
    }

    fn to_move(&self) -> Vec<String> {
        vec![self.turn.agent().to_string()]
    }

    fn render(&self, _rng: &mut StreamRng) -> Rendered {
        let cells: Vec<Vec<Cell>> = self
            .board
            .iter()
            .map(|r| {
                r.iter()
                    .map(|m| match m {
                        None => Cell::plain(Role::Open),
                        Some(Mark::X) => Cell::mark(Role::Open, "X", Role::XMark),
                        Some(Mark::O) => Cell::mark(Role::Open, "O", Role::OMark),
                    })
                    .collect()
            })
            .collect();
        grid_image(&cells)
    }

    fn question(&self, agent: &str) -> String {
        let me = if agent == AGENT_X { 'X' } else { 'O' };
        format!(
            "You play {me}. It is {}'s turn. Where do you place your mark? Answer exactly as `place <row> \
             <col>`.",
            self.turn.symbol()
        )
    }

    fn caption(&self) -> Option<String> {
        let rows: Vec<Vec<char>> = self
            .board
            .iter()
            .map(|r| r.iter().map(|m| m.map_or('.', Mark::symbol)).collect())
            .collect();
        Some(format!("{}\nto move: {}", board_lines(&rows), self.turn.symbol()))
    }

    fn apply(&mut self, actions: &AgentMap<String>) -> Outcome {
        let me = self.turn;
        let raw = actions.get(me.agent()).map(String::as_str).unwrap_or_default();
        let cell = match parse(Grammar::Place, raw) {
            Some(Command::Place(r, c)) if (0..3).contains(&r) && (0..3).contains(&c) => Some((r as usize, c as usize)),
            _ => None,
        };
        let Some((r, c)) = cell.filter(|&(r, c)| self.board[r][c].is_none()) else {
            let forfeit = self.reward_forfeit;
            let win = self.reward_win;
            return self
                .end(
                    [(me, forfeit), (me.other(), win)],
                    format!("{} made an illegal move and forfeits.", me.symbol()),
                )
                .with_info("invalid_action", json!(raw));
        };
        self.board[r][c] = Some(me);
        if winner(&self.board) == Some(me) {
            let (w, l) = (self.reward_win, self.reward_loss);
            return self.end([(me, w), (me.other(), l)], format!("{} wins.", me.symbol()));
        }
        if empty_cells(&self.board).is_empty() {
            let d = self.reward_draw;
            return self.end([(me, d), (me.other(), d)], "Draw.".to_string());
        }
        self.turn = me.other();
        let mut out = Outcome {
            feedback: format!("{} placed at {r} {c}.", me.symbol()),
            observers: vec![self.turn.agent().to_string()],
            ..Outcome::default()
        };
        out.rewards.insert(me.agent().to_string(), 0.0);
        out
    }

    fn oracle_action(&self, _agent: &str) -> String {
        let mut b = self.board;
        let mut best: Option<((usize, usize), i32)> = None;
        for (r, c) in empty_cells(&b) {
            b[r][c] = Some(self.turn);
            let v = -minimax(&mut b, self.turn.other());
            b[r][c] = None;
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some(((r, c), v));
            }
        }
        let (r, c) = best.map_or((0, 0), |b| b.0);
        format!("place {r} {c}")
    }

    fn random_action(&self, _agent: &str, rng: &mut dyn RngCore) -> String {
        let cells = empty_cells(&self.board);
        let (r, c) = if cells.is_empty() {
            (0, 0)
        } else {
            cells[rng.gen_range(0..cells.len())]
        };
        format!("place {r} {c}")
    }

    fn state_hash(&self) -> u64 {
        stable_hash(&(self.board, self.turn, self.over))
    }

    fn is_over(&self) -> bool {
        self.over || winner(&self.board).is_some() || empty_cells(&self.board).is_empty()
    }
}
