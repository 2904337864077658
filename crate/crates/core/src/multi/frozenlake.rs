//! Walk across a frozen lake from the start cell to the goal cell without
//! stepping into a hole. Moves are deterministic.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use super::sokoban::{shift, Pos};
use super::{board_lines, info, invalid_action, parse, MultiTurn};
use crate::env::{Game, Outcome, Rendered};
use crate::error::Error;
use crate::grammar::{Command, Direction, Grammar};
use crate::protocol::{AgentMap, Category, DifficultyTable, Params, ParamsExt, Seed, SOLO_AGENT};
use crate::registry::EnvInfo;
use crate::render::{Cell, Role};
use crate::rng::{stable_hash, StreamRng};
use crate::single::common::grid_image;
use crate::single::MAX_ATTEMPTS;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lake {
    /// `true` is a hole.
    pub holes: Vec<Vec<bool>>,
    pub start: Pos,
    pub goal: Pos,
    pub player: Pos,
}

impl Lake {
    pub fn side(&self) -> usize {
        self.holes.len()
    }
}

/// First moves of a shortest hole-free route from `from` to the goal,
/// or `None` if the goal is cut off.
pub fn route(lake: &Lake, from: Pos) -> Option<Vec<Direction>> {
    let n = lake.side();
    let mut prev: Vec<Vec<Option<(Pos, Direction)>>> = vec![vec![None; n]; n];
    let mut seen = vec![vec![false; n]; n];
    seen[from.0][from.1] = true;
    let mut q = VecDeque::from([from]);
    while let Some(p) = q.pop_front() {
        if p == lake.goal {
            let mut path = Vec::new();
            let mut at = p;
            while let Some((back, d)) = prev[at.0][at.1] {
                path.push(d);
                at = back;
            }
            path.reverse();
            return Some(path);
        }
        for d in Direction::ALL {
            if let Some(nx) = shift(p, d, n) {
                if !seen[nx.0][nx.1] && !lake.holes[nx.0][nx.1] {
                    seen[nx.0][nx.1] = true;
                    prev[nx.0][nx.1] = Some((p, d));
                    q.push_back(nx);
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone)]
pub struct FrozenLake {
    pub lake: Lake,
    done: bool,
    reward_goal: f64,
}

impl FrozenLake {
    pub fn from_lake(lake: Lake, params: &Params) -> Self {
        FrozenLake {
            lake,
            done: false,
            reward_goal: params.float("reward_goal", 1.0),
        }
    }
}

impl MultiTurn for FrozenLake {
    fn info() -> EnvInfo {
        info(
            "frozenlake",
            Category::Games,
            DifficultyTable::new(
                &["side", "hole_prob"],
                [
                    &[
                        ("side", 4.into()),
                        ("hole_prob", 0.15.into()),
                        ("reward_goal", 1.0.into()),
                    ],
                    &[
                        ("side", 6.into()),
                        ("hole_prob", 0.2.into()),
                        ("reward_goal", 1.0.into()),
                    ],
                    &[
                        ("side", 8.into()),
                        ("hole_prob", 0.25.into()),
                        ("reward_goal", 1.0.into()),
                    ],
                ],
            ),
            "You are the magenta square on a frozen lake. Light blue cells are ice, dark blue cells are \
             holes, the blue cell is the start and the red cell is the goal; both can be anywhere on \
             the lake. Move one cell up, down, left or right per turn; moving off the edge leaves you \
             in place. Reaching the goal earns +1 and ends the episode; falling into a hole ends it with \
             nothing.",
            Grammar::Direction,
            "one line per row; S start, F ice, H hole, G goal, @ player",
            &[SOLO_AGENT],
        )
    }

    fn build(params: &Params, seed: Seed) -> Result<Self> {
        let side = params.int("side", 4) as usize;
        let p = params.float("hole_prob", 0.15);
        let mut rng = seed.dynamics();
        let cell = |rng: &mut StreamRng| (rng.gen_range(0..side), rng.gen_range(0..side));
        for _ in 0..MAX_ATTEMPTS {
            let start = cell(&mut rng);
            let goal = cell(&mut rng);
            if start.0.abs_diff(goal.0) + start.1.abs_diff(goal.1) < side / 2 {
                continue;
            }
            let mut holes: Vec<Vec<bool>> = (0..side)
                .map(|_| (0..side).map(|_| rng.gen_bool(p)).collect())
                .collect();
            holes[start.0][start.1] = false;
            holes[goal.0][goal.1] = false;
            let lake = Lake {
                holes,
                start,
                goal,
                player: start,
            };
            if route(&lake, lake.start).is_some() {
                return Ok(FrozenLake::from_lake(lake, params));
            }
        }
        Err(Error::Generation {
            env_id: "frozenlake".into(),
            attempts: MAX_ATTEMPTS,
        })
    }
}

impl Game for FrozenLake {
    fn render(&self, _rng: &mut StreamRng) -> Rendered {
        let l = &self.lake;
        let cells: Vec<Vec<Cell>> = (0..l.side())
            .map(|r| {
                (0..l.side())
                    .map(|c| {
                        let p = (r, c);
                        Cell::plain(if l.player == p {
                            Role::Player
                        } else if l.holes[r][c] {
                            Role::Hole
                        } else if p == l.goal {
                            Role::Goal
                        } else if p == l.start {
                            Role::Start
                        } else {
                            Role::Ice
                        })
                    })
                    .collect()
            })
            .collect();
        grid_image(&cells)
    }

    fn question(&self, _agent: &str) -> String {
        format!(
            "You are at row {}, column {}. Which way do you move? Answer with exactly one of: up, down, \
             left, right.",
            self.lake.player.0, self.lake.player.1
        )
    }

    fn caption(&self) -> Option<String> {
        let l = &self.lake;
        let rows: Vec<Vec<char>> = (0..l.side())
            .map(|r| {
                (0..l.side())
                    .map(|c| {
                        let p = (r, c);
                        if l.player == p {
                            '@'
                        } else if l.holes[r][c] {
                            'H'
                        } else if p == l.goal {
                            'G'
                        } else if p == l.start {
                            'S'
                        } else {
                            'F'
                        }
                    })
                    .collect()
            })
            .collect();
        Some(board_lines(&rows))
    }

    fn apply(&mut self, actions: &AgentMap<String>) -> Outcome {
        let raw = actions.get(SOLO_AGENT).map(String::as_str).unwrap_or_default();
        let Some(Command::Move(d)) = parse(Grammar::Direction, raw) else {
            return invalid_action(raw, Grammar::Direction);
        };
        let Some(next) = shift(self.lake.player, d, self.lake.side()) else {
            return Outcome::solo(0.0, false, "The edge of the lake; you stay in place.");
        };
        self.lake.player = next;
        if self.lake.holes[next.0][next.1] {
            self.done = true;
            return Outcome::solo(0.0, true, "You fell into a hole.");
        }
        if next == self.lake.goal {
            self.done = true;
            return Outcome::solo(self.reward_goal, true, "You reached the goal!");
        }
        Outcome::solo(0.0, false, format!("Moved {}.", d.name()))
    }

    fn oracle_action(&self, _agent: &str) -> String {
        route(&self.lake, self.lake.player)
            .and_then(|p| p.first().copied())
            .unwrap_or(Direction::Down)
            .name()
            .to_string()
    }

    fn random_action(&self, _agent: &str, rng: &mut dyn RngCore) -> String {
        Direction::ALL[rng.gen_range(0..4)].name().to_string()
    }

    fn state_hash(&self) -> u64 {
        stable_hash(&(&self.lake, self.done))
    }

    fn is_over(&self) -> bool {
        self.done
    }
}
