//! Push every box onto a goal. Levels are generated by pulling boxes away
//! from a solved position, so each one comes with a known solution.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};
use serde_json::json;

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

pub type Pos = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Level {
    /// `true` is a wall; the border is always wall.
    pub walls: Vec<Vec<bool>>,
    pub goals: Vec<Pos>,
    /// Kept sorted.
    pub boxes: Vec<Pos>,
    pub player: Pos,
}

impl Level {
    pub fn side(&self) -> usize {
        self.walls.len()
    }

    fn free(&self, p: Pos) -> bool {
        !self.walls[p.0][p.1] && !self.boxes.contains(&p)
    }

    pub fn solved(&self) -> bool {
        self.boxes.iter().all(|b| self.goals.contains(b))
    }

    pub fn boxes_on_goals(&self) -> usize {
        self.boxes.iter().filter(|b| self.goals.contains(b)).count()
    }
}

/// Neighbour of `p` in direction `d`; `None` past the grid edge.
pub fn shift(p: Pos, d: Direction, side: usize) -> Option<Pos> {
    let (dr, dc) = d.delta();
    let r = p.0 as i64 + i64::from(dr);
    let c = p.1 as i64 + i64::from(dc);
    (r >= 0 && c >= 0 && (r as usize) < side && (c as usize) < side).then_some((r as usize, c as usize))
}

/// What a single push-move did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveEffect {
    Blocked,
    Walked,
    Pushed { onto_goal: bool, off_goal: bool },
}

/// Forward move rule: walk into a free cell, or push one box into a free cell.
pub fn apply_move(level: &mut Level, d: Direction) -> MoveEffect {
    let side = level.side();
    let Some(next) = shift(level.player, d, side) else {
        return MoveEffect::Blocked;
    };
    if level.walls[next.0][next.1] {
        return MoveEffect::Blocked;
    }
    if let Some(i) = level.boxes.iter().position(|&b| b == next) {
        let Some(dest) = shift(next, d, side) else {
            return MoveEffect::Blocked;
        };
        if !level.free(dest) {
            return MoveEffect::Blocked;
        }
        let off_goal = level.goals.contains(&next);
        let onto_goal = level.goals.contains(&dest);
        level.boxes[i] = dest;
        level.boxes.sort_unstable();
        level.player = next;
        return MoveEffect::Pushed { onto_goal, off_goal };
    }
    level.player = next;
    MoveEffect::Walked
}

/// Reverse move: the player steps away in `d`, optionally dragging the box
/// behind it. Returns whether the step was possible.
fn pull(level: &mut Level, d: Direction, drag: bool) -> bool {
    let side = level.side();
    let Some(next) = shift(level.player, d, side) else {
        return false;
    };
    if !level.free(next) {
        return false;
    }
    let behind = shift(level.player, d.opposite(), side);
    let player = level.player;
    if drag {
        if let Some(i) = behind.and_then(|b| level.boxes.iter().position(|&x| x == b)) {
            level.boxes[i] = player;
            level.boxes.sort_unstable();
        }
    }
    level.player = next;
    true
}

/// Shortest push-solution by breadth-first search over (player, boxes).
pub fn bfs_solve(start: &Level, limit: usize) -> Option<Vec<Direction>> {
    if start.solved() {
        return Some(Vec::new());
    }
    let key = |l: &Level| (l.player, l.boxes.clone());
    let mut seen = BTreeSet::from([key(start)]);
    let mut queue = VecDeque::from([(start.clone(), Vec::new())]);
    while let Some((level, path)) = queue.pop_front() {
        for d in Direction::ALL {
            let mut next = level.clone();
            if apply_move(&mut next, d) == MoveEffect::Blocked {
                continue;
            }
            let mut p = path.clone();
            p.push(d);
            if next.solved() {
                return Some(p);
            }
            if seen.insert(key(&next)) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back((next, p));
            }
        }
    }
    None
}

fn generate(params: &Params, rng: &mut StreamRng) -> Option<(Level, Vec<Direction>)> {
    let side = params.int("side", 6) as usize;
    let n_boxes = params.int("boxes", 1) as usize;
    let wall_prob = params.float("wall_prob", 0.1);
    let pulls = params.int("pull_steps", 40) as usize;
    let mut walls = vec![vec![true; side]; side];
    let mut floor = Vec::new();
    for (r, row) in walls.iter_mut().enumerate().take(side - 1).skip(1) {
        for (c, cell) in row.iter_mut().enumerate().take(side - 1).skip(1) {
            if !rng.gen_bool(wall_prob) {
                *cell = false;
                floor.push((r, c));
            }
        }
    }
    if floor.len() < n_boxes + 3 {
        return None;
    }
    let pick = |taken: &[Pos], rng: &mut StreamRng| loop {
        let p = floor[rng.gen_range(0..floor.len())];
        if !taken.contains(&p) {
            return p;
        }
    };
    let mut goals = Vec::new();
    for _ in 0..n_boxes {
        let g = pick(&goals, rng);
        goals.push(g);
    }
    goals.sort_unstable();
    let player = pick(&goals, rng);
    let mut level = Level {
        walls,
        boxes: goals.clone(),
        goals,
        player,
    };
    let mut reverse = Vec::new();
    for _ in 0..pulls {
        let d = Direction::ALL[rng.gen_range(0..4)];
        if pull(&mut level, d, rng.gen_bool(0.8)) {
            reverse.push(d);
        }
    }
    if level.boxes_on_goals() > 0 {
        return None;
    }
    let plan: Vec<Direction> = reverse.iter().rev().map(|d| d.opposite()).collect();
    Some((level, plan))
}

#[derive(Debug, Clone)]
pub struct Sokoban {
    pub level: Level,
    /// Solution from the generated start, and the state hash before each move.
    plan: Vec<Direction>,
    plan_states: Vec<u64>,
    reward_on_goal: f64,
    reward_off_goal: f64,
    reward_solve: f64,
}

impl Sokoban {
    pub fn from_level(level: Level, mut plan: Vec<Direction>, params: &Params) -> Self {
        let mut plan_states = Vec::with_capacity(plan.len());
        let mut l = level.clone();
        for (i, &d) in plan.iter().enumerate() {
            plan_states.push(stable_hash(&l));
            apply_move(&mut l, d);
            // reversed pulls can pass through a solved state early
            if l.solved() {
                plan.truncate(i + 1);
                break;
            }
        }
        Sokoban {
            level,
            plan,
            plan_states,
            reward_on_goal: params.float("reward_on_goal", 1.0),
            reward_off_goal: params.float("reward_off_goal", -1.0),
            reward_solve: params.float("reward_solve", 10.0),
        }
    }

    /// Move list from the generated start that solves the level.
    pub fn plan(&self) -> &[Direction] {
        &self.plan
    }
}

impl MultiTurn for Sokoban {
    fn info() -> EnvInfo {
        info(
            "sokoban",
            Category::Puzzles,
            DifficultyTable::new(
                &["boxes", "side"],
                [
                    &[
                        ("boxes", 1.into()),
                        ("side", 6.into()),
                        ("wall_prob", 0.1.into()),
                        ("pull_steps", 40.into()),
                        ("reward_on_goal", 1.0.into()),
                        ("reward_off_goal", (-1.0).into()),
                        ("reward_solve", 10.0.into()),
                    ],
                    &[
                        ("boxes", 2.into()),
                        ("side", 7.into()),
                        ("wall_prob", 0.1.into()),
                        ("pull_steps", 60.into()),
                        ("reward_on_goal", 1.0.into()),
                        ("reward_off_goal", (-1.0).into()),
                        ("reward_solve", 10.0.into()),
                    ],
                    &[
                        ("boxes", 3.into()),
                        ("side", 8.into()),
                        ("wall_prob", 0.1.into()),
                        ("pull_steps", 80.into()),
                        ("reward_on_goal", 1.0.into()),
                        ("reward_off_goal", (-1.0).into()),
                        ("reward_solve", 10.0.into()),
                    ],
                ],
            ),
            "You are the magenta player in a warehouse. Brown cells are walls, pale cells are floor, red \
             cells are goals, orange cells are boxes and green cells are boxes already on a goal. Move one \
             cell up, down, left or right per turn. Walking into a box pushes it one cell if the cell beyond \
             is free; boxes cannot be pulled. Push every box onto a goal. A box newly on a goal earns +1, \
             pushing one off costs 1, and solving earns +10.",
            Grammar::Direction,
            "one line per row; # wall, - floor, . goal, $ box, * box on goal, @ player, + player on goal",
            &[SOLO_AGENT],
        )
    }

    fn build(params: &Params, seed: Seed) -> Result<Self> {
        let mut rng = seed.dynamics();
        for _ in 0..MAX_ATTEMPTS {
            if let Some((level, plan)) = generate(params, &mut rng) {
                return Ok(Sokoban::from_level(level, plan, params));
            }
        }
        Err(Error::Generation {
            env_id: "sokoban".into(),
            attempts: MAX_ATTEMPTS,
        })
    }
}

impl Game for Sokoban {
    fn render(&self, _rng: &mut StreamRng) -> Rendered {
        let l = &self.level;
        let cells: Vec<Vec<Cell>> = (0..l.side())
            .map(|r| {
                (0..l.side())
                    .map(|c| {
                        let p = (r, c);
                        let goal = l.goals.contains(&p);
                        let role = if l.walls[r][c] {
                            Role::Wall
                        } else if l.boxes.contains(&p) {
                            if goal {
                                Role::BoxOnGoal
                            } else {
                                Role::Box
                            }
                        } else if l.player == p {
                            Role::Player
                        } else if goal {
                            Role::GoalMark
                        } else {
                            Role::Floor
                        };
                        Cell::plain(role)
                    })
                    .collect()
            })
            .collect();
        grid_image(&cells)
    }

    fn question(&self, _agent: &str) -> String {
        format!(
            "{} of {} boxes are on goals. Which way do you move? Answer with exactly one of: up, down, \
             left, right.",
            self.level.boxes_on_goals(),
            self.level.boxes.len()
        )
    }

    fn caption(&self) -> Option<String> {
        let l = &self.level;
        let rows: Vec<Vec<char>> = (0..l.side())
            .map(|r| {
                (0..l.side())
                    .map(|c| {
                        let p = (r, c);
                        let goal = l.goals.contains(&p);
                        match (l.walls[r][c], l.boxes.contains(&p), l.player == p, goal) {
                            (true, ..) => '#',
                            (_, true, _, true) => '*',
                            (_, true, _, false) => '$',
                            (_, _, true, true) => '+',
                            (_, _, true, false) => '@',
                            (_, _, _, true) => '.',
                            _ => '-',
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
        let effect = apply_move(&mut self.level, d);
        let mut reward = 0.0;
        let feedback = match effect {
            MoveEffect::Blocked => "Blocked; nothing moved.".to_string(),
            MoveEffect::Walked => format!("Moved {}.", d.name()),
            MoveEffect::Pushed { onto_goal, off_goal } => {
                if onto_goal && !off_goal {
                    reward += self.reward_on_goal;
                }
                if off_goal && !onto_goal {
                    reward += self.reward_off_goal;
                }
                format!("Pushed a box {}.", d.name())
            }
        };
        let solved = self.level.solved();
        if solved {
            reward += self.reward_solve;
        }
        let feedback = if solved {
            "All boxes are on goals. Solved!".to_string()
        } else {
            feedback
        };
        Outcome::solo(reward, solved, feedback).with_info("boxes_on_goals", json!(self.level.boxes_on_goals()))
    }

    fn oracle_action(&self, _agent: &str) -> String {
        let h = stable_hash(&self.level);
        if let Some(i) = self.plan_states.iter().position(|&s| s == h) {
            return self.plan[i].name().to_string();
        }
        bfs_solve(&self.level, 200_000)
            .and_then(|p| p.first().copied())
            .unwrap_or(Direction::Up)
            .name()
            .to_string()
    }

    fn random_action(&self, _agent: &str, rng: &mut dyn RngCore) -> String {
        Direction::ALL[rng.gen_range(0..4)].name().to_string()
    }

    fn state_hash(&self) -> u64 {
        stable_hash(&self.level)
    }

    fn is_over(&self) -> bool {
        self.level.solved()
    }
}
