//! Single-turn tasks: one rendered instance, one free-text answer, one
//! verdict.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::hash::Hash;
use core::marker::PhantomData;

use rand::RngCore;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::env::{Game, Outcome, Rendered};
use crate::error::Error;
use crate::protocol::{AgentMap, Params, Seed, SOLO_AGENT};
use crate::registry::{EnvFactory, EnvInfo, Registry};
use crate::rng::{stable_hash, StreamRng};
use crate::Result;

pub mod binary_matrix;
pub mod circuit_logic;
pub mod convex_hull_count;
pub mod grid_bfs;
pub mod largest_island;
pub mod longest_path_len;
pub mod mini_sudoku;
pub mod n_queens;
pub mod rotten_oranges;
pub mod shortest_path;
pub mod tower_of_hanoi;
pub mod visible_line;

pub mod common;

/// Rejection-sampling bound for generators.
pub const MAX_ATTEMPTS: u32 = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub score: f64,
    pub correct: bool,
    pub detail: String,
}

impl Verdict {
    pub fn correct() -> Self {
        Verdict {
            score: 1.0,
            correct: true,
            detail: "correct".into(),
        }
    }

    pub fn wrong(detail: impl Into<String>) -> Self {
        Verdict {
            score: 0.0,
            correct: false,
            detail: detail.into(),
        }
    }

    pub fn check(ok: bool, detail: impl Into<String>) -> Self {
        if ok {
            Verdict::correct()
        } else {
            Verdict::wrong(detail)
        }
    }

    /// Integer-answer verdict; `None` means nothing parseable was found.
    pub fn integer(answer: Option<i64>, expected: i64) -> Self {
        match answer {
            None => Verdict::wrong("parse"),
            Some(v) => Verdict::check(v == expected, format!("expected a different value than {v}")),
        }
    }
}

/// Generator, solver, verifier, captioner and renderer of one task family.
pub trait Task: Send + Sync + 'static {
    type Instance: Clone + Send + Sync + Hash + 'static;

    fn info() -> EnvInfo;

    /// One generation attempt; `None` rejects the draw and resamples.
    fn generate(params: &Params, rng: &mut StreamRng) -> Option<Self::Instance>;

    /// Ground-truth answer text.
    fn solve(inst: &Self::Instance) -> String;

    fn verify(inst: &Self::Instance, answer: &str) -> Verdict;

    fn question(inst: &Self::Instance) -> String;

    fn caption(inst: &Self::Instance) -> String;

    fn render(inst: &Self::Instance, rng: &mut StreamRng) -> Rendered;

    /// An answer drawn from the task's answer space, for the random agent.
    fn random_answer(inst: &Self::Instance, rng: &mut dyn RngCore) -> String;
}

/// Runs the rejection sampler on the dynamics stream of `seed`.
pub fn generate<T: Task>(params: &Params, seed: Seed) -> Result<T::Instance> {
    let mut rng = seed.dynamics();
    for _ in 0..MAX_ATTEMPTS {
        if let Some(inst) = T::generate(params, &mut rng) {
            return Ok(inst);
        }
    }
    Err(Error::Generation {
        env_id: T::info().env_id,
        attempts: MAX_ATTEMPTS,
    })
}

/// Instance for `(level, seed)` using the task's own difficulty table.
pub fn instance<T: Task>(level: u8, seed: u64) -> Result<T::Instance> {
    let info = T::info();
    let params = info.difficulty.level(level).ok_or(Error::UnknownDifficulty {
        env_id: info.env_id.clone(),
        level,
    })?;
    generate::<T>(params, Seed(seed))
}

pub struct SingleTurn<T: Task> {
    inst: T::Instance,
    verdict: Option<Verdict>,
}

impl<T: Task> SingleTurn<T> {
    pub fn new(inst: T::Instance) -> Self {
        SingleTurn { inst, verdict: None }
    }

    pub fn instance(&self) -> &T::Instance {
        &self.inst
    }
}

impl<T: Task> Game for SingleTurn<T> {
    fn render(&self, rng: &mut StreamRng) -> Rendered {
        T::render(&self.inst, rng)
    }

    fn question(&self, _agent: &str) -> String {
        T::question(&self.inst)
    }

    fn caption(&self) -> Option<String> {
        Some(T::caption(&self.inst))
    }

    fn apply(&mut self, actions: &AgentMap<String>) -> Outcome {
        let answer = actions.get(SOLO_AGENT).map(String::as_str).unwrap_or_default();
        let verdict = T::verify(&self.inst, answer);
        let feedback = if verdict.correct {
            "Correct.".to_string()
        } else {
            format!("Incorrect ({}).", verdict.detail)
        };
        let out = Outcome::solo(verdict.score, true, feedback).with_info(
            "verdict",
            json!({"score": verdict.score, "correct": verdict.correct, "detail": verdict.detail}),
        );
        self.verdict = Some(verdict);
        out
    }

    fn oracle_action(&self, _agent: &str) -> String {
        T::solve(&self.inst)
    }

    fn random_action(&self, _agent: &str, rng: &mut dyn RngCore) -> String {
        T::random_answer(&self.inst, rng)
    }

    fn state_hash(&self) -> u64 {
        stable_hash(&(stable_hash(&self.inst), self.verdict.as_ref().map(|v| v.correct)))
    }
}

pub struct TaskFactory<T>(PhantomData<fn() -> T>);

impl<T> Default for TaskFactory<T> {
    fn default() -> Self {
        TaskFactory(PhantomData)
    }
}

impl<T: Task> EnvFactory for TaskFactory<T> {
    fn info(&self) -> EnvInfo {
        T::info()
    }

    fn build(&self, params: &Params, seed: Seed) -> Result<Box<dyn Game>> {
        Ok(Box::new(SingleTurn::<T>::new(generate::<T>(params, seed)?)))
    }
}

fn register<T: Task>(r: &mut Registry) {
    let info = T::info();
    r.register_env(&info.env_id, Arc::new(TaskFactory::<T>::default()))
        .expect("shipped catalog ids are unique");
}

pub fn register_all(r: &mut Registry) {
    register::<rotten_oranges::RottenOranges>(r);
    register::<grid_bfs::GridBfs>(r);
    register::<binary_matrix::BinaryMatrix>(r);
    register::<largest_island::LargestIsland>(r);
    register::<visible_line::VisibleLine>(r);
    register::<convex_hull_count::ConvexHullCount>(r);
    register::<shortest_path::ShortestPath>(r);
    register::<longest_path_len::LongestPathLen>(r);
    register::<mini_sudoku::MiniSudoku>(r);
    register::<circuit_logic::CircuitLogic>(r);
    register::<n_queens::NQueens>(r);
    register::<tower_of_hanoi::TowerOfHanoi>(r);
}

/// Ids of the shipped single-turn tasks.
pub const IDS: [&str; 12] = [
    "rotten_oranges",
    "grid_bfs",
    "binary_matrix",
    "largest_island",
    "visible_line",
    "convex_hull_count",
    "shortest_path",
    "longest_path_len",
    "mini_sudoku",
    "circuit_logic",
    "n_queens",
    "tower_of_hanoi",
];

/// Object-safe view of a task, for code that iterates over the catalog.
pub trait DynTask: Send + Sync {
    fn env_id(&self) -> String;
    /// Generates `(level, seed)` and checks the ground truth against the verifier.
    fn self_consistent(&self, level: u8, seed: u64) -> Result<bool>;
}

struct DynTaskImpl<T>(PhantomData<fn() -> T>);

impl<T: Task> DynTask for DynTaskImpl<T> {
    fn env_id(&self) -> String {
        T::info().env_id
    }

    fn self_consistent(&self, level: u8, seed: u64) -> Result<bool> {
        let inst = instance::<T>(level, seed)?;
        Ok(T::verify(&inst, &T::solve(&inst)).correct)
    }
}

fn dyn_task<T: Task>() -> Box<dyn DynTask> {
    Box::new(DynTaskImpl::<T>(PhantomData))
}

pub fn all_tasks() -> Vec<Box<dyn DynTask>> {
    vec![
        dyn_task::<rotten_oranges::RottenOranges>(),
        dyn_task::<grid_bfs::GridBfs>(),
        dyn_task::<binary_matrix::BinaryMatrix>(),
        dyn_task::<largest_island::LargestIsland>(),
        dyn_task::<visible_line::VisibleLine>(),
        dyn_task::<convex_hull_count::ConvexHullCount>(),
        dyn_task::<shortest_path::ShortestPath>(),
        dyn_task::<longest_path_len::LongestPathLen>(),
        dyn_task::<mini_sudoku::MiniSudoku>(),
        dyn_task::<circuit_logic::CircuitLogic>(),
        dyn_task::<n_queens::NQueens>(),
        dyn_task::<tower_of_hanoi::TowerOfHanoi>(),
    ]
}
