//! Multi-turn games with per-step rewards.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::marker::PhantomData;

use serde_json::Value;

use crate::env::{Game, Outcome};
use crate::grammar::{Command, Grammar};
use crate::protocol::{Category, DifficultyTable, Mode, Params, Seed};
use crate::registry::{EnvFactory, EnvInfo, Registry};
use crate::Result;

pub mod frozenlake;
pub mod game2048;
pub mod minesweeper;
pub mod sokoban;
pub mod tictactoe;

/// A game that knows its catalog entry and how to build itself.
pub trait MultiTurn: Game + Sized + 'static {
    fn info() -> EnvInfo;

    fn build(params: &Params, seed: Seed) -> Result<Self>;
}

pub struct GameFactory<G>(PhantomData<fn() -> G>);

impl<G> Default for GameFactory<G> {
    fn default() -> Self {
        GameFactory(PhantomData)
    }
}

impl<G: MultiTurn> EnvFactory for GameFactory<G> {
    fn info(&self) -> EnvInfo {
        G::info()
    }

    fn build(&self, params: &Params, seed: Seed) -> Result<Box<dyn Game>> {
        Ok(Box::new(G::build(params, seed)?))
    }
}

fn register<G: MultiTurn>(r: &mut Registry) {
    let info = G::info();
    r.register_env(&info.env_id, Arc::new(GameFactory::<G>::default()))
        .expect("shipped catalog ids are unique");
}

pub fn register_all(r: &mut Registry) {
    register::<sokoban::Sokoban>(r);
    register::<frozenlake::FrozenLake>(r);
    register::<game2048::Game2048>(r);
    register::<minesweeper::Minesweeper>(r);
    register::<tictactoe::TicTacToe>(r);
}

/// Ids of the shipped multi-turn games.
pub const IDS: [&str; 5] = ["sokoban", "frozenlake", "game2048", "minesweeper", "tictactoe"];

pub(crate) fn info(
    env_id: &str,
    category: Category,
    difficulty: DifficultyTable,
    rules: &str,
    grammar: Grammar,
    caption_format: &str,
    agents: &[&str],
) -> EnvInfo {
    EnvInfo {
        env_id: env_id.to_string(),
        category,
        mode: Mode::MultiTurn,
        difficulty,
        rules: rules.to_string(),
        action_grammar: grammar.describe().to_string(),
        grammar: Some(grammar),
        caption_format: caption_format.to_string(),
        agents: agents.iter().map(|a| a.to_string()).collect(),
    }
}

/// Strict parse of one agent's action text.
pub(crate) fn parse(grammar: Grammar, raw: &str) -> Option<Command> {
    grammar.parse_strict(raw)
}

/// No-op outcome for text outside the grammar.
pub(crate) fn invalid_action(raw: &str, grammar: Grammar) -> Outcome {
    Outcome::solo(
        0.0,
        false,
        alloc::format!("Invalid action. Expected: {}.", grammar.describe()),
    )
    .with_info("invalid_action", Value::from(raw))
}

/// Row-major character rendering of a board.
pub(crate) fn board_lines(rows: &[Vec<char>]) -> String {
    let lines: Vec<String> = rows.iter().map(|r| r.iter().collect()).collect();
    lines.join("\n")
}
