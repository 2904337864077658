//! Image-observed reasoning puzzles and multi-turn games behind a uniform
//! reset/step protocol.
//!
//! Everything in this crate is pure and allocation-only: instance
//! generation, dynamics, verification, rasterization, observation wrappers,
//! agent rollouts and metric reductions. IO (PNG encoding, JSON files, HTTP)
//! lives in the `gymv` companion crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod env;
pub mod error;
pub mod grammar;
pub mod harness;
pub mod metrics;
pub mod multi;
pub mod protocol;
pub mod registry;
pub mod render;
pub mod rng;
pub mod single;
pub mod wrappers;

pub use crate::env::{BaseEnv, Game, Outcome};
pub use crate::error::Error;
pub use crate::protocol::{
    AgentMap, Category, DifficultyTable, EnvSpec, EpisodeBatch, EpisodeRecord, Info, Mode, Observation, ParamValue,
    Params, Seed, Segment, SegmentTag, StepResult, Transition, SOLO_AGENT,
};
pub use crate::registry::{EnvInfo, Registry};
pub use crate::render::RasterImage;
pub use crate::wrappers::{EnvInstance, WrapperConfig};

pub type Result<T, E = Error> = core::result::Result<T, E>;
