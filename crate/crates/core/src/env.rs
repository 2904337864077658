//! The environment abstraction: a [`Game`] supplies dynamics, and
//! [`BaseEnv`] wraps it with the shared reset/step bookkeeping (step budget,
//! done tracking, agent-map assembly).

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;
use serde_json::Value;

use crate::error::Error;
use crate::protocol::{AgentMap, Info, Mode, Observation, Params, Seed, SegmentTag, StepResult, SOLO_AGENT};
use crate::registry::{EnvFactory, EnvInfo};
use crate::render::{GridLayout, RasterImage};
use crate::rng::StreamRng;
use crate::Result;

/// Default step budget of multi-turn episodes.
pub const DEFAULT_MULTI_TURN_STEPS: u32 = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub image: RasterImage,
    /// Cell geometry, for grid-drawn states.
    pub grid: Option<GridLayout>,
}

impl Rendered {
    pub fn image(image: RasterImage) -> Self {
        Rendered { image, grid: None }
    }
}

/// Effect of one applied joint action.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub rewards: AgentMap<f64>,
    pub terminated: bool,
    /// Agents that receive the next observation. Ignored on termination,
    /// when every agent is reported.
    pub observers: Vec<String>,
    pub feedback: String,
    pub info: Info,
}

impl Outcome {
    pub fn solo(reward: f64, terminated: bool, feedback: impl Into<String>) -> Self {
        let mut rewards = AgentMap::new();
        rewards.insert(SOLO_AGENT.to_string(), reward);
        Outcome {
            rewards,
            terminated,
            observers: vec![SOLO_AGENT.to_string()],
            feedback: feedback.into(),
            info: Info::new(),
        }
    }

    pub fn with_info(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.info.insert(key.to_string(), value.into());
        self
    }
}

/// Environment-specific state and dynamics.
pub trait Game: Send {
    /// Every agent id, in turn order.
    fn agents(&self) -> Vec<String> {
        vec![SOLO_AGENT.to_string()]
    }

    /// Agents that must act at the current step.
    fn to_move(&self) -> Vec<String> {
        self.agents()
    }

    fn render(&self, rng: &mut StreamRng) -> Rendered;

    fn question(&self, agent: &str) -> String;

    /// Complete textual state, or `None` for environments without a captioner.
    fn caption(&self) -> Option<String>;

    /// Applies one action per acting agent. Unparseable actions must not
    /// panic: they follow the environment's invalid-action policy.
    fn apply(&mut self, actions: &AgentMap<String>) -> Outcome;

    /// Ground-truth action from privileged state.
    fn oracle_action(&self, agent: &str) -> String;

    /// A uniformly drawn action (or answer) from the action space.
    fn random_action(&self, agent: &str, rng: &mut dyn RngCore) -> String;

    fn state_hash(&self) -> u64;

    /// Whether the state is already terminal (e.g. a dead 2048 board).
    fn is_over(&self) -> bool {
        false
    }
}

/// A game plus episode bookkeeping.
pub struct BaseEnv {
    factory: Arc<dyn EnvFactory>,
    info: EnvInfo,
    params: Params,
    seed: Seed,
    max_steps: u32,
    game: Box<dyn Game>,
    steps: u32,
    done: bool,
}

impl core::fmt::Debug for BaseEnv {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("BaseEnv")
            .field("env_id", &self.info.env_id)
            .field("seed", &self.seed)
            .field("steps", &self.steps)
            .field("done", &self.done)
            .finish()
    }
}

impl BaseEnv {
    pub fn new(factory: Arc<dyn EnvFactory>, params: Params, seed: Seed, max_steps: Option<u32>) -> Result<Self> {
        let info = factory.info();
        let game = factory.build(&params, seed)?;
        let max_steps = max_steps.unwrap_or(match info.mode {
            Mode::SingleTurn => 1,
            Mode::MultiTurn => DEFAULT_MULTI_TURN_STEPS,
        });
        let done = game.is_over();
        Ok(BaseEnv {
            factory,
            info,
            params,
            seed,
            max_steps,
            game,
            steps: 0,
            done,
        })
    }

    pub fn info(&self) -> &EnvInfo {
        &self.info
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    pub fn steps(&self) -> u32 {
        self.steps
    }

    pub fn max_steps(&self) -> u32 {
        self.max_steps
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn game(&self) -> &dyn Game {
        self.game.as_ref()
    }

    pub fn to_move(&self) -> Vec<String> {
        if self.done {
            Vec::new()
        } else {
            self.game.to_move()
        }
    }

    /// Renders the current state. The render stream is re-derived from the
    /// seed on every call, so re-rendering is idempotent and never touches
    /// the dynamics stream.
    pub fn render(&self) -> Rendered {
        self.game.render(&mut self.seed.render())
    }

    pub fn caption(&self) -> Option<String> {
        self.game.caption()
    }

    pub fn state_hash(&self) -> u64 {
        self.game.state_hash()
    }

    fn observe(&self, agent: &str, image: &RasterImage, feedback: Option<&str>) -> Observation {
        let mut obs = Observation::new(image.clone());
        obs.put(SegmentTag::Question, self.game.question(agent));
        if let Some(f) = feedback.filter(|f| !f.is_empty()) {
            obs.put(SegmentTag::Feedback, f);
        }
        obs
    }

    /// Restarts the episode from the seed and returns the first observations.
    pub fn reset(&mut self) -> Result<AgentMap<Observation>> {
        self.game = self.factory.build(&self.params, self.seed)?;
        self.steps = 0;
        self.done = self.game.is_over();
        Ok(self.current_observations())
    }

    /// Observations for the agents due to act, without stepping.
    pub fn current_observations(&self) -> AgentMap<Observation> {
        let image = self.render().image;
        let agents = if self.done {
            self.game.agents()
        } else {
            self.game.to_move()
        };
        agents
            .into_iter()
            .map(|a| {
                let obs = self.observe(&a, &image, None);
                (a, obs)
            })
            .collect()
    }

    pub fn step(&mut self, actions: &AgentMap<String>) -> Result<StepResult> {
        if self.done {
            return Err(Error::StepAfterDone);
        }
        let movers = self.game.to_move();
        if let Some(missing) = movers.iter().find(|a| !actions.contains_key(*a)) {
            return Err(Error::MissingAction(missing.clone()));
        }
        if let Some(extra) = actions.keys().find(|a| !movers.contains(a)) {
            return Err(Error::OffTurn(extra.clone()));
        }
        let outcome = self.game.apply(actions);
        self.steps += 1;
        let truncated = !outcome.terminated && self.steps >= self.max_steps;
        self.done = outcome.terminated || truncated;

        let keys = if self.done {
            self.game.agents()
        } else {
            outcome.observers.clone()
        };
        let image = self.render().image;
        let mut result = StepResult::default();
        for agent in keys {
            let obs = self.observe(&agent, &image, Some(&outcome.feedback));
            let mut info = outcome.info.clone();
            info.insert("step".into(), Value::from(self.steps));
            if let Some(a) = actions.get(&agent) {
                info.insert("action".into(), Value::from(a.as_str()));
            }
            result
                .rewards
                .insert(agent.clone(), outcome.rewards.get(&agent).copied().unwrap_or(0.0));
            result.terminated.insert(agent.clone(), outcome.terminated);
            result.truncated.insert(agent.clone(), truncated);
            result.info.insert(agent.clone(), info);
            result.observations.insert(agent, obs);
        }
        Ok(result)
    }
}
