//! Agents and the episode runner.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::protocol::{AgentMap, EnvSpec, EpisodeBatch, EpisodeRecord, Observation, Seed, Transition};
use crate::registry::Registry;
use crate::rng::StreamRng;
use crate::wrappers::EnvInstance;
use crate::Result;

/// Something that turns an observation into action text.
pub trait Agent {
    /// Short identifier recorded with every episode.
    fn name(&self) -> String;

    /// Called before each episode.
    fn begin(&mut self, _spec: &EnvSpec, _seed: Seed, _rollout: u32) {}

    /// Action text for `agent_id`. `env` is available to privileged agents
    /// (oracle, random); observation-only agents must ignore it. An `Err`
    /// ends the episode and is recorded on it.
    fn act(&mut self, agent_id: &str, obs: &Observation, env: &EnvInstance) -> core::result::Result<String, String>;
}

/// Uniform draws from the action space, on the agent stream of the seed.
#[derive(Default)]
pub struct RandomAgent {
    rng: Option<StreamRng>,
}

impl Agent for RandomAgent {
    fn name(&self) -> String {
        "random".into()
    }

    fn begin(&mut self, _spec: &EnvSpec, seed: Seed, rollout: u32) {
        self.rng = Some(seed.agent(rollout));
    }

    fn act(&mut self, agent_id: &str, _obs: &Observation, env: &EnvInstance) -> core::result::Result<String, String> {
        let rng = self.rng.get_or_insert_with(|| env.base().seed().agent(0));
        Ok(env.random_action(agent_id, rng))
    }
}

/// Ground-truth solver with access to hidden state.
#[derive(Default)]
pub struct OracleAgent;

impl Agent for OracleAgent {
    fn name(&self) -> String {
        "oracle".into()
    }

    fn act(&mut self, agent_id: &str, _obs: &Observation, env: &EnvInstance) -> core::result::Result<String, String> {
        Ok(env.oracle_action(agent_id))
    }
}

/// Plays one episode to completion (or to the first agent failure).
pub fn run_episode(
    registry: &Registry,
    agent: &mut dyn Agent,
    spec: &EnvSpec,
    seed: Seed,
    rollout: u32,
) -> Result<EpisodeRecord> {
    let mut env = registry.make(spec, seed)?;
    agent.begin(spec, seed, rollout);
    let mut obs = env.reset()?;
    let agents = env.base().info().agents.clone();
    let mut returns: AgentMap<f64> = agents.iter().map(|a| (a.clone(), 0.0)).collect();
    let mut transitions = Vec::new();
    let mut error = None;
    while !env.is_done() {
        let mut actions = AgentMap::new();
        for a in env.to_move() {
            let Some(o) = obs.get(&a) else {
                error = Some(format!("no observation for `{a}`"));
                break;
            };
            match agent.act(&a, o, &env) {
                Ok(text) => {
                    actions.insert(a, text);
                }
                Err(e) => {
                    error = Some(e);
                    break;
                }
            }
        }
        if error.is_some() {
            break;
        }
        let result = env.step(&actions)?;
        for (a, r) in &result.rewards {
            *returns.entry(a.clone()).or_insert(0.0) += r;
        }
        let next = result.observations.clone();
        transitions.push(Transition {
            observations: core::mem::replace(&mut obs, next),
            actions,
            result,
        });
    }
    let final_score = agents.first().and_then(|a| returns.get(a)).copied().unwrap_or(0.0);
    Ok(EpisodeRecord {
        spec: spec.clone(),
        seed,
        rollout,
        agent: agent.name(),
        transitions,
        returns,
        final_score,
        error,
    })
}

/// `rollouts` episodes per seed, ordered by `(seed, rollout)`.
pub fn run_episodes(
    registry: &Registry,
    agent: &mut dyn Agent,
    spec: &EnvSpec,
    seeds: &[u64],
    rollouts: u32,
) -> Result<EpisodeBatch> {
    let mut seeds = seeds.to_vec();
    seeds.sort_unstable();
    let mut out = Vec::with_capacity(seeds.len() * rollouts as usize);
    for s in seeds {
        for r in 0..rollouts {
            out.push(run_episode(registry, agent, spec, Seed(s), r)?);
        }
    }
    Ok(out)
}

/// Final scores grouped per seed, in seed order.
pub fn score_groups(batch: &[EpisodeRecord]) -> Vec<Vec<f64>> {
    let mut groups: Vec<(u64, Vec<f64>)> = Vec::new();
    let mut sorted: Vec<&EpisodeRecord> = batch.iter().collect();
    sorted.sort_by_key(|e| (e.seed.0, e.rollout));
    for e in sorted {
        match groups.last_mut() {
            Some((s, g)) if *s == e.seed.0 => g.push(e.final_score),
            _ => groups.push((e.seed.0, alloc::vec![e.final_score])),
        }
    }
    groups.into_iter().map(|g| g.1).collect()
}

/// A deterministic agent that replays a fixed list of actions.
pub struct ScriptedAgent {
    pub script: Vec<String>,
    cursor: usize,
}

impl ScriptedAgent {
    pub fn new(script: Vec<String>) -> Self {
        ScriptedAgent { script, cursor: 0 }
    }
}

impl Agent for ScriptedAgent {
    fn name(&self) -> String {
        "scripted".to_string()
    }

    fn begin(&mut self, _spec: &EnvSpec, _seed: Seed, _rollout: u32) {
        self.cursor = 0;
    }

    fn act(&mut self, _agent_id: &str, _obs: &Observation, _env: &EnvInstance) -> core::result::Result<String, String> {
        let a = self
            .script
            .get(self.cursor)
            .cloned()
            .ok_or_else(|| "script exhausted".to_string())?;
        self.cursor += 1;
        Ok(a)
    }
}
