//! Checks shared between the core integration tests and the acceptance
//! gate. Each returns `Err` with a description of the first violation.

use gymv_core::harness::{run_episodes, OracleAgent};
use gymv_core::wrappers::{history_pairs, WrapperConfig};
use gymv_core::{AgentMap, EnvSpec, Registry, Seed, SegmentTag, StepResult};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Script = Vec<AgentMap<String>>;

/// Everything the environment decides, with presentation stripped.
#[derive(Debug, PartialEq)]
pub struct Frame {
    pub rewards: AgentMap<f64>,
    pub terminated: AgentMap<bool>,
    pub truncated: AgentMap<bool>,
    pub state_hash: u64,
    pub steps: u32,
    pub images: AgentMap<Vec<u8>>,
}

fn frame(r: &StepResult, hash: u64, steps: u32) -> Frame {
    Frame {
        rewards: r.rewards.clone(),
        terminated: r.terminated.clone(),
        truncated: r.truncated.clone(),
        state_hash: hash,
        steps,
        images: r
            .observations
            .iter()
            .map(|(a, o)| (a.clone(), o.image.pixels.clone()))
            .collect(),
    }
}

/// Random-agent actions recorded on the bare environment, replayable
/// against any wrapper stack.
pub fn record_script(reg: &Registry, env_id: &str, level: u8, seed: u64, max_len: usize) -> Script {
    let spec = reg.spec(env_id, level).unwrap();
    let mut env = reg.make(&spec, Seed(seed)).unwrap();
    env.reset().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut script = Vec::new();
    while !env.is_done() && script.len() < max_len {
        let acts: AgentMap<String> = env
            .to_move()
            .into_iter()
            .map(|a| {
                let t = env.random_action(&a, &mut rng);
                (a, t)
            })
            .collect();
        env.step(&acts).unwrap();
        script.push(acts);
    }
    script
}

pub fn replay(reg: &Registry, spec: &EnvSpec, seed: u64, script: &Script) -> Result<Vec<Frame>, String> {
    let mut env = reg.make(spec, Seed(seed)).map_err(|e| e.to_string())?;
    env.reset().map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for acts in script {
        let r = env.step(acts).map_err(|e| e.to_string())?;
        out.push(frame(&r, env.state_hash(), env.steps()));
    }
    Ok(out)
}

/// Rules, caption and history leave every decision and image unchanged.
pub fn presentation_invariance(reg: &Registry, env_id: &str, episodes: u64) -> Result<(), String> {
    let has_caption = reg
        .make_base(&reg.spec(env_id, 0).unwrap(), Seed(0))
        .unwrap()
        .caption()
        .is_some();
    for i in 0..episodes {
        let level = (i % 3) as u8;
        let seed = 7_000 + i;
        let script = record_script(reg, env_id, level, seed, 40);
        let bare = reg.spec(env_id, level).unwrap();
        let mut dressed = bare
            .clone()
            .with_wrapper(WrapperConfig::Rules { enabled: true })
            .with_wrapper(WrapperConfig::History {
                window: 3,
                include_images: i % 2 == 0,
            });
        if has_caption {
            dressed = dressed.with_wrapper(WrapperConfig::Caption);
        }
        let a = replay(reg, &bare, seed, &script)?;
        let b = replay(reg, &dressed, seed, &script)?;
        if a != b {
            return Err(format!("{env_id} seed {seed}: wrapped trajectory differs"));
        }
    }
    Ok(())
}

/// The history segment lists exactly `min(t, k - 1)` pairs after `t` steps.
pub fn history_counts(reg: &Registry, env_id: &str, k: u32, seed: u64) -> Result<(), String> {
    let script = record_script(reg, env_id, 0, seed, 12);
    let spec = reg.spec(env_id, 0).unwrap().with_wrapper(WrapperConfig::History {
        window: k,
        include_images: true,
    });
    let mut env = reg.make(&spec, Seed(seed)).map_err(|e| e.to_string())?;
    let check = |t: usize, obs: &AgentMap<gymv_core::Observation>| -> Result<(), String> {
        for (agent, o) in obs {
            // in alternating games each agent only remembers its own turns
            let own = if env_id == "tictactoe" { t / 2 } else { t };
            let want = own.min(k.saturating_sub(1) as usize);
            if history_pairs(o) != want || o.history_images.len() != want {
                return Err(format!(
                    "{env_id} k={k} t={t} {agent}: {} pairs, want {want}",
                    history_pairs(o)
                ));
            }
            if want == 0 && o.has(SegmentTag::History) {
                return Err(format!("{env_id} k={k}: empty history segment present"));
            }
        }
        Ok(())
    };
    let obs = env.reset().map_err(|e| e.to_string())?;
    check(0, &obs)?;
    for (t, acts) in script.iter().enumerate() {
        let r = env.step(acts).map_err(|e| e.to_string())?;
        if !env.is_done() {
            check(t + 1, &r.observations)?;
        }
    }
    Ok(())
}

/// Three tool calls before every real action: the step counter and the
/// trajectory match the tool-free run, and a fourth call is refused.
pub fn tool_neutrality(reg: &Registry, env_id: &str, seed: u64) -> Result<(), String> {
    let script = record_script(reg, env_id, 1, seed, 20);
    let bare = reg.spec(env_id, 1).unwrap();
    let tooled = bare.clone().with_wrapper(WrapperConfig::Tool {
        name: "arithmetic".into(),
        budget: 3,
    });
    let want = replay(reg, &bare, seed, &script)?;
    let mut env = reg.make(&tooled, Seed(seed)).map_err(|e| e.to_string())?;
    env.reset().map_err(|e| e.to_string())?;
    let mut got = Vec::new();
    for (t, acts) in script.iter().enumerate() {
        let before = (env.steps(), env.state_hash());
        for call in 0..4 {
            let tool: AgentMap<String> = acts
                .keys()
                .map(|a| (a.clone(), format!("TOOL: {call} + 2 * 3")))
                .collect();
            let r = env.step(&tool).map_err(|e| e.to_string())?;
            if (env.steps(), env.state_hash()) != before {
                return Err(format!("{env_id} step {t}: tool call advanced the env"));
            }
            let text = r
                .observations
                .values()
                .next()
                .and_then(|o| o.segment(SegmentTag::ToolResult))
                .unwrap_or("");
            let ok = if call < 3 {
                text == (call + 6).to_string()
            } else {
                text.contains("budget")
            };
            if !ok || r.rewards.values().any(|&x| x != 0.0) || r.all_done() {
                return Err(format!(
                    "{env_id} step {t} call {call}: unexpected tool result `{text}`"
                ));
            }
        }
        let r = env.step(acts).map_err(|e| e.to_string())?;
        got.push(frame(&r, env.state_hash(), env.steps()));
    }
    if got != want {
        return Err(format!("{env_id} seed {seed}: tool calls changed the trajectory"));
    }
    Ok(())
}

/// Two oracle runs over the same seeds give identical batches.
pub fn determinism(reg: &Registry, env_id: &str, seeds: &[u64]) -> Result<(), String> {
    for level in 0..3 {
        let spec = reg.spec(env_id, level).unwrap();
        let a = run_episodes(reg, &mut OracleAgent, &spec, seeds, 1).map_err(|e| e.to_string())?;
        let b = run_episodes(reg, &mut OracleAgent, &spec, seeds, 1).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("{env_id} level {level}: batches differ"));
        }
    }
    Ok(())
}
