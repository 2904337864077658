//! Composable interventions at the agent/environment boundary.
//!
//! Presentation wrappers (rules, caption, history) only add text to
//! observations. The action parser rewrites free text into a canonical
//! command before the environment sees it, and tools answer `TOOL: <expr>`
//! actions without advancing the environment. None of them touch hidden
//! state.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::env::{BaseEnv, Rendered};
use crate::error::Error;
use crate::grammar::Grammar;
use crate::protocol::{AgentMap, Info, Observation, SegmentTag, StepResult};
use crate::render::RasterImage;
use crate::Result;

pub const DEFAULT_TOOL_BUDGET: u32 = 3;

fn default_budget() -> u32 {
    DEFAULT_TOOL_BUDGET
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WrapperConfig {
    Rules {
        enabled: bool,
    },
    Caption,
    /// `recent-k` window: the last `k - 1` observation/action pairs.
    /// `window = 0` is memoryless.
    History {
        window: u32,
        #[serde(default, skip_serializing_if = "core::ops::Not::not")]
        include_images: bool,
    },
    ActionParser,
    Tool {
        name: String,
        #[serde(default = "default_budget")]
        budget: u32,
    },
}

impl WrapperConfig {
    fn kind(&self) -> &'static str {
        match self {
            WrapperConfig::Rules { .. } => "rules",
            WrapperConfig::Caption => "caption",
            WrapperConfig::History { .. } => "history",
            WrapperConfig::ActionParser => "action_parser",
            WrapperConfig::Tool { .. } => "tool",
        }
    }
}

/// One remembered step: what the agent saw (as text) and what it did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistoryEntry {
    pub step: u32,
    pub summary: String,
    pub action: String,
    pub image: Option<RasterImage>,
}

pub fn wrap_rules(mut obs: Observation, enabled: bool, rules_text: &str) -> Observation {
    if enabled {
        obs.put(SegmentTag::Rules, rules_text);
    } else {
        obs.remove(SegmentTag::Rules);
    }
    obs
}

pub fn wrap_caption(mut obs: Observation, caption: &str) -> Observation {
    obs.put(SegmentTag::Caption, caption);
    obs
}

/// Number of pairs a `recent-k` window shows after `t` steps.
pub fn history_len(t: usize, window: u32) -> usize {
    t.min(window.saturating_sub(1) as usize)
}

pub fn wrap_history(mut obs: Observation, past: &[HistoryEntry], window: u32, include_images: bool) -> Observation {
    let n = history_len(past.len(), window);
    obs.remove(SegmentTag::History);
    obs.history_images.clear();
    if n == 0 {
        return obs;
    }
    let recent = &past[past.len() - n..];
    let mut text = String::from("Recent history (oldest first):");
    for e in recent {
        let summary = e.summary.replace('\n', " / ");
        text.push_str(&format!(
            "\n- step {}: observed [{}] -> action: {}",
            e.step, summary, e.action
        ));
    }
    obs.put(SegmentTag::History, text);
    if include_images {
        obs.history_images = recent.iter().filter_map(|e| e.image.clone()).collect();
    }
    obs
}

/// Counts the pairs listed in a History segment.
pub fn history_pairs(obs: &Observation) -> usize {
    obs.segment(SegmentTag::History)
        .map_or(0, |t| t.lines().filter(|l| l.starts_with("- step ")).count())
}

pub trait Tool: Send + Sync {
    fn name(&self) -> &str;
    fn call(&self, input: &str) -> core::result::Result<String, String>;
}

/// Evaluates `+ - * /` expressions with parentheses over decimal numbers.
#[derive(Debug, Default, Clone, Copy)]
pub struct ArithmeticTool;

impl Tool for ArithmeticTool {
    fn name(&self) -> &str {
        "arithmetic"
    }

    fn call(&self, input: &str) -> core::result::Result<String, String> {
        let v = arith::eval(input)?;
        Ok(arith::format_number(v))
    }
}

mod arith {
    use alloc::format;
    use alloc::string::{String, ToString};
    use alloc::vec::Vec;

    struct Parser {
        chars: Vec<char>,
        pos: usize,
    }

    pub fn eval(src: &str) -> Result<f64, String> {
        let mut p = Parser {
            chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        };
        if p.chars.is_empty() {
            return Err("empty expression".into());
        }
        let v = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(format!("unexpected `{}`", p.chars[p.pos]));
        }
        if !v.is_finite() {
            return Err("result is not finite".into());
        }
        Ok(v)
    }

    pub fn format_number(v: f64) -> String {
        if v == libm::trunc(v) && v.abs() < 1e15 {
            format!("{}", v as i64)
        } else {
            v.to_string()
        }
    }

    impl Parser {
        fn peek(&self) -> Option<char> {
            self.chars.get(self.pos).copied()
        }

        fn expr(&mut self) -> Result<f64, String> {
            let mut v = self.term()?;
            while let Some(op @ ('+' | '-')) = self.peek() {
                self.pos += 1;
                let rhs = self.term()?;
                v = if op == '+' { v + rhs } else { v - rhs };
            }
            Ok(v)
        }

        fn term(&mut self) -> Result<f64, String> {
            let mut v = self.factor()?;
            while let Some(op @ ('*' | '/')) = self.peek() {
                self.pos += 1;
                let rhs = self.factor()?;
                if op == '/' && rhs == 0.0 {
                    return Err("division by zero".into());
                }
                v = if op == '*' { v * rhs } else { v / rhs };
            }
            Ok(v)
        }

        fn factor(&mut self) -> Result<f64, String> {
            match self.peek() {
                Some('-') => {
                    self.pos += 1;
                    Ok(-self.factor()?)
                }
                Some('+') => {
                    self.pos += 1;
                    self.factor()
                }
                Some('(') => {
                    self.pos += 1;
                    let v = self.expr()?;
                    if self.peek() != Some(')') {
                        return Err("missing `)`".into());
                    }
                    self.pos += 1;
                    Ok(v)
                }
                Some(c) if c.is_ascii_digit() || c == '.' => {
                    let start = self.pos;
                    while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
                        self.pos += 1;
                    }
                    let s: String = self.chars[start..self.pos].iter().collect();
                    s.parse::<f64>().map_err(|_| format!("bad number `{s}`"))
                }
                Some(c) => Err(format!("unexpected `{c}`")),
                None => Err("unexpected end of expression".into()),
            }
        }
    }
}

/// Text after a `TOOL:` prefix, if `action` is a tool invocation.
pub fn tool_invocation(action: &str) -> Option<&str> {
    let t = action.trim();
    let head = t.get(..5)?;
    head.eq_ignore_ascii_case("tool:").then(|| t[5..].trim())
}

fn builtin_tool(name: &str) -> Option<Box<dyn Tool>> {
    match name {
        "arithmetic" => Some(Box::new(ArithmeticTool)),
        _ => None,
    }
}

/// An environment with its wrapper stack applied.
pub struct EnvInstance {
    base: BaseEnv,
    wrappers: Vec<WrapperConfig>,
    tools: Vec<Box<dyn Tool>>,
    history: AgentMap<Vec<HistoryEntry>>,
    tool_calls: u32,
}

impl core::fmt::Debug for EnvInstance {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("EnvInstance")
            .field("base", &self.base)
            .field("wrappers", &self.wrappers)
            .finish()
    }
}

impl EnvInstance {
    pub fn new(base: BaseEnv, wrappers: Vec<WrapperConfig>) -> Result<Self> {
        Self::with_tools(base, wrappers, Vec::new())
    }

    /// Like [`EnvInstance::new`], with extra tools available to `Tool` wrappers.
    pub fn with_tools(base: BaseEnv, wrappers: Vec<WrapperConfig>, mut tools: Vec<Box<dyn Tool>>) -> Result<Self> {
        for (i, w) in wrappers.iter().enumerate() {
            if wrappers[..i].iter().any(|o| o.kind() == w.kind()) {
                return Err(Error::Config(format!("duplicate `{}` wrapper", w.kind())));
            }
            match w {
                WrapperConfig::Caption if base.caption().is_none() => {
                    return Err(Error::Config(format!("`{}` has no captioner", base.info().env_id)));
                }
                WrapperConfig::Tool { name, .. } if !tools.iter().any(|t| t.name() == name) => {
                    let tool = builtin_tool(name).ok_or_else(|| Error::Config(format!("unknown tool `{name}`")))?;
                    tools.push(tool);
                }
                _ => {}
            }
        }
        Ok(EnvInstance {
            base,
            wrappers,
            tools,
            history: AgentMap::new(),
            tool_calls: 0,
        })
    }

    pub fn base(&self) -> &BaseEnv {
        &self.base
    }

    pub fn wrappers(&self) -> &[WrapperConfig] {
        &self.wrappers
    }

    pub fn steps(&self) -> u32 {
        self.base.steps()
    }

    pub fn is_done(&self) -> bool {
        self.base.is_done()
    }

    pub fn to_move(&self) -> Vec<String> {
        self.base.to_move()
    }

    pub fn render(&self) -> Rendered {
        self.base.render()
    }

    pub fn state_hash(&self) -> u64 {
        self.base.state_hash()
    }

    pub fn oracle_action(&self, agent: &str) -> String {
        self.base.game().oracle_action(agent)
    }

    pub fn random_action(&self, agent: &str, rng: &mut dyn rand::RngCore) -> String {
        self.base.game().random_action(agent, rng)
    }

    pub fn reset(&mut self) -> Result<AgentMap<Observation>> {
        let obs = self.base.reset()?;
        self.history.clear();
        self.tool_calls = 0;
        Ok(self.decorate_all(obs))
    }

    /// Current observations for the agents due to act, decorated.
    pub fn observations(&self) -> AgentMap<Observation> {
        self.decorate_all(self.base.current_observations())
    }

    fn decorate_all(&self, obs: AgentMap<Observation>) -> AgentMap<Observation> {
        let caption = self.base.caption();
        obs.into_iter()
            .map(|(agent, o)| {
                let o = self.decorate(&agent, o, caption.as_deref());
                (agent, o)
            })
            .collect()
    }

    fn decorate(&self, agent: &str, mut obs: Observation, caption: Option<&str>) -> Observation {
        for w in &self.wrappers {
            obs = match w {
                WrapperConfig::Rules { enabled } => wrap_rules(obs, *enabled, &self.base.info().rules),
                WrapperConfig::Caption => wrap_caption(obs, caption.unwrap_or_default()),
                WrapperConfig::History { window, include_images } => {
                    let past = self.history.get(agent).map_or(&[][..], |v| v.as_slice());
                    wrap_history(obs, past, *window, *include_images)
                }
                WrapperConfig::ActionParser | WrapperConfig::Tool { .. } => obs,
            };
        }
        obs
    }

    fn tool_config(&self) -> Option<(&str, u32)> {
        self.wrappers.iter().find_map(|w| match w {
            WrapperConfig::Tool { name, budget } => Some((name.as_str(), *budget)),
            _ => None,
        })
    }

    fn parser(&self) -> Option<Grammar> {
        self.wrappers
            .iter()
            .any(|w| matches!(w, WrapperConfig::ActionParser))
            .then_some(self.base.info().grammar)
            .flatten()
    }

    pub fn step(&mut self, actions: &AgentMap<String>) -> Result<StepResult> {
        if self.base.is_done() {
            return Err(Error::StepAfterDone);
        }
        if let Some((name, budget)) = self.tool_config() {
            if !actions.is_empty() && actions.values().all(|a| tool_invocation(a).is_some()) {
                let name = name.to_string();
                return self.tool_step(actions, &name, budget);
            }
        }

        let parser = self.parser();
        let mut parsed = AgentMap::new();
        let mut raw: AgentMap<String> = AgentMap::new();
        for (agent, text) in actions {
            let canonical = match parser {
                Some(g) => match g.extract_last(text) {
                    Some(cmd) => cmd.canonical(),
                    None => text.clone(),
                },
                None => text.clone(),
            };
            if canonical != *text {
                raw.insert(agent.clone(), text.clone());
            }
            parsed.insert(agent.clone(), canonical);
        }

        let summary = self.base.caption().unwrap_or_default();
        let keep_images = self.wrappers.iter().any(|w| {
            matches!(
                w,
                WrapperConfig::History {
                    include_images: true,
                    ..
                }
            )
        });
        let image = keep_images.then(|| self.base.render().image);
        let step_before = self.base.steps();

        let mut result = self.base.step(&parsed)?;
        self.tool_calls = 0;

        for (agent, action) in &parsed {
            self.history.entry(agent.clone()).or_default().push(HistoryEntry {
                step: step_before,
                summary: summary.clone(),
                action: action.clone(),
                image: image.clone(),
            });
        }
        for (agent, info) in result.info.iter_mut() {
            if let Some(r) = raw.get(agent) {
                info.insert("raw_action".into(), Value::from(r.as_str()));
            }
        }
        let caption = self.base.caption();
        let observations = core::mem::take(&mut result.observations);
        result.observations = observations
            .into_iter()
            .map(|(agent, o)| {
                let o = self.decorate(&agent, o, caption.as_deref());
                (agent, o)
            })
            .collect();
        Ok(result)
    }

    fn tool_step(&mut self, actions: &AgentMap<String>, name: &str, budget: u32) -> Result<StepResult> {
        let movers = self.base.to_move();
        if let Some(missing) = movers.iter().find(|a| !actions.contains_key(*a)) {
            return Err(Error::MissingAction(missing.clone()));
        }
        if let Some(extra) = actions.keys().find(|a| !movers.contains(a)) {
            return Err(Error::OffTurn(extra.clone()));
        }
        let current = self.observations();
        let mut result = StepResult::default();
        for (agent, action) in actions {
            self.tool_calls += 1;
            let text = if self.tool_calls > budget {
                format!("error: tool budget of {budget} calls per step exhausted")
            } else {
                let expr = tool_invocation(action).unwrap_or_default();
                match self.tools.iter().find(|t| t.name() == name) {
                    Some(tool) => match tool.call(expr) {
                        Ok(out) => out,
                        Err(e) => format!("error: {e}"),
                    },
                    None => format!("error: unknown tool `{name}`"),
                }
            };
            let mut obs = current
                .get(agent)
                .cloned()
                .unwrap_or_else(|| Observation::new(self.base.render().image));
            obs.put(SegmentTag::ToolResult, text);
            let mut info = Info::new();
            info.insert("tool_call".into(), Value::from(true));
            info.insert("tool".into(), Value::from(name));
            info.insert("step".into(), Value::from(self.base.steps()));
            result.observations.insert(agent.clone(), obs);
            result.rewards.insert(agent.clone(), 0.0);
            result.terminated.insert(agent.clone(), false);
            result.truncated.insert(agent.clone(), false);
            result.info.insert(agent.clone(), info);
        }
        Ok(result)
    }
}
