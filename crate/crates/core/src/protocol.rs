//! Data types shared by every environment: specs, observations, agent maps,
//! step results and episode records.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::render::RasterImage;
use crate::rng::{stream_rng, Stream, StreamRng};
use crate::wrappers::WrapperConfig;

/// Agent id used by every single-agent environment.
pub const SOLO_AGENT: &str = "agent_0";

/// Per-agent values keyed by agent id. Ordered so that serialization is stable.
pub type AgentMap<T> = BTreeMap<String, T>;

/// Free-form step metadata.
pub type Info = serde_json::Map<String, serde_json::Value>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    pub fn dynamics(self) -> StreamRng {
        stream_rng(self.0, Stream::Dynamics, 0)
    }

    pub fn render(self) -> StreamRng {
        stream_rng(self.0, Stream::Render, 0)
    }

    /// Agent-side randomness; `rollout` separates repeated runs on one instance.
    pub fn agent(self, rollout: u32) -> StreamRng {
        stream_rng(self.0, Stream::Agent, u64::from(rollout))
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    Algorithmic,
    Cognition,
    Geometry,
    Graphs,
    Logic,
    Puzzles,
    Games,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::Algorithmic,
        Category::Cognition,
        Category::Geometry,
        Category::Graphs,
        Category::Logic,
        Category::Puzzles,
        Category::Games,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Mode {
    SingleTurn,
    MultiTurn,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
}

impl ParamValue {
    pub fn as_f64(self) -> f64 {
        match self {
            ParamValue::Int(v) => v as f64,
            ParamValue::Float(v) => v,
        }
    }

    /// Integer view; floats are truncated toward zero.
    pub fn as_i64(self) -> i64 {
        match self {
            ParamValue::Int(v) => v,
            ParamValue::Float(v) => v as i64,
        }
    }
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Float(v)
    }
}

pub type Params = BTreeMap<String, ParamValue>;

/// Typed lookups over a resolved parameter set. Missing keys are a bug in a
/// difficulty table, so they fall back to the provided default.
pub trait ParamsExt {
    fn int(&self, key: &str, default: i64) -> i64;
    fn float(&self, key: &str, default: f64) -> f64;
}

impl ParamsExt for Params {
    fn int(&self, key: &str, default: i64) -> i64 {
        self.get(key).map_or(default, |v| v.as_i64())
    }

    fn float(&self, key: &str, default: f64) -> f64 {
        self.get(key).map_or(default, |v| v.as_f64())
    }
}

/// Generation parameters for difficulty levels 0, 1 and 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifficultyTable {
    pub levels: BTreeMap<u8, Params>,
    /// Parameters that drive complexity; each must be non-decreasing in level.
    pub knobs: Vec<String>,
}

impl DifficultyTable {
    pub const LEVELS: [u8; 3] = [0, 1, 2];

    pub fn new(knobs: &[&str], rows: [&[(&str, ParamValue)]; 3]) -> Self {
        let levels = rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let params = row.iter().map(|(k, v)| (k.to_string(), *v)).collect();
                (i as u8, params)
            })
            .collect();
        DifficultyTable {
            levels,
            knobs: knobs.iter().map(|k| k.to_string()).collect(),
        }
    }

    pub fn level(&self, level: u8) -> Option<&Params> {
        self.levels.get(&level)
    }

    /// Checks that level 0 exists and that every knob is non-decreasing.
    pub fn is_monotone(&self) -> bool {
        if !self.levels.contains_key(&0) {
            return false;
        }
        self.knobs.iter().all(|knob| {
            let values: Vec<f64> = self
                .levels
                .values()
                .filter_map(|p| p.get(knob).map(|v| v.as_f64()))
                .collect();
            values.len() == self.levels.len() && values.windows(2).all(|w| w[0] <= w[1])
        })
    }
}

/// One environment configuration. Round-trips losslessly through JSON so
/// that any experiment can be replayed from its spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvSpec {
    pub env_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<Category>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub difficulty: u8,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub param_overrides: Params,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub wrappers: Vec<WrapperConfig>,
    /// Overrides the default step budget (200 multi-turn, 1 single-turn).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<u32>,
}

impl EnvSpec {
    pub fn new(env_id: impl Into<String>) -> Self {
        EnvSpec {
            env_id: env_id.into(),
            category: None,
            mode: None,
            difficulty: 0,
            param_overrides: Params::new(),
            wrappers: Vec::new(),
            max_steps: None,
        }
    }

    pub fn with_difficulty(mut self, level: u8) -> Self {
        self.difficulty = level;
        self
    }

    pub fn with_wrapper(mut self, wrapper: WrapperConfig) -> Self {
        self.wrappers.push(wrapper);
        self
    }

    pub fn with_override(mut self, key: &str, value: ParamValue) -> Self {
        self.param_overrides.insert(key.to_string(), value);
        self
    }

    pub fn with_max_steps(mut self, steps: u32) -> Self {
        self.max_steps = Some(steps);
        self
    }
}

/// Segment tags. The declaration order is the prompt assembly order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SegmentTag {
    Rules,
    Question,
    History,
    Caption,
    ToolResult,
    Feedback,
}

impl SegmentTag {
    /// Tags that may appear more than once in one observation.
    pub fn repeatable(self) -> bool {
        matches!(self, SegmentTag::Feedback | SegmentTag::ToolResult)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    pub tag: SegmentTag,
    pub text: String,
}

/// What one agent sees at one step: an image plus tagged text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub image: RasterImage,
    pub segments: Vec<Segment>,
    /// Past images, only filled by a history wrapper configured to keep them.
    pub history_images: Vec<RasterImage>,
}

impl Observation {
    pub fn new(image: RasterImage) -> Self {
        Observation {
            image,
            segments: Vec::new(),
            history_images: Vec::new(),
        }
    }

    pub fn segment(&self, tag: SegmentTag) -> Option<&str> {
        self.segments.iter().find(|s| s.tag == tag).map(|s| s.text.as_str())
    }

    pub fn has(&self, tag: SegmentTag) -> bool {
        self.segments.iter().any(|s| s.tag == tag)
    }

    /// Inserts a segment, replacing an existing one with the same
    /// non-repeatable tag.
    pub fn put(&mut self, tag: SegmentTag, text: impl Into<String>) {
        let text = text.into();
        if !tag.repeatable() {
            if let Some(seg) = self.segments.iter_mut().find(|s| s.tag == tag) {
                seg.text = text;
                return;
            }
        }
        self.segments.push(Segment { tag, text });
    }

    pub fn remove(&mut self, tag: SegmentTag) {
        self.segments.retain(|s| s.tag != tag);
    }

    /// Text prompt in the fixed order Rules, Question, History, Caption,
    /// ToolResult, Feedback.
    pub fn prompt(&self) -> String {
        let mut segs: Vec<&Segment> = self.segments.iter().collect();
        segs.sort_by_key(|s| s.tag);
        let mut out = String::new();
        for s in segs {
            if !out.is_empty() {
                out.push_str("\n\n");
            }
            out.push_str(&s.text);
        }
        out
    }

    pub fn tags_are_valid(&self) -> bool {
        self.segments
            .iter()
            .enumerate()
            .all(|(i, s)| s.tag.repeatable() || !self.segments[i + 1..].iter().any(|o| o.tag == s.tag))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StepResult {
    pub observations: AgentMap<Observation>,
    pub rewards: AgentMap<f64>,
    pub terminated: AgentMap<bool>,
    pub truncated: AgentMap<bool>,
    pub info: AgentMap<Info>,
}

impl StepResult {
    /// True once every agent reported in this step is terminated or truncated.
    pub fn all_done(&self) -> bool {
        !self.terminated.is_empty()
            && self
                .terminated
                .iter()
                .all(|(k, t)| *t || self.truncated.get(k).copied().unwrap_or(false))
    }

    pub fn keys_consistent(&self) -> bool {
        let keys: Vec<&String> = self.observations.keys().collect();
        self.rewards.keys().eq(keys.iter().copied())
            && self.terminated.keys().eq(keys.iter().copied())
            && self.truncated.keys().eq(keys.iter().copied())
            && self.info.keys().eq(keys.iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub observations: AgentMap<Observation>,
    pub actions: AgentMap<String>,
    pub result: StepResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRecord {
    pub spec: EnvSpec,
    pub seed: Seed,
    pub rollout: u32,
    pub agent: String,
    pub transitions: Vec<Transition>,
    /// Undiscounted return per agent.
    pub returns: AgentMap<f64>,
    /// Return of the first agent; the verdict score for single-turn envs.
    pub final_score: f64,
    /// Agent-side failure (e.g. remote transport) that ended the episode early.
    pub error: Option<String>,
}

pub type EpisodeBatch = Vec<EpisodeRecord>;
