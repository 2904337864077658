//! JSON shapes shared by the HTTP service, its clients and episode files.

use std::collections::BTreeMap;

use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use gymv_core::{AgentMap, EnvSpec, Info, Observation, RasterImage, Segment, StepResult};
use serde::{Deserialize, Serialize};

use crate::png::{self, PngError};

pub fn b64_png(img: &RasterImage) -> Result<String, PngError> {
    Ok(B64.encode(png::encode(img)?))
}

pub fn decode_b64(text: &str) -> Result<Vec<u8>, base64::DecodeError> {
    B64.decode(text.trim())
}

pub fn encode_b64(bytes: &[u8]) -> String {
    B64.encode(bytes)
}

/// An observation with its images as base64 PNG.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireObservation {
    pub image: String,
    pub segments: Vec<Segment>,
    /// Assembled text prompt, for clients that do not handle segments.
    pub prompt: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub history_images: Vec<String>,
}

impl WireObservation {
    pub fn from_obs(o: &Observation) -> Result<Self, PngError> {
        Ok(WireObservation {
            image: b64_png(&o.image)?,
            segments: o.segments.clone(),
            prompt: o.prompt(),
            history_images: o.history_images.iter().map(b64_png).collect::<Result<_, _>>()?,
        })
    }

    pub fn to_obs(&self) -> Result<Observation, WireError> {
        let image = |s: &str| -> Result<RasterImage, WireError> { Ok(png::decode(&decode_b64(s)?)?) };
        Ok(Observation {
            image: image(&self.image)?,
            segments: self.segments.clone(),
            history_images: self.history_images.iter().map(|s| image(s)).collect::<Result<_, _>>()?,
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum WireError {
    #[error(transparent)]
    Png(#[from] PngError),
    #[error("base64: {0}")]
    Base64(#[from] base64::DecodeError),
    #[error("{0}")]
    Other(String),
}

pub fn wire_observations(obs: &AgentMap<Observation>) -> Result<BTreeMap<String, WireObservation>, PngError> {
    obs.iter()
        .map(|(a, o)| Ok((a.clone(), WireObservation::from_obs(o)?)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireStepResult {
    pub observations: BTreeMap<String, WireObservation>,
    pub rewards: AgentMap<f64>,
    pub terminated: AgentMap<bool>,
    pub truncated: AgentMap<bool>,
    pub info: AgentMap<Info>,
    /// Every reported agent is terminated or truncated.
    pub all_done: bool,
}

impl WireStepResult {
    pub fn from_result(r: &StepResult) -> Result<Self, PngError> {
        Ok(WireStepResult {
            observations: wire_observations(&r.observations)?,
            rewards: r.rewards.clone(),
            terminated: r.terminated.clone(),
            truncated: r.truncated.clone(),
            info: r.info.clone(),
            all_done: r.all_done(),
        })
    }

    pub fn to_result(&self) -> Result<StepResult, WireError> {
        Ok(StepResult {
            observations: self
                .observations
                .iter()
                .map(|(a, o)| Ok((a.clone(), o.to_obs()?)))
                .collect::<Result<_, WireError>>()?,
            rewards: self.rewards.clone(),
            terminated: self.terminated.clone(),
            truncated: self.truncated.clone(),
            info: self.info.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreateSession {
    pub spec: EnvSpec,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionCreated {
    pub session_id: String,
    pub observations: BTreeMap<String, WireObservation>,
    /// Agents expected to act next.
    pub to_move: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultimodalOutputs {
    /// Base64 PNG.
    pub image: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardRequest {
    /// Scorer id.
    pub model: String,
    #[serde(default)]
    pub prompt: String,
    pub multimodal_outputs: MultimodalOutputs,
    #[serde(default)]
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardResponse {
    pub score: f64,
    pub detail: String,
    pub scorer_version: String,
    pub batch_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub sessions: usize,
    pub scorers: Vec<String>,
    pub envs: usize,
}
