//! An agent backed by an OpenAI-style chat-completions endpoint. Each
//! observation becomes one user message with the prompt text followed by
//! the image (and any history images) as base64 data URLs.

use std::time::Duration;

use gymv_core::harness::Agent;
use gymv_core::{EnvInstance, Observation};
use serde_json::{json, Value};

use crate::wire::b64_png;

#[derive(Debug, Clone)]
pub struct RemoteConfig {
    /// Base URL; `/chat/completions` is appended.
    pub endpoint: String,
    pub model: String,
    pub api_key: Option<String>,
    pub temperature: f64,
    pub max_tokens: u32,
    pub timeout: Duration,
}

impl RemoteConfig {
    pub fn new(endpoint: &str, model: &str) -> Self {
        RemoteConfig {
            endpoint: endpoint.trim_end_matches('/').to_string(),
            model: model.to_string(),
            api_key: None,
            temperature: 0.0,
            max_tokens: 512,
            timeout: Duration::from_secs(120),
        }
    }
}

pub struct RemoteAgent {
    cfg: RemoteConfig,
    http: reqwest::blocking::Client,
}

fn data_url(img: &gymv_core::RasterImage) -> Result<String, String> {
    b64_png(img)
        .map(|b| format!("data:image/png;base64,{b}"))
        .map_err(|e| e.to_string())
}

/// Request body for one observation.
pub fn chat_body(cfg: &RemoteConfig, obs: &Observation) -> Result<Value, String> {
    let mut content = vec![json!({"type": "text", "text": obs.prompt()})];
    for img in obs.history_images.iter().chain(std::iter::once(&obs.image)) {
        content.push(json!({"type": "image_url", "image_url": {"url": data_url(img)?}}));
    }
    Ok(json!({
        "model": cfg.model,
        "messages": [{"role": "user", "content": content}],
        "temperature": cfg.temperature,
        "max_tokens": cfg.max_tokens,
    }))
}

/// Text of the first choice; content may be a string or a list of parts.
pub fn reply_text(body: &Value) -> Result<String, String> {
    let content = body
        .pointer("/choices/0/message/content")
        .ok_or_else(|| "response has no choices[0].message.content".to_string())?;
    match content {
        Value::String(s) => Ok(s.clone()),
        Value::Array(parts) => Ok(parts
            .iter()
            .filter_map(|p| p.get("text").and_then(Value::as_str))
            .collect::<Vec<_>>()
            .join("")),
        other => Err(format!("unexpected content {other}")),
    }
}

impl RemoteAgent {
    pub fn new(cfg: RemoteConfig) -> Result<Self, String> {
        let http = reqwest::blocking::Client::builder()
            .timeout(cfg.timeout)
            .build()
            .map_err(|e| e.to_string())?;
        Ok(RemoteAgent { cfg, http })
    }
}

impl Agent for RemoteAgent {
    fn name(&self) -> String {
        format!("remote:{}", self.cfg.model)
    }

    fn act(&mut self, _agent_id: &str, obs: &Observation, _env: &EnvInstance) -> Result<String, String> {
        let body = chat_body(&self.cfg, obs)?;
        let mut req = self
            .http
            .post(format!("{}/chat/completions", self.cfg.endpoint))
            .json(&body);
        if let Some(k) = &self.cfg.api_key {
            req = req.bearer_auth(k);
        }
        let resp = req.send().map_err(|e| format!("transport: {e}"))?;
        let status = resp.status();
        let text = resp.text().map_err(|e| format!("transport: {e}"))?;
        if !status.is_success() {
            return Err(format!("HTTP {status}: {text}"));
        }
        let v: Value = serde_json::from_str(&text).map_err(|e| format!("bad response body: {e}"))?;
        reply_text(&v)
    }
}
