//! Blocking HTTP client for the session and reward endpoints.

use std::time::Duration;

use gymv_core::{AgentMap, EnvSpec};
use reqwest::blocking::Client as Http;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::catalog::Manifest;
use crate::wire::{CreateSession, ErrorBody, Health, RewardRequest, RewardResponse, SessionCreated, WireStepResult};

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("HTTP {status} {code}: {message}")]
    Status { status: u16, code: String, message: String },
    #[error("transport: {0}")]
    Transport(#[from] reqwest::Error),
}

impl ClientError {
    pub fn status(&self) -> Option<u16> {
        match self {
            ClientError::Status { status, .. } => Some(*status),
            ClientError::Transport(_) => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Client {
    base: String,
    http: Http,
}

impl Client {
    pub fn new(base_url: &str) -> Result<Self, ClientError> {
        let http = Http::builder().timeout(Duration::from_secs(60)).build()?;
        Ok(Client {
            base: base_url.trim_end_matches('/').to_string(),
            http,
        })
    }

    fn finish<T: DeserializeOwned>(resp: reqwest::blocking::Response) -> Result<T, ClientError> {
        let status = resp.status();
        if status.is_success() {
            return Ok(resp.json()?);
        }
        let body = resp.text()?;
        let err: ErrorBody = serde_json::from_str(&body).unwrap_or(ErrorBody {
            code: "unknown".into(),
            message: body,
        });
        Err(ClientError::Status {
            status: status.as_u16(),
            code: err.code,
            message: err.message,
        })
    }

    fn post<B: Serialize, T: DeserializeOwned>(&self, path: &str, body: &B) -> Result<T, ClientError> {
        Self::finish(self.http.post(format!("{}{path}", self.base)).json(body).send()?)
    }

    fn get<T: DeserializeOwned>(&self, path: &str) -> Result<T, ClientError> {
        Self::finish(self.http.get(format!("{}{path}", self.base)).send()?)
    }

    pub fn create(&self, spec: &EnvSpec, seed: u64) -> Result<SessionCreated, ClientError> {
        self.post(
            "/v1/envs",
            &CreateSession {
                spec: spec.clone(),
                seed,
            },
        )
    }

    pub fn step(&self, session: &str, actions: &AgentMap<String>) -> Result<WireStepResult, ClientError> {
        self.post(&format!("/v1/envs/{session}/step"), actions)
    }

    pub fn close(&self, session: &str) -> Result<(), ClientError> {
        let resp = self.http.delete(format!("{}/v1/envs/{session}", self.base)).send()?;
        if resp.status().is_success() {
            return Ok(());
        }
        Self::finish::<serde_json::Value>(resp).map(|_| ())
    }

    pub fn score(&self, req: &RewardRequest) -> Result<RewardResponse, ClientError> {
        self.post("/v1/generate", req)
    }

    pub fn health(&self) -> Result<Health, ClientError> {
        self.get("/v1/health")
    }

    pub fn catalog(&self) -> Result<Manifest, ClientError> {
        self.get("/v1/catalog")
    }
}
