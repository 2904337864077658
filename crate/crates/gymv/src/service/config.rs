use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub host: String,
    pub port: u16,
    /// Largest reward batch dispatched at once.
    pub max_batch: usize,
    /// How long the first request of a batch waits for company.
    pub linger_ms: u64,
    pub session_timeout_s: u64,
    pub reap_interval_s: u64,
    /// Scorer ids to load.
    pub scorers: Vec<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            host: "127.0.0.1".into(),
            port: 8080,
            max_batch: 32,
            linger_ms: 20,
            session_timeout_s: 600,
            reap_interval_s: 30,
            scorers: vec!["grid_match".into(), "pixel_match".into()],
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("reading config: {0}")]
    Io(#[from] std::io::Error),
    #[error("parsing config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{key}: {message}")]
    Env { key: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    v.trim().parse().map_err(|e: T::Err| ConfigError::Env {
        key: key.into(),
        message: e.to_string(),
    })
}

impl ServiceConfig {
    /// The file (if any), then `GYMV_*` variables from the process
    /// environment.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let base = match path {
            Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
            None => ServiceConfig::default(),
        };
        base.with_env(std::env::vars())
    }

    pub fn with_env(mut self, vars: impl IntoIterator<Item = (String, String)>) -> Result<Self, ConfigError> {
        for (k, v) in vars {
            match k.as_str() {
                "GYMV_HOST" => self.host = v,
                "GYMV_PORT" => self.port = parse(&k, &v)?,
                "GYMV_MAX_BATCH" => self.max_batch = parse(&k, &v)?,
                "GYMV_LINGER_MS" => self.linger_ms = parse(&k, &v)?,
                "GYMV_SESSION_TIMEOUT_S" => self.session_timeout_s = parse(&k, &v)?,
                "GYMV_REAP_INTERVAL_S" => self.reap_interval_s = parse(&k, &v)?,
                "GYMV_SCORERS" => {
                    self.scorers = v
                        .split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect()
                }
                _ => {}
            }
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_batch == 0 {
            return Err(ConfigError::Invalid("max_batch must be positive".into()));
        }
        if self.session_timeout_s == 0 || self.reap_interval_s == 0 {
            return Err(ConfigError::Invalid("timeouts must be positive".into()));
        }
        Ok(())
    }
}
