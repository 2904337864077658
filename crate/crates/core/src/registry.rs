//! Environment registry and catalog metadata.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::env::{BaseEnv, Game};
use crate::error::Error;
use crate::grammar::Grammar;
use crate::protocol::{Category, DifficultyTable, EnvSpec, Mode, Params, Seed};
use crate::wrappers::EnvInstance;
use crate::Result;

/// Catalog entry: everything the catalog reports about an environment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvInfo {
    pub env_id: String,
    pub category: Category,
    pub mode: Mode,
    pub difficulty: DifficultyTable,
    pub rules: String,
    /// Accepted action (multi-turn) or answer (single-turn) syntax.
    pub action_grammar: String,
    /// Command grammar used by the action-parser wrapper; `None` for
    /// single-turn tasks, whose verifiers extract answers themselves.
    pub grammar: Option<Grammar>,
    pub caption_format: String,
    pub agents: Vec<String>,
}

pub trait EnvFactory: Send + Sync {
    fn info(&self) -> EnvInfo;

    /// Builds the initial state from resolved parameters. Must be a pure
    /// function of `(params, seed)`.
    fn build(&self, params: &Params, seed: Seed) -> Result<Box<dyn Game>>;
}

#[derive(Clone, Default)]
pub struct Registry {
    entries: BTreeMap<String, Arc<dyn EnvFactory>>,
}

impl core::fmt::Debug for Registry {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    /// Registry holding every shipped environment.
    pub fn builtin() -> Self {
        let mut r = Registry::new();
        crate::single::register_all(&mut r);
        crate::multi::register_all(&mut r);
        r
    }

    pub fn register_env(&mut self, env_id: &str, factory: Arc<dyn EnvFactory>) -> Result<()> {
        if self.entries.contains_key(env_id) {
            return Err(Error::DuplicateEnv(env_id.to_string()));
        }
        let info = factory.info();
        if info.env_id != env_id {
            return Err(Error::InvalidSpec(format!(
                "factory describes `{}`, registered as `{env_id}`",
                info.env_id
            )));
        }
        if !info.difficulty.is_monotone() {
            return Err(Error::InvalidSpec(format!(
                "`{env_id}` has a non-monotone difficulty table"
            )));
        }
        self.entries.insert(env_id.to_string(), factory);
        Ok(())
    }

    pub fn catalog(&self) -> Vec<EnvInfo> {
        self.entries.values().map(|f| f.info()).collect()
    }

    pub fn ids(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn info(&self, env_id: &str) -> Result<EnvInfo> {
        self.factory(env_id).map(|f| f.info())
    }

    fn factory(&self, env_id: &str) -> Result<&Arc<dyn EnvFactory>> {
        self.entries
            .get(env_id)
            .ok_or_else(|| Error::UnknownEnv(env_id.to_string()))
    }

    /// Spec for `env_id` at `level` with category and mode filled in.
    pub fn spec(&self, env_id: &str, level: u8) -> Result<EnvSpec> {
        let info = self.info(env_id)?;
        let mut spec = EnvSpec::new(env_id).with_difficulty(level);
        spec.category = Some(info.category);
        spec.mode = Some(info.mode);
        Ok(spec)
    }

    /// Level parameters merged with the spec's overrides.
    pub fn resolve_params(&self, spec: &EnvSpec) -> Result<Params> {
        let info = self.info(&spec.env_id)?;
        if spec.category.is_some_and(|c| c != info.category) || spec.mode.is_some_and(|m| m != info.mode) {
            return Err(Error::InvalidSpec(format!(
                "category/mode do not match the catalog entry for `{}`",
                spec.env_id
            )));
        }
        let mut params = info
            .difficulty
            .level(spec.difficulty)
            .cloned()
            .ok_or_else(|| Error::UnknownDifficulty {
                env_id: spec.env_id.clone(),
                level: spec.difficulty,
            })?;
        for (k, v) in &spec.param_overrides {
            if !params.contains_key(k) {
                return Err(Error::InvalidSpec(format!(
                    "unknown parameter `{k}` for `{}`",
                    spec.env_id
                )));
            }
            params.insert(k.clone(), *v);
        }
        Ok(params)
    }

    pub fn make_base(&self, spec: &EnvSpec, seed: Seed) -> Result<BaseEnv> {
        let params = self.resolve_params(spec)?;
        let factory = self.factory(&spec.env_id)?.clone();
        if spec.max_steps == Some(0) {
            return Err(Error::InvalidSpec("max_steps must be positive".into()));
        }
        BaseEnv::new(factory, params, seed, spec.max_steps)
    }

    /// Builds a wrapped, reset-ready instance.
    pub fn make(&self, spec: &EnvSpec, seed: Seed) -> Result<EnvInstance> {
        EnvInstance::new(self.make_base(spec, seed)?, spec.wrappers.clone())
    }
}
