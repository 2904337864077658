use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown environment `{0}`")]
    UnknownEnv(String),
    #[error("environment `{0}` is already registered")]
    DuplicateEnv(String),
    #[error("unknown difficulty level {level} for `{env_id}` (levels are 0, 1, 2)")]
    UnknownDifficulty { env_id: String, level: u8 },
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("wrapper configuration error: {0}")]
    Config(String),
    #[error("episode is already done")]
    StepAfterDone,
    #[error("missing action for agent `{0}`")]
    MissingAction(String),
    #[error("action from agent `{0}`, which is not expected to act")]
    OffTurn(String),
    #[error("generator for `{env_id}` gave up after {attempts} attempts")]
    Generation { env_id: String, attempts: u32 },
    #[error("{0}")]
    Metric(String),
}
