//! HTTP exposure: environment sessions speaking reset/step, and the
//! batched reward endpoint.

mod batch;
pub mod config;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use gymv_core::{AgentMap, EnvInstance, Error as CoreError, Registry, Seed};
use rand::RngCore;
use tokio::sync::Mutex as AsyncMutex;

pub use self::batch::Batcher;
pub use self::config::{ConfigError, ServiceConfig};
use crate::catalog;
use crate::scorers::{self, Scorer};
use crate::wire::{wire_observations, CreateSession, ErrorBody, Health, RewardRequest, SessionCreated, WireStepResult};

#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
        }
    }

    pub fn bad_request(m: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", m)
    }

    pub fn bad_image(m: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, "bad_image", m)
    }

    pub fn internal(m: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", m)
    }
}

impl From<CoreError> for ApiError {
    fn from(e: CoreError) -> Self {
        let m = e.to_string();
        match e {
            CoreError::UnknownEnv(_) => Self::new(StatusCode::NOT_FOUND, "unknown_env", m),
            CoreError::UnknownDifficulty { .. } | CoreError::InvalidSpec(_) | CoreError::Config(_) => {
                Self::new(StatusCode::BAD_REQUEST, "invalid_spec", m)
            }
            CoreError::StepAfterDone => Self::new(StatusCode::CONFLICT, "step_after_done", m),
            CoreError::MissingAction(_) => Self::new(StatusCode::BAD_REQUEST, "missing_action", m),
            CoreError::OffTurn(_) => Self::new(StatusCode::BAD_REQUEST, "off_turn", m),
            CoreError::DuplicateEnv(_) | CoreError::Generation { .. } | CoreError::Metric(_) => Self::internal(m),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            code: self.code.to_string(),
            message: self.message,
        };
        (self.status, Json(body)).into_response()
    }
}

struct Session {
    env: EnvInstance,
    last_used: Instant,
}

type Sessions = Mutex<HashMap<String, Arc<AsyncMutex<Session>>>>;

pub struct AppState {
    registry: Arc<Registry>,
    scorers: HashMap<String, Arc<dyn Scorer>>,
    sessions: Sessions,
    batcher: Batcher,
    config: ServiceConfig,
}

impl AppState {
    /// Must be called inside a tokio runtime (the batcher task starts here).
    pub fn new(config: ServiceConfig, registry: Arc<Registry>) -> Result<Arc<Self>, ConfigError> {
        config.validate()?;
        let scorers = scorers::builtin(&config.scorers, registry.clone())
            .map_err(ConfigError::Invalid)?
            .into_iter()
            .map(|s| (s.name().to_string(), s))
            .collect();
        Ok(Arc::new(AppState {
            registry,
            scorers,
            sessions: Mutex::new(HashMap::new()),
            batcher: Batcher::start(config.max_batch, Duration::from_millis(config.linger_ms)),
            config,
        }))
    }

    pub fn session_count(&self) -> usize {
        self.sessions.lock().unwrap().len()
    }

    /// Drops sessions idle for longer than `timeout`. Sessions mid-step are
    /// busy, not idle.
    pub fn reap(&self, timeout: Duration) -> usize {
        let now = Instant::now();
        let mut map = self.sessions.lock().unwrap();
        let before = map.len();
        map.retain(|_, s| match s.try_lock() {
            Ok(s) => now.duration_since(s.last_used) < timeout,
            Err(_) => true,
        });
        before - map.len()
    }
}

fn json_body<T: serde::de::DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid body: {e}")))
}

fn new_session_id() -> String {
    let mut b = [0u8; 16];
    rand::thread_rng().fill_bytes(&mut b);
    b.iter().map(|x| format!("{x:02x}")).collect()
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::internal(e.to_string()))?
}

async fn create_session(State(st): State<Arc<AppState>>, body: Bytes) -> Result<Json<SessionCreated>, ApiError> {
    let req: CreateSession = json_body(&body)?;
    let registry = st.registry.clone();
    let (env, observations) = blocking(move || {
        let mut env = registry.make(&req.spec, Seed(req.seed))?;
        let obs = env.reset()?;
        let wire = wire_observations(&obs).map_err(|e| ApiError::internal(e.to_string()))?;
        Ok((env, wire))
    })
    .await?;
    let to_move = env.to_move();
    let id = new_session_id();
    let session = Session {
        env,
        last_used: Instant::now(),
    };
    st.sessions
        .lock()
        .unwrap()
        .insert(id.clone(), Arc::new(AsyncMutex::new(session)));
    Ok(Json(SessionCreated {
        session_id: id,
        observations,
        to_move,
    }))
}

fn unknown_session(id: &str) -> ApiError {
    ApiError::new(
        StatusCode::NOT_FOUND,
        "unknown_session",
        format!("no live session `{id}`"),
    )
}

async fn step_session(
    State(st): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<WireStepResult>, ApiError> {
    let actions: AgentMap<String> = json_body(&body)?;
    let session = st
        .sessions
        .lock()
        .unwrap()
        .get(&id)
        .cloned()
        .ok_or_else(|| unknown_session(&id))?;
    let mut guard = session.lock_owned().await;
    let result = blocking(move || {
        guard.last_used = Instant::now();
        let r = guard.env.step(&actions)?;
        WireStepResult::from_result(&r).map_err(|e| ApiError::internal(e.to_string()))
    })
    .await?;
    Ok(Json(result))
}

async fn delete_session(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    match st.sessions.lock().unwrap().remove(&id) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(unknown_session(&id)),
    }
}

async fn generate(State(st): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: RewardRequest = json_body(&body)?;
    let scorer = st.scorers.get(&req.model).cloned().ok_or_else(|| {
        ApiError::new(
            StatusCode::NOT_FOUND,
            "unknown_scorer",
            format!("no scorer `{}`", req.model),
        )
    })?;
    let resp = st.batcher.submit(scorer, req).await?;
    Ok(Json(resp).into_response())
}

async fn health(State(st): State<Arc<AppState>>) -> Json<Health> {
    let mut scorers: Vec<String> = st.scorers.keys().cloned().collect();
    scorers.sort();
    Json(Health {
        status: "ok".into(),
        sessions: st.session_count(),
        scorers,
        envs: st.registry.len(),
    })
}

async fn catalog_handler(State(st): State<Arc<AppState>>) -> Json<catalog::Manifest> {
    Json(catalog::manifest(&st.registry))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/v1/health", get(health))
        .route("/v1/catalog", get(catalog_handler))
        .route("/v1/envs", post(create_session))
        .route("/v1/envs/:id/step", post(step_session))
        .route("/v1/envs/:id", axum::routing::delete(delete_session))
        .route("/v1/generate", post(generate))
        .with_state(state)
}

fn spawn_reaper(state: &Arc<AppState>) {
    let weak = Arc::downgrade(state);
    let every = Duration::from_secs(state.config.reap_interval_s);
    let timeout = Duration::from_secs(state.config.session_timeout_s);
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(every);
        loop {
            tick.tick().await;
            match weak.upgrade() {
                Some(st) => {
                    st.reap(timeout);
                }
                None => break,
            }
        }
    });
}

/// Serves until `shutdown` resolves.
pub async fn serve(
    config: ServiceConfig,
    listener: tokio::net::TcpListener,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> anyhow::Result<()> {
    let state = AppState::new(config, Arc::new(Registry::builtin()))?;
    spawn_reaper(&state);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(shutdown)
        .await?;
    Ok(())
}

/// A server on its own runtime thread; stops when dropped.
pub struct ServerHandle {
    pub addr: SocketAddr,
    stop: Option<tokio::sync::oneshot::Sender<()>>,
    thread: Option<std::thread::JoinHandle<()>>,
}

impl ServerHandle {
    pub fn url(&self) -> String {
        format!("http://{}", self.addr)
    }
}

impl Drop for ServerHandle {
    fn drop(&mut self) {
        if let Some(s) = self.stop.take() {
            let _ = s.send(());
        }
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}

/// Starts a server in the background on `config.host` and `config.port`
/// (port 0 picks a free one).
pub fn spawn(config: ServiceConfig) -> anyhow::Result<ServerHandle> {
    config.validate()?;
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    let listener = rt.block_on(tokio::net::TcpListener::bind((config.host.as_str(), config.port)))?;
    let addr = listener.local_addr()?;
    let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
    let thread = std::thread::spawn(move || {
        let _ = rt.block_on(serve(config, listener, async {
            let _ = stopped.await;
        }));
    });
    Ok(ServerHandle {
        addr,
        stop: Some(stop),
        thread: Some(thread),
    })
}
