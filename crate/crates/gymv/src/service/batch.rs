//! Request coalescing for the reward endpoint: accept concurrently, cut a
//! batch at `max_batch` requests or when the first one has lingered long
//! enough, score it off the async workers, and answer each caller.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Duration;

use tokio::sync::{mpsc, oneshot};

use super::ApiError;
use crate::png;
use crate::scorers::{ScoreError, Scorer};
use crate::wire::{decode_b64, RewardRequest, RewardResponse};

type Reply = oneshot::Sender<Result<RewardResponse, ApiError>>;

struct Job {
    scorer: Arc<dyn Scorer>,
    req: RewardRequest,
    reply: Reply,
}

#[derive(Clone)]
pub struct Batcher {
    tx: mpsc::Sender<Job>,
}

impl Batcher {
    pub fn start(max_batch: usize, linger: Duration) -> Self {
        let (tx, rx) = mpsc::channel(max_batch.max(1) * 64);
        tokio::spawn(run(rx, max_batch, linger));
        Batcher { tx }
    }

    pub async fn submit(&self, scorer: Arc<dyn Scorer>, req: RewardRequest) -> Result<RewardResponse, ApiError> {
        let (reply, rx) = oneshot::channel();
        self.tx
            .send(Job { scorer, req, reply })
            .await
            .map_err(|_| ApiError::internal("reward pipeline stopped"))?;
        rx.await
            .map_err(|_| ApiError::internal("reward pipeline dropped a request"))?
    }
}

async fn run(mut rx: mpsc::Receiver<Job>, max_batch: usize, linger: Duration) {
    let mut counter: u64 = 0;
    while let Some(first) = rx.recv().await {
        let deadline = tokio::time::Instant::now() + linger;
        let mut jobs = vec![first];
        while jobs.len() < max_batch {
            match tokio::time::timeout_at(deadline, rx.recv()).await {
                Ok(Some(j)) => jobs.push(j),
                Ok(None) | Err(_) => break,
            }
        }
        counter += 1;
        let batch_id = format!("batch-{counter:08}");
        tokio::task::spawn_blocking(move || dispatch(jobs, &batch_id));
    }
}

fn score_one(scorer: &dyn Scorer, req: &RewardRequest, batch_id: &str) -> Result<RewardResponse, ApiError> {
    let bytes = decode_b64(&req.multimodal_outputs.image).map_err(|e| ApiError::bad_image(format!("base64: {e}")))?;
    let image = png::decode(&bytes).map_err(|e| ApiError::bad_image(e.to_string()))?;
    let s = scorer.score(&image, req).map_err(|e| match e {
        ScoreError::Image(m) => ApiError::bad_image(m),
        ScoreError::Metadata(m) => ApiError::bad_request(m),
    })?;
    Ok(RewardResponse {
        score: s.score,
        detail: s.detail,
        scorer_version: scorer.version().to_string(),
        batch_id: batch_id.to_string(),
    })
}

/// Scores one batch. Requests for parallel-safe backends are spread over
/// threads; the rest run one at a time.
fn dispatch(jobs: Vec<Job>, batch_id: &str) {
    let mut by_scorer: BTreeMap<String, Vec<Job>> = BTreeMap::new();
    for j in jobs {
        by_scorer.entry(j.scorer.name().to_string()).or_default().push(j);
    }
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get());
    std::thread::scope(|s| {
        for (_, group) in by_scorer {
            if group[0].scorer.parallel_safe() {
                let per = group.len().div_ceil(threads).max(1);
                let mut rest = group;
                while !rest.is_empty() {
                    let chunk: Vec<Job> = rest.drain(..per.min(rest.len())).collect();
                    s.spawn(move || {
                        for j in chunk {
                            let r = score_one(j.scorer.as_ref(), &j.req, batch_id);
                            let _ = j.reply.send(r);
                        }
                    });
                }
            } else {
                s.spawn(move || {
                    for j in group {
                        let r = score_one(j.scorer.as_ref(), &j.req, batch_id);
                        let _ = j.reply.send(r);
                    }
                });
            }
        }
    });
}
