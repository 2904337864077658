//! Score aggregation: mean@k, robustness ratio, transfer breadth, reports
//! and difficulty sweeps.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::harness::{run_episodes, score_groups, Agent};
use crate::protocol::{EnvSpec, EpisodeRecord, Mode};
use crate::registry::Registry;
use crate::Result;

/// Critical value of the one-sided 95% normal test.
pub const Z_CRIT_95: f64 = 1.645;

/// Mean over every rollout of every instance; each group must hold
/// exactly `k` scores.
pub fn mean_at_k(groups: &[Vec<f64>], k: usize) -> Result<f64> {
    if k == 0 || groups.is_empty() {
        return Err(Error::Metric("mean@k needs at least one instance and k > 0".into()));
    }
    if let Some((i, g)) = groups.iter().enumerate().find(|(_, g)| g.len() != k) {
        return Err(Error::Metric(format!(
            "instance {i} has {} rollouts, expected {k}",
            g.len()
        )));
    }
    let total: f64 = groups.iter().flatten().sum();
    Ok(total / (groups.len() * k) as f64)
}

/// `acc_d2 / acc_d0`; undefined when the easy level is never solved.
pub fn robustness_ratio(acc_d0: f64, acc_d2: f64) -> Result<f64> {
    if acc_d0 <= 0.0 {
        return Err(Error::Metric(
            "robustness ratio undefined: level-0 accuracy is 0".into(),
        ));
    }
    Ok(acc_d2 / acc_d0)
}

/// Table rendering of an optional ratio.
pub fn format_ratio(r: Option<f64>) -> String {
    r.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3}"))
}

/// Sum of the positive deltas.
pub fn transfer_breadth<'a>(deltas: impl IntoIterator<Item = &'a f64>) -> f64 {
    deltas.into_iter().map(|d| d.max(0.0)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferMatrix {
    pub sources: Vec<String>,
    pub targets: Vec<String>,
    pub baseline: BTreeMap<String, f64>,
    pub cells: BTreeMap<String, BTreeMap<String, f64>>,
    pub deltas: BTreeMap<String, BTreeMap<String, f64>>,
}

impl TransferMatrix {
    /// Builds the matrix and its deltas (`cell - baseline`).
    pub fn new(
        sources: Vec<String>,
        targets: Vec<String>,
        baseline: BTreeMap<String, f64>,
        cells: BTreeMap<String, BTreeMap<String, f64>>,
    ) -> Result<Self> {
        let mut m = TransferMatrix {
            sources,
            targets,
            baseline,
            cells,
            deltas: BTreeMap::new(),
        };
        m.deltas = m.compute_deltas()?;
        Ok(m)
    }

    pub fn compute_deltas(&self) -> Result<BTreeMap<String, BTreeMap<String, f64>>> {
        let mut out = BTreeMap::new();
        for s in &self.sources {
            let row = self
                .cells
                .get(s)
                .ok_or_else(|| Error::Metric(format!("no cells for source `{s}`")))?;
            let mut d = BTreeMap::new();
            for t in &self.targets {
                let cell = row
                    .get(t)
                    .ok_or_else(|| Error::Metric(format!("missing cell `{s}` -> `{t}`")))?;
                let base = self
                    .baseline
                    .get(t)
                    .ok_or_else(|| Error::Metric(format!("missing baseline for `{t}`")))?;
                d.insert(t.clone(), cell - base);
            }
            out.insert(s.clone(), d);
        }
        Ok(out)
    }

    /// Stored deltas equal the recomputed ones bit for bit.
    pub fn deltas_consistent(&self) -> bool {
        self.compute_deltas().is_ok_and(|d| d == self.deltas)
    }

    pub fn breadth(&self, source: &str) -> Result<f64> {
        let row = self
            .deltas
            .get(source)
            .ok_or_else(|| Error::Metric(format!("unknown source `{source}`")))?;
        Ok(transfer_breadth(row.values()))
    }
}

/// Mean@k of one `(env, level)` slice of a batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelScore {
    pub env: String,
    pub level: u8,
    pub n: usize,
    pub k: usize,
    pub acc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvScore {
    pub env: String,
    pub mode: Mode,
    pub n: usize,
    pub k: usize,
    pub mean_at_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub agent: String,
    pub k: usize,
    pub specs: Vec<EnvSpec>,
    pub seeds: Vec<u64>,
    pub clip_negatives: bool,
    pub envs: Vec<EnvScore>,
    pub levels: Vec<LevelScore>,
}

fn grouped(batch: &[EpisodeRecord]) -> BTreeMap<(String, u8), Vec<&EpisodeRecord>> {
    let mut by: BTreeMap<(String, u8), Vec<&EpisodeRecord>> = BTreeMap::new();
    for e in batch {
        by.entry((e.spec.env_id.clone(), e.spec.difficulty))
            .or_default()
            .push(e);
    }
    by
}

fn owned(records: &[&EpisodeRecord]) -> Vec<EpisodeRecord> {
    records.iter().map(|&e| e.clone()).collect()
}

/// Aggregates a batch. Every number is a pure function of the batch, `k`
/// and the catalog modes.
pub fn build_report(registry: &Registry, batch: &[EpisodeRecord], k: usize) -> Result<EvalReport> {
    let mut levels = Vec::new();
    let mut per_env: BTreeMap<String, Vec<Vec<f64>>> = BTreeMap::new();
    for ((env, level), recs) in grouped(batch) {
        let groups = score_groups(&owned(&recs));
        levels.push(LevelScore {
            env: env.clone(),
            level,
            n: groups.len(),
            k,
            acc: mean_at_k(&groups, k)?,
        });
        per_env.entry(env).or_default().extend(groups);
    }
    let mut envs = Vec::new();
    for (env, groups) in per_env {
        envs.push(EnvScore {
            mode: registry.info(&env)?.mode,
            n: groups.len(),
            k,
            mean_at_k: mean_at_k(&groups, k)?,
            env,
        });
    }
    let mut specs: Vec<EnvSpec> = Vec::new();
    for e in batch {
        if !specs.contains(&e.spec) {
            specs.push(e.spec.clone());
        }
    }
    let mut seeds: Vec<u64> = batch.iter().map(|e| e.seed.0).collect();
    seeds.sort_unstable();
    seeds.dedup();
    Ok(EvalReport {
        agent: batch.first().map(|e| e.agent.clone()).unwrap_or_default(),
        k,
        specs,
        seeds,
        clip_negatives: false,
        envs,
        levels,
    })
}

/// Clamps multi-turn scores at zero. Idempotent.
pub fn clip_negatives(mut report: EvalReport) -> EvalReport {
    let multi: Vec<String> = report
        .envs
        .iter()
        .filter(|e| e.mode == Mode::MultiTurn)
        .map(|e| e.env.clone())
        .collect();
    for e in &mut report.envs {
        if e.mode == Mode::MultiTurn {
            e.mean_at_k = e.mean_at_k.max(0.0);
        }
    }
    for l in &mut report.levels {
        if multi.contains(&l.env) {
            l.acc = l.acc.max(0.0);
        }
    }
    report.clip_negatives = true;
    report
}

/// Recomputes `report` from `batch` and lists every field that differs.
pub fn verify_report(registry: &Registry, report: &EvalReport, batch: &[EpisodeRecord]) -> Result<Vec<String>> {
    let mut fresh = build_report(registry, batch, report.k)?;
    if report.clip_negatives {
        fresh = clip_negatives(fresh);
    }
    let mut diffs = Vec::new();
    if fresh.agent != report.agent {
        diffs.push(format!("agent: {} vs {}", report.agent, fresh.agent));
    }
    if fresh.specs != report.specs {
        diffs.push("specs differ".into());
    }
    if fresh.seeds != report.seeds {
        diffs.push("seeds differ".into());
    }
    if fresh.envs.len() != report.envs.len() {
        diffs.push("env count differs".into());
    }
    for (a, b) in report.envs.iter().zip(&fresh.envs) {
        if a != b {
            diffs.push(format!(
                "env {}: reported {} recomputed {}",
                a.env, a.mean_at_k, b.mean_at_k
            ));
        }
    }
    if fresh.levels.len() != report.levels.len() {
        diffs.push("level count differs".into());
    }
    for (a, b) in report.levels.iter().zip(&fresh.levels) {
        if a != b {
            diffs.push(format!(
                "{} level {}: reported {} recomputed {}",
                a.env, a.level, a.acc, b.acc
            ));
        }
    }
    Ok(diffs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub rows: Vec<LevelScore>,
    /// `None` when level 0 is never solved.
    pub rho: Option<f64>,
}

/// Runs `agent` on every level of `base.env_id` and reports mean@k per level.
pub fn difficulty_sweep(
    registry: &Registry,
    agent: &mut dyn Agent,
    base: &EnvSpec,
    seeds: &[u64],
    k: u32,
) -> Result<Sweep> {
    let info = registry.info(&base.env_id)?;
    let mut rows = Vec::new();
    for level in crate::protocol::DifficultyTable::LEVELS {
        if info.difficulty.level(level).is_none() {
            return Err(Error::UnknownDifficulty {
                env_id: base.env_id.clone(),
                level,
            });
        }
        let spec = base.clone().with_difficulty(level);
        let batch = run_episodes(registry, agent, &spec, seeds, k)?;
        let groups = score_groups(&batch);
        rows.push(LevelScore {
            env: base.env_id.clone(),
            level,
            n: groups.len(),
            k: k as usize,
            acc: mean_at_k(&groups, k as usize)?,
        });
    }
    let rho = robustness_ratio(rows[0].acc, rows[2].acc).ok();
    Ok(Sweep { rows, rho })
}

/// One-sided two-proportion z statistic for "`p_hi` exceeds `p_lo`",
/// with the pooled variance. `0.0` when the pooled rate is 0 or 1.
pub fn two_proportion_z(successes_lo: u64, n_lo: u64, successes_hi: u64, n_hi: u64) -> f64 {
    let (nl, nh) = (n_lo as f64, n_hi as f64);
    let (pl, ph) = (successes_lo as f64 / nl, successes_hi as f64 / nh);
    let pooled = (successes_lo + successes_hi) as f64 / (nl + nh);
    let var = pooled * (1.0 - pooled) * (1.0 / nl + 1.0 / nh);
    if var <= 0.0 {
        return 0.0;
    }
    (ph - pl) / libm::sqrt(var)
}

/// Whether accuracy rises significantly (one-sided, 95%) from the easier
/// to the harder level, given per-level success counts.
pub fn significant_increase(successes_easy: u64, n_easy: u64, successes_hard: u64, n_hard: u64) -> bool {
    two_proportion_z(successes_easy, n_easy, successes_hard, n_hard) > Z_CRIT_95
}
