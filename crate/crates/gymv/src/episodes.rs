//! Episode batches as JSON lines. Images are either inlined as base64 or
//! written once per distinct image under `images/` next to the file and
//! referenced by relative path.

use std::collections::{BTreeMap, VecDeque};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use gymv_core::rng::stable_hash;
use gymv_core::{
    AgentMap, EnvSpec, EpisodeRecord, Info, Observation, RasterImage, Seed, Segment, StepResult, Transition,
};
use serde::{Deserialize, Serialize};

use crate::png;
use crate::wire::{decode_b64, encode_b64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageMode {
    Inline,
    Files,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImageRef {
    Path(String),
    Base64(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredObservation {
    pub image: ImageRef,
    pub segments: Vec<Segment>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub history_images: Vec<ImageRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredResult {
    pub observations: BTreeMap<String, StoredObservation>,
    pub rewards: AgentMap<f64>,
    pub terminated: AgentMap<bool>,
    pub truncated: AgentMap<bool>,
    pub info: AgentMap<Info>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredTransition {
    pub observations: BTreeMap<String, StoredObservation>,
    pub actions: AgentMap<String>,
    pub result: StoredResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredEpisode {
    pub spec: EnvSpec,
    pub seed: u64,
    pub rollout: u32,
    pub agent: String,
    pub transitions: Vec<StoredTransition>,
    pub returns: AgentMap<f64>,
    pub final_score: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Recent frames kept for reuse: a step's result image is the next step's
/// observation image, and history images repeat earlier frames.
const RECENT: usize = 8;

struct Sink<'a> {
    mode: ImageMode,
    dir: &'a Path,
    written: BTreeMap<u64, String>,
    recent: VecDeque<(RasterImage, ImageRef)>,
}

impl Sink<'_> {
    fn put(&mut self, img: &RasterImage) -> Result<ImageRef> {
        if let Some((_, r)) = self.recent.iter().find(|(i, _)| i == img) {
            return Ok(r.clone());
        }
        let r = self.encode(img)?;
        if self.recent.len() == RECENT {
            self.recent.pop_front();
        }
        self.recent.push_back((img.clone(), r.clone()));
        Ok(r)
    }

    fn encode(&mut self, img: &RasterImage) -> Result<ImageRef> {
        let bytes = png::encode(img)?;
        match self.mode {
            ImageMode::Inline => Ok(ImageRef::Base64(encode_b64(&bytes))),
            ImageMode::Files => {
                let h = stable_hash(&bytes);
                if let Some(p) = self.written.get(&h) {
                    return Ok(ImageRef::Path(p.clone()));
                }
                let rel = format!("images/{h:016x}.png");
                let full = self.dir.join(&rel);
                fs::create_dir_all(full.parent().unwrap())?;
                fs::write(&full, &bytes).with_context(|| format!("writing {}", full.display()))?;
                self.written.insert(h, rel.clone());
                Ok(ImageRef::Path(rel))
            }
        }
    }

    fn obs(&mut self, o: &Observation) -> Result<StoredObservation> {
        Ok(StoredObservation {
            image: self.put(&o.image)?,
            segments: o.segments.clone(),
            history_images: o.history_images.iter().map(|i| self.put(i)).collect::<Result<_>>()?,
        })
    }

    fn obs_map(&mut self, m: &AgentMap<Observation>) -> Result<BTreeMap<String, StoredObservation>> {
        m.iter().map(|(a, o)| Ok((a.clone(), self.obs(o)?))).collect()
    }
}

fn store(e: &EpisodeRecord, sink: &mut Sink) -> Result<StoredEpisode> {
    let transitions = e
        .transitions
        .iter()
        .map(|t| {
            Ok(StoredTransition {
                observations: sink.obs_map(&t.observations)?,
                actions: t.actions.clone(),
                result: StoredResult {
                    observations: sink.obs_map(&t.result.observations)?,
                    rewards: t.result.rewards.clone(),
                    terminated: t.result.terminated.clone(),
                    truncated: t.result.truncated.clone(),
                    info: t.result.info.clone(),
                },
            })
        })
        .collect::<Result<_>>()?;
    Ok(StoredEpisode {
        spec: e.spec.clone(),
        seed: e.seed.0,
        rollout: e.rollout,
        agent: e.agent.clone(),
        transitions,
        returns: e.returns.clone(),
        final_score: e.final_score,
        error: e.error.clone(),
    })
}

/// Writes one JSON line per episode to `path`.
pub fn write_batch(path: &Path, batch: &[EpisodeRecord], mode: ImageMode) -> Result<()> {
    let dir = path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    let mut sink = Sink {
        mode,
        dir: &dir,
        written: BTreeMap::new(),
        recent: VecDeque::new(),
    };
    let mut out = BufWriter::new(fs::File::create(path).with_context(|| format!("creating {}", path.display()))?);
    for e in batch {
        serde_json::to_writer(&mut out, &store(e, &mut sink)?)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

fn load_image(r: &ImageRef, dir: &Path) -> Result<RasterImage> {
    let bytes = match r {
        ImageRef::Base64(s) => decode_b64(s)?,
        ImageRef::Path(p) => {
            let rel = Path::new(p);
            if rel.is_absolute() || rel.components().any(|c| matches!(c, std::path::Component::ParentDir)) {
                bail!("image path `{p}` escapes the batch directory");
            }
            fs::read(dir.join(rel)).with_context(|| format!("reading image {p}"))?
        }
    };
    Ok(png::decode(&bytes)?)
}

fn load_obs_map(m: &BTreeMap<String, StoredObservation>, dir: &Path) -> Result<AgentMap<Observation>> {
    m.iter()
        .map(|(a, o)| {
            Ok((
                a.clone(),
                Observation {
                    image: load_image(&o.image, dir)?,
                    segments: o.segments.clone(),
                    history_images: o
                        .history_images
                        .iter()
                        .map(|i| load_image(i, dir))
                        .collect::<Result<_>>()?,
                },
            ))
        })
        .collect()
}

pub fn restore(e: StoredEpisode, dir: &Path) -> Result<EpisodeRecord> {
    let transitions = e
        .transitions
        .into_iter()
        .map(|t| {
            Ok(Transition {
                observations: load_obs_map(&t.observations, dir)?,
                actions: t.actions,
                result: StepResult {
                    observations: load_obs_map(&t.result.observations, dir)?,
                    rewards: t.result.rewards,
                    terminated: t.result.terminated,
                    truncated: t.result.truncated,
                    info: t.result.info,
                },
            })
        })
        .collect::<Result<_>>()?;
    Ok(EpisodeRecord {
        spec: e.spec,
        seed: Seed(e.seed),
        rollout: e.rollout,
        agent: e.agent,
        transitions,
        returns: e.returns,
        final_score: e.final_score,
        error: e.error,
    })
}

pub fn read_batch(path: &Path) -> Result<Vec<EpisodeRecord>> {
    let dir = path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    let f = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let stored: StoredEpisode =
            serde_json::from_str(&line).with_context(|| format!("{}:{}", path.display(), i + 1))?;
        out.push(restore(stored, &dir)?);
    }
    Ok(out)
}
