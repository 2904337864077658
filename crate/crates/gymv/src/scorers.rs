//! Rule-based reward backends. A request's metadata names a reference
//! state (`env_id`, `difficulty`, `seed`, optional `actions` to replay);
//! the scorer re-renders it and compares the submitted image.

use std::sync::Arc;

use gymv_core::{AgentMap, RasterImage, Registry, Seed};

use crate::wire::RewardRequest;

#[derive(Debug, Clone, PartialEq)]
pub struct Scored {
    pub score: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScoreError {
    #[error("bad metadata: {0}")]
    Metadata(String),
    #[error("bad image: {0}")]
    Image(String),
}

pub trait Scorer: Send + Sync {
    fn name(&self) -> &str;
    fn version(&self) -> &str;
    /// Whether one instance may score several requests at once.
    fn parallel_safe(&self) -> bool {
        true
    }
    fn score(&self, image: &RasterImage, req: &RewardRequest) -> Result<Scored, ScoreError>;
}

/// Reference render described by a request's metadata.
pub struct Reference {
    pub image: RasterImage,
    pub grid: Option<gymv_core::render::GridLayout>,
}

pub fn reference(reg: &Registry, req: &RewardRequest) -> Result<Reference, ScoreError> {
    let md = &req.metadata;
    let env_id = md
        .get("env_id")
        .and_then(|v| v.as_str())
        .ok_or_else(|| ScoreError::Metadata("`env_id` is required".into()))?;
    let level = match md.get("difficulty") {
        None => 0,
        Some(v) => {
            v.as_u64()
                .filter(|&l| l <= u64::from(u8::MAX))
                .ok_or_else(|| ScoreError::Metadata("`difficulty` must be a small integer".into()))? as u8
        }
    };
    let seed = match md.get("seed") {
        None => 0,
        Some(v) => v
            .as_u64()
            .ok_or_else(|| ScoreError::Metadata("`seed` must be an integer".into()))?,
    };
    let actions: Vec<AgentMap<String>> = match md.get("actions") {
        None => Vec::new(),
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| ScoreError::Metadata(format!("`actions`: {e}")))?,
    };
    let spec = reg
        .spec(env_id, level)
        .map_err(|e| ScoreError::Metadata(e.to_string()))?;
    let mut env = reg
        .make(&spec, Seed(seed))
        .map_err(|e| ScoreError::Metadata(e.to_string()))?;
    env.reset().map_err(|e| ScoreError::Metadata(e.to_string()))?;
    for a in &actions {
        env.step(a)
            .map_err(|e| ScoreError::Metadata(format!("replaying actions: {e}")))?;
    }
    let r = env.render();
    Ok(Reference {
        image: r.image,
        grid: r.grid,
    })
}

/// Share of grid cells whose interior pixels all match the reference.
pub struct GridMatch {
    registry: Arc<Registry>,
}

impl GridMatch {
    pub fn new(registry: Arc<Registry>) -> Self {
        GridMatch { registry }
    }
}

/// Pixels kept clear of the gridlines on each side of a cell.
const CELL_INSET: u32 = 2;

impl Scorer for GridMatch {
    fn name(&self) -> &str {
        "grid_match"
    }

    fn version(&self) -> &str {
        "grid_match/1"
    }

    fn score(&self, image: &RasterImage, req: &RewardRequest) -> Result<Scored, ScoreError> {
        let r = reference(&self.registry, req)?;
        let layout = r
            .grid
            .ok_or_else(|| ScoreError::Metadata("reference env is not drawn on a grid".into()))?;
        if (image.width, image.height) != (r.image.width, r.image.height) {
            return Ok(Scored {
                score: 0.0,
                detail: format!(
                    "size {}x{} != reference {}x{}",
                    image.width, image.height, r.image.width, r.image.height
                ),
            });
        }
        let total = layout.rows * layout.cols;
        let mut matched = 0;
        for row in 0..layout.rows {
            for col in 0..layout.cols {
                let x0 = layout.origin_x + col * layout.cell_px + CELL_INSET;
                let y0 = layout.origin_y + row * layout.cell_px + CELL_INSET;
                let span = layout.cell_px - 2 * CELL_INSET;
                let same = (y0..y0 + span).all(|y| (x0..x0 + span).all(|x| image.get(x, y) == r.image.get(x, y)));
                matched += u32::from(same);
            }
        }
        Ok(Scored {
            score: f64::from(matched) / f64::from(total),
            detail: format!("{matched}/{total} cells match"),
        })
    }
}

/// Share of identical pixels.
pub struct PixelMatch {
    registry: Arc<Registry>,
}

impl PixelMatch {
    pub fn new(registry: Arc<Registry>) -> Self {
        PixelMatch { registry }
    }
}

impl Scorer for PixelMatch {
    fn name(&self) -> &str {
        "pixel_match"
    }

    fn version(&self) -> &str {
        "pixel_match/1"
    }

    fn score(&self, image: &RasterImage, req: &RewardRequest) -> Result<Scored, ScoreError> {
        let r = reference(&self.registry, req)?;
        if (image.width, image.height) != (r.image.width, r.image.height) {
            return Ok(Scored {
                score: 0.0,
                detail: "size mismatch".into(),
            });
        }
        let total = (image.width * image.height) as usize;
        let same = image
            .pixels
            .chunks_exact(3)
            .zip(r.image.pixels.chunks_exact(3))
            .filter(|(a, b)| a == b)
            .count();
        Ok(Scored {
            score: same as f64 / total as f64,
            detail: format!("{same}/{total} pixels match"),
        })
    }
}

/// Builds the named shipped scorers.
pub fn builtin(names: &[String], registry: Arc<Registry>) -> Result<Vec<Arc<dyn Scorer>>, String> {
    names
        .iter()
        .map(|n| -> Result<Arc<dyn Scorer>, String> {
            match n.as_str() {
                "grid_match" => Ok(Arc::new(GridMatch::new(registry.clone()))),
                "pixel_match" => Ok(Arc::new(PixelMatch::new(registry.clone()))),
                other => Err(format!("unknown scorer `{other}` in config")),
            }
        })
        .collect()
}
