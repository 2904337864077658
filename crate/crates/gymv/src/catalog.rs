//! The machine-readable catalog manifest. `catalog.json` at the crate root
//! is the checked-in copy; tests require it to equal the live registry.

use std::collections::BTreeMap;

use gymv_core::render::{Style, MAX_DIM};
use gymv_core::{EnvInfo, Mode, Registry};
use serde::{Deserialize, Serialize};

pub const SHIPPED: &str = include_str!("../catalog.json");

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageDefaults {
    pub max_dim: u32,
    pub cell_px: u32,
    pub font_scale: u32,
    pub format: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counts {
    pub total: usize,
    pub single_turn: usize,
    pub multi_turn: usize,
    pub by_category: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub images: ImageDefaults,
    pub counts: Counts,
    pub envs: Vec<EnvInfo>,
}

pub fn manifest(reg: &Registry) -> Manifest {
    let envs = reg.catalog();
    let mut by_category = BTreeMap::new();
    for e in &envs {
        let name = serde_json::to_value(e.category)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        *by_category.entry(name).or_insert(0) += 1;
    }
    let single_turn = envs.iter().filter(|e| e.mode == Mode::SingleTurn).count();
    let style = Style::default();
    Manifest {
        version: MANIFEST_VERSION,
        images: ImageDefaults {
            max_dim: MAX_DIM,
            cell_px: style.cell_px,
            font_scale: style.font_scale,
            format: "png/rgb8".into(),
        },
        counts: Counts {
            total: envs.len(),
            single_turn,
            multi_turn: envs.len() - single_turn,
            by_category,
        },
        envs,
    }
}

pub fn to_json(m: &Manifest) -> String {
    let mut s = serde_json::to_string_pretty(m).expect("manifest serializes");
    s.push('\n');
    s
}

pub fn shipped() -> Manifest {
    serde_json::from_str(SHIPPED).expect("catalog.json parses")
}
