//! Golden images: one PNG per env per difficulty at seed 0, compared byte
//! for byte. `GYMV_BLESS=1` rewrites them.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use gymv_core::{Registry, Seed};

pub const GOLDEN_SEED: u64 = 0;
pub const GOLDEN_VERSION: &str = "v1";

pub fn golden_dir(root: &Path) -> PathBuf {
    root.join("tests/fixtures/golden").join(GOLDEN_VERSION)
}

pub fn render_png(reg: &Registry, env_id: &str, level: u8, seed: u64) -> Result<Vec<u8>> {
    let env = reg.make(&reg.spec(env_id, level)?, Seed(seed))?;
    Ok(crate::png::encode(&env.render().image)?)
}

pub fn blessing() -> bool {
    std::env::var("GYMV_BLESS").is_ok_and(|v| v == "1")
}

/// Names of mismatching (or, when blessing, rewritten) fixtures.
pub fn check(reg: &Registry, dir: &Path, bless: bool) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    if bless {
        std::fs::create_dir_all(dir)?;
    }
    for id in reg.ids() {
        for level in 0..3 {
            let name = format!("{id}_d{level}.png");
            let path = dir.join(&name);
            let bytes = render_png(reg, &id, level, GOLDEN_SEED)?;
            if bless {
                std::fs::write(&path, &bytes).with_context(|| format!("writing {}", path.display()))?;
                continue;
            }
            match std::fs::read(&path) {
                Ok(stored) if stored == bytes => {}
                _ => bad.push(name),
            }
        }
    }
    Ok(bad)
}
