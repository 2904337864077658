//! Report files: sweep CSV, transfer matrices, eval reports.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use anyhow::Result;
use gymv_core::metrics::{LevelScore, TransferMatrix};
use serde::{Deserialize, Serialize};

pub const SWEEP_COLUMNS: [&str; 5] = ["env", "level", "n", "k", "acc"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SweepRow {
    env: String,
    level: u8,
    n: usize,
    k: usize,
    acc: f64,
}

pub fn write_sweep_csv<W: Write>(out: W, rows: &[LevelScore]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(SweepRow {
            env: r.env.clone(),
            level: r.level,
            n: r.n,
            k: r.k,
            acc: r.acc,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<LevelScore>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    anyhow::ensure!(header == SWEEP_COLUMNS, "unexpected sweep header {header:?}");
    r.deserialize::<SweepRow>()
        .map(|row| {
            let row = row?;
            Ok(LevelScore {
                env: row.env,
                level: row.level,
                n: row.n,
                k: row.k,
                acc: row.acc,
            })
        })
        .collect()
}

/// Input of `gymv transfer`: accuracies per source and the zero-shot row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferInput {
    pub sources: Vec<String>,
    pub targets: Vec<String>,
    pub baseline: BTreeMap<String, f64>,
    pub cells: BTreeMap<String, BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub matrix: TransferMatrix,
    pub breadth: BTreeMap<String, f64>,
}

pub fn transfer_report(input: TransferInput) -> Result<TransferReport> {
    let matrix = TransferMatrix::new(input.sources, input.targets, input.baseline, input.cells)?;
    let breadth = matrix
        .sources
        .iter()
        .map(|s| Ok((s.clone(), matrix.breadth(s)?)))
        .collect::<Result<_, gymv_core::Error>>()?;
    Ok(TransferReport { matrix, breadth })
}

/// Loads a stored matrix and refuses it if its deltas were edited.
pub fn load_matrix(text: &str) -> Result<TransferMatrix> {
    let m: TransferMatrix = serde_json::from_str(text)?;
    anyhow::ensure!(m.deltas_consistent(), "stored deltas do not match cells - baseline");
    Ok(m)
}
