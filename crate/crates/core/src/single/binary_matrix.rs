//! Area of the largest all-ones square in a binary matrix.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use super::common::{grid_image, info, matrix_caption};
use super::{Task, Verdict};
use crate::env::Rendered;
use crate::grammar::last_int;
use crate::protocol::{Category, DifficultyTable, Params, ParamsExt};
use crate::registry::EnvInfo;
use crate::render::{Cell, Role};
use crate::rng::StreamRng;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub bits: Vec<Vec<bool>>,
}

pub struct BinaryMatrix;

/// Classic DP: side of the largest square whose bottom-right corner is
/// each cell.
pub fn largest_square_area(bits: &[Vec<bool>]) -> usize {
    let rows = bits.len();
    let cols = bits.first().map_or(0, |r| r.len());
    let mut dp = vec![vec![0usize; cols + 1]; rows + 1];
    let mut best = 0;
    for r in 0..rows {
        for c in 0..cols {
            if bits[r][c] {
                dp[r + 1][c + 1] = 1 + dp[r][c].min(dp[r + 1][c]).min(dp[r][c + 1]);
                best = best.max(dp[r + 1][c + 1]);
            }
        }
    }
    best * best
}

impl Task for BinaryMatrix {
    type Instance = Matrix;

    fn info() -> EnvInfo {
        info(
            "binary_matrix",
            Category::Algorithmic,
            DifficultyTable::new(
                &["side"],
                [
                    &[("side", 6.into()), ("one_prob", 0.7.into())],
                    &[("side", 10.into()), ("one_prob", 0.7.into())],
                    &[("side", 14.into()), ("one_prob", 0.7.into())],
                ],
            ),
            "The matrix holds 0s and 1s. Find the largest square sub-matrix made only of 1s and report \
             its area (side length squared); report 0 if the matrix has no 1.",
            "a single integer",
            "one line per row of 0/1 digits",
        )
    }

    fn generate(params: &Params, rng: &mut StreamRng) -> Option<Matrix> {
        let side = params.int("side", 6) as usize;
        let p = params.float("one_prob", 0.7);
        let bits = (0..side)
            .map(|_| (0..side).map(|_| rng.gen_bool(p)).collect())
            .collect();
        Some(Matrix { bits })
    }

    fn solve(inst: &Matrix) -> String {
        largest_square_area(&inst.bits).to_string()
    }

    fn verify(inst: &Matrix, answer: &str) -> Verdict {
        Verdict::integer(last_int(answer), largest_square_area(&inst.bits) as i64)
    }

    fn question(inst: &Matrix) -> String {
        format!(
            "The image shows a {n}x{n} binary matrix. What is the area of the largest square that \
             contains only 1s? Answer with a single integer.",
            n = inst.bits.len()
        )
    }

    fn caption(inst: &Matrix) -> String {
        let rows: Vec<Vec<char>> = inst
            .bits
            .iter()
            .map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect())
            .collect();
        matrix_caption(&rows)
    }

    fn render(inst: &Matrix, _rng: &mut StreamRng) -> Rendered {
        let cells: Vec<Vec<Cell>> = inst
            .bits
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&b| {
                        if b {
                            Cell::mark(Role::One, "1", Role::Background)
                        } else {
                            Cell::text(Role::Zero, "0")
                        }
                    })
                    .collect()
            })
            .collect();
        grid_image(&cells)
    }

    fn random_answer(inst: &Matrix, rng: &mut dyn RngCore) -> String {
        let k = rng.gen_range(0..=inst.bits.len());
        (k * k).to_string()
    }
}
