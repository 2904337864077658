//! Move a stack of discs from peg 0 to peg 2, one disc at a time, never
//! placing a larger disc on a smaller one.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use super::common::info;
use super::{Task, Verdict};
use crate::env::Rendered;
use crate::grammar::paren_pairs;
use crate::protocol::{Category, DifficultyTable, Params, ParamsExt};
use crate::registry::EnvInfo;
use crate::render::{RasterImage, Role, Style};
use crate::rng::StreamRng;

pub const PEGS: usize = 3;
pub const TARGET: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tower {
    pub discs: usize,
}

pub struct TowerOfHanoi;

/// Applies `moves` to `discs` discs on peg 0. `Err` names the first
/// offending move (0-based); `Ok` carries the final pegs, bottom first.
pub fn simulate(discs: usize, moves: &[(i64, i64)]) -> Result<[Vec<usize>; PEGS], (usize, &'static str)> {
    let mut pegs: [Vec<usize>; PEGS] = [(1..=discs).rev().collect(), Vec::new(), Vec::new()];
    for (i, &(s, t)) in moves.iter().enumerate() {
        let valid = |p: i64| (0..PEGS as i64).contains(&p);
        if !valid(s) || !valid(t) || s == t {
            return Err((i, "bad peg"));
        }
        let (s, t) = (s as usize, t as usize);
        let Some(&d) = pegs[s].last() else {
            return Err((i, "empty source"));
        };
        if pegs[t].last().is_some_and(|&top| top < d) {
            return Err((i, "larger onto smaller"));
        }
        pegs[s].pop();
        pegs[t].push(d);
    }
    Ok(pegs)
}

fn optimal(n: usize, from: usize, to: usize, via: usize, out: &mut Vec<(usize, usize)>) {
    if n == 0 {
        return;
    }
    optimal(n - 1, from, via, to, out);
    out.push((from, to));
    optimal(n - 1, via, to, from, out);
}

const CANVAS_W: u32 = 600;
const CANVAS_H: u32 = 300;
const DISC_H: i64 = 24;
const BASE_Y: i64 = 250;

impl Task for TowerOfHanoi {
    type Instance = Tower;

    fn info() -> EnvInfo {
        info(
            "tower_of_hanoi",
            Category::Puzzles,
            DifficultyTable::new(
                &["discs"],
                [&[("discs", 3.into())], &[("discs", 4.into())], &[("discs", 5.into())]],
            ),
            "Three pegs are numbered 0, 1 and 2 from left to right and all discs start on peg 0. Move the \
             whole stack to peg 2. Each move takes the top disc of one peg to another peg and may never put \
             a larger disc on a smaller one. Any legal sequence that finishes the task is accepted.",
            "moves as `(source,target)` pairs in order",
            "one line per peg: `peg P: d1 d2 ...` with disc sizes bottom to top",
        )
    }

    fn generate(params: &Params, _rng: &mut StreamRng) -> Option<Tower> {
        Some(Tower {
            discs: params.int("discs", 3) as usize,
        })
    }

    fn solve(t: &Tower) -> String {
        let mut moves = Vec::new();
        optimal(t.discs, 0, TARGET, 1, &mut moves);
        let parts: Vec<String> = moves.iter().map(|(s, d)| format!("({s},{d})")).collect();
        parts.join(" ")
    }

    fn verify(t: &Tower, answer: &str) -> Verdict {
        let moves = paren_pairs(answer);
        if moves.is_empty() {
            return Verdict::wrong("parse");
        }
        match simulate(t.discs, &moves) {
            Err((i, why)) => Verdict::wrong(format!("move {}: {why}", i + 1)),
            Ok(pegs) => Verdict::check(pegs[TARGET].len() == t.discs, "stack not on peg 2"),
        }
    }

    fn question(t: &Tower) -> String {
        format!(
            "The image shows {} discs stacked on peg 0. Move them all to peg 2, one top disc at a time, \
             never placing a larger disc on a smaller one. Answer with the moves as (source,target) pairs, \
             for example (0,2) (0,1).",
            t.discs
        )
    }

    fn caption(t: &Tower) -> String {
        let mut rows = vec![format!(
            "peg 0: {}",
            (1..=t.discs).rev().map(|d| d.to_string()).collect::<Vec<_>>().join(" ")
        )];
        rows.push("peg 1: empty".into());
        rows.push("peg 2: empty".into());
        rows.join("\n")
    }

    fn render(t: &Tower, _rng: &mut StreamRng) -> Rendered {
        let style = Style::default();
        let mut img = RasterImage::new(CANVAS_W, CANVAS_H, Role::Background.color());
        let slot = i64::from(CANVAS_W) / PEGS as i64;
        let peg = Role::Peg.color();
        img.fill_rect(10, BASE_Y, i64::from(CANVAS_W) - 20, 8, peg);
        for p in 0..PEGS as i64 {
            let cx = slot * p + slot / 2;
            img.fill_rect(cx - 4, BASE_Y - DISC_H * 7, 8, DISC_H * 7, peg);
            img.draw_text_centered(cx, BASE_Y + 28, &p.to_string(), style.font_scale, Role::Text.color());
        }
        let cx = slot / 2;
        for (level, size) in (1..=t.discs as i64).rev().enumerate() {
            let w = 40 + size * 28;
            let y = BASE_Y - DISC_H * (level as i64 + 1);
            img.fill_rect(cx - w / 2, y + 2, w, DISC_H - 4, Role::Disc.color());
        }
        Rendered::image(img)
    }

    fn random_answer(t: &Tower, rng: &mut dyn RngCore) -> String {
        let len = (1usize << t.discs) - 1;
        let parts: Vec<String> = (0..len)
            .map(|_| {
                let s = rng.gen_range(0..PEGS);
                let d = (s + rng.gen_range(1..PEGS)) % PEGS;
                format!("({s},{d})")
            })
            .collect();
        parts.join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_towers() {
        assert!(TowerOfHanoi::verify(&Tower { discs: 1 }, "(0,2)").correct);
        let two = Tower { discs: 2 };
        let v = TowerOfHanoi::verify(&two, "(0,2)(0,2)");
        assert!(!v.correct);
        assert_eq!(v.detail, "move 2: larger onto smaller");
    }

    #[test]
    fn non_optimal_legal_solution_is_accepted() {
        // 9 moves for 3 discs: the optimal 7 plus a detour of the small disc
        let t = Tower { discs: 3 };
        let ans = "(0,2) (2,1) (1,2) (0,1) (2,1) (0,2) (1,0) (1,2) (0,2)";
        assert!(TowerOfHanoi::verify(&t, ans).correct);
        assert_eq!(TowerOfHanoi::solve(&t).matches('(').count(), 7);
    }
}
