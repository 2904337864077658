//! Which lines of a set `y = Ax + B` appear on the upper envelope.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

use super::common::info;
use super::{Task, Verdict};
use crate::env::Rendered;
use crate::grammar::last_int_run;
use crate::protocol::{Category, DifficultyTable, Params, ParamsExt};
use crate::registry::EnvInfo;
use crate::render::{render_lines, Style, Viewport};
use crate::rng::StreamRng;

/// Half-widths of the plotted window.
pub const HALF_X: i64 = 6;
pub const HALF_Y: i64 = 30;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LineSet {
    /// `(A, B)` for `y = A*x + B`; answers refer to 1-based positions.
    pub lines: Vec<(i64, i64)>,
}

pub struct VisibleLine;

/// Upper envelope over the whole real line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    /// 0-based indices, ordered by increasing slope (left to right).
    pub chain: Vec<usize>,
    /// Some non-envelope line touches the envelope at exactly one point.
    pub touching: bool,
}

pub fn upper_envelope(lines: &[(i64, i64)]) -> Envelope {
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by(|&i, &j| lines[i].0.cmp(&lines[j].0).then(lines[j].1.cmp(&lines[i].1)));
    let mut touching = false;
    let mut chain: Vec<usize> = Vec::new();
    let mut last_slope = None;
    for i in order {
        let (a3, b3) = lines[i];
        if last_slope == Some(a3) {
            // same slope, lower or equal intercept: never strictly on top
            continue;
        }
        last_slope = Some(a3);
        while chain.len() >= 2 {
            let (a1, b1) = lines[chain[chain.len() - 2]];
            let (a2, b2) = lines[chain[chain.len() - 1]];
            // middle line survives iff x(1,3) is strictly right of x(1,2)
            let lhs = (b1 - b3) * (a2 - a1);
            let rhs = (b1 - b2) * (a3 - a1);
            if lhs == rhs {
                touching = true;
            }
            if lhs <= rhs {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(i);
    }
    Envelope { chain, touching }
}

/// Abscissae where the envelope switches lines, as `(num, den)` with `den > 0`.
pub fn breakpoints(lines: &[(i64, i64)], chain: &[usize]) -> Vec<(i64, i64)> {
    chain
        .windows(2)
        .map(|w| {
            let (a1, b1) = lines[w[0]];
            let (a2, b2) = lines[w[1]];
            (b1 - b2, a2 - a1)
        })
        .collect()
}

pub fn visible_set(lines: &[(i64, i64)]) -> BTreeSet<i64> {
    upper_envelope(lines).chain.into_iter().map(|i| i as i64 + 1).collect()
}

fn format_line(a: i64, b: i64) -> String {
    let sign = if b < 0 { '-' } else { '+' };
    format!("y = {a}x {sign} {}", b.abs())
}

impl Task for VisibleLine {
    type Instance = LineSet;

    fn info() -> EnvInfo {
        info(
            "visible_line",
            Category::Geometry,
            DifficultyTable::new(
                &["lines"],
                [&[("lines", 5.into())], &[("lines", 9.into())], &[("lines", 13.into())]],
            ),
            "The plot shows numbered straight lines. Looking down from far above (y = +infinity), a line \
             is visible if it is the highest line for some range of x. Report the numbers of all visible \
             lines.",
            "space-separated line numbers, any order",
            "one line per plotted line: `<number>: y = <A>x + <B>`",
        )
    }

    fn generate(params: &Params, rng: &mut StreamRng) -> Option<LineSet> {
        let n = params.int("lines", 5) as usize;
        let mut pool: Vec<(i64, i64)> = (-4..=4).flat_map(|a| (-6..=6).map(move |b| (a, b))).collect();
        pool.shuffle(rng);
        let lines: Vec<(i64, i64)> = pool.into_iter().take(n).collect();
        let env = upper_envelope(&lines);
        if env.touching {
            return None;
        }
        // every switch must happen inside the plotted window, away from its edge
        let inside = breakpoints(&lines, &env.chain)
            .iter()
            .all(|&(num, den)| num.abs() < (HALF_X - 1) * den);
        inside.then_some(LineSet { lines })
    }

    fn solve(inst: &LineSet) -> String {
        let v: Vec<String> = visible_set(&inst.lines).iter().map(i64::to_string).collect();
        v.join(" ")
    }

    fn verify(inst: &LineSet, answer: &str) -> Verdict {
        // "2, 4 and 5" should read as one list
        let cleaned = answer.replace(" and ", " ").replace(" AND ", " ");
        let Some(run) = last_int_run(&cleaned) else {
            return Verdict::wrong("parse");
        };
        let got: BTreeSet<i64> = run.into_iter().collect();
        Verdict::check(got == visible_set(&inst.lines), "wrong set")
    }

    fn question(inst: &LineSet) -> String {
        format!(
            "The plot shows {} lines, labelled 1 to {}. Which lines are visible from above, that is, \
             highest for some range of x? List their numbers separated by spaces.",
            inst.lines.len(),
            inst.lines.len()
        )
    }

    fn caption(inst: &LineSet) -> String {
        let rows: Vec<String> = inst
            .lines
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| format!("{}: {}", i + 1, format_line(a, b)))
            .collect();
        rows.join("\n")
    }

    fn render(inst: &LineSet, _rng: &mut StreamRng) -> Rendered {
        let vp = Viewport::symmetric(HALF_X as f64, HALF_Y as f64);
        let lines: Vec<(f64, f64)> = inst.lines.iter().map(|&(a, b)| (a as f64, b as f64)).collect();
        Rendered::image(render_lines(&lines, &vp, &Style::default()).expect("fixed 512px canvas"))
    }

    fn random_answer(inst: &LineSet, rng: &mut dyn RngCore) -> String {
        let picks: Vec<String> = (1..=inst.lines.len())
            .filter(|_| rng.gen_bool(0.5))
            .map(|i| i.to_string())
            .collect();
        if picks.is_empty() {
            "1".into()
        } else {
            picks.join(" ")
        }
    }
}
