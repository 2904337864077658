//! Number of corner points on the convex hull of a lattice point set.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

use super::common::info;
use super::{Task, Verdict};
use crate::env::Rendered;
use crate::grammar::last_int;
use crate::protocol::{Category, DifficultyTable, Params, ParamsExt};
use crate::registry::EnvInfo;
use crate::render::{RasterImage, Role};
use crate::rng::StreamRng;

/// Coordinates range over `0..=SPAN`.
pub const SPAN: i64 = 20;
const CANVAS: u32 = 512;
const PAD: i64 = 40;
const DOT: i64 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    pub points: Vec<(i64, i64)>,
}

pub struct ConvexHullCount;

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Strict hull corners (collinear boundary points excluded), counter-clockwise.
pub fn hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut p: Vec<(i64, i64)> = points.to_vec();
    p.sort_unstable();
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 0 {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 0 {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// A non-corner point lying on a hull edge.
pub fn has_boundary_collinear(points: &[(i64, i64)], corners: &[(i64, i64)]) -> bool {
    let k = corners.len();
    points.iter().filter(|p| !corners.contains(p)).any(|&p| {
        (0..k).any(|i| {
            let (a, b) = (corners[i], corners[(i + 1) % k]);
            cross(a, b, p) == 0
                && p.0 >= a.0.min(b.0)
                && p.0 <= a.0.max(b.0)
                && p.1 >= a.1.min(b.1)
                && p.1 <= a.1.max(b.1)
        })
    })
}

fn to_px(x: i64, y: i64) -> (i64, i64) {
    let span = i64::from(CANVAS) - 2 * PAD;
    (PAD + x * span / SPAN, i64::from(CANVAS) - PAD - y * span / SPAN)
}

impl Task for ConvexHullCount {
    type Instance = PointSet;

    fn info() -> EnvInfo {
        info(
            "convex_hull_count",
            Category::Geometry,
            DifficultyTable::new(
                &["points"],
                [
                    &[("points", 8.into())],
                    &[("points", 14.into())],
                    &[("points", 20.into())],
                ],
            ),
            "The image shows points on a light lattice. Stretch a rubber band around all of them; report \
             how many points are corners of the resulting convex hull.",
            "a single integer",
            "one `(x, y)` pair per line, coordinates 0 to 20",
        )
    }

    fn generate(params: &Params, rng: &mut StreamRng) -> Option<PointSet> {
        let n = params.int("points", 8) as usize;
        let mut pool: Vec<(i64, i64)> = (0..=SPAN).flat_map(|x| (0..=SPAN).map(move |y| (x, y))).collect();
        pool.shuffle(rng);
        let points: Vec<(i64, i64)> = pool.into_iter().take(n).collect();
        let corners = hull(&points);
        (corners.len() >= 3 && !has_boundary_collinear(&points, &corners)).then_some(PointSet { points })
    }

    fn solve(inst: &PointSet) -> String {
        hull(&inst.points).len().to_string()
    }

    fn verify(inst: &PointSet, answer: &str) -> Verdict {
        Verdict::integer(last_int(answer), hull(&inst.points).len() as i64)
    }

    fn question(inst: &PointSet) -> String {
        format!(
            "The image shows {} points. How many of them are vertices of their convex hull? Answer with \
             a single integer.",
            inst.points.len()
        )
    }

    fn caption(inst: &PointSet) -> String {
        let rows: Vec<String> = inst.points.iter().map(|(x, y)| format!("({x}, {y})")).collect();
        rows.join("\n")
    }

    fn render(inst: &PointSet, _rng: &mut StreamRng) -> Rendered {
        let mut img = RasterImage::new(CANVAS, CANVAS, Role::Background.color());
        let grid = Role::GridLine.color();
        for t in (0..=SPAN).step_by(5) {
            let (x0, y0) = to_px(t, 0);
            let (_, y1) = to_px(t, SPAN);
            img.draw_line(x0, y0, x0, y1, 1, grid);
            let (xa, ya) = to_px(0, t);
            let (xb, _) = to_px(SPAN, t);
            img.draw_line(xa, ya, xb, ya, 1, grid);
        }
        for &(x, y) in &inst.points {
            let (px, py) = to_px(x, y);
            img.fill_circle(px, py, DOT, Role::Point.color());
        }
        Rendered::image(img)
    }

    fn random_answer(inst: &PointSet, rng: &mut dyn RngCore) -> String {
        rng.gen_range(3..=inst.points.len()).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn square_with_center() {
        let s = PointSet {
            points: vec![(0, 0), (4, 0), (4, 4), (0, 4), (2, 2)],
        };
        assert!(ConvexHullCount::verify(&s, "4").correct);
    }

    #[test]
    fn edge_midpoint_is_not_a_corner() {
        let pts = [(0, 0), (4, 0), (2, 0), (2, 3)];
        let h = hull(&pts);
        assert_eq!(h.len(), 3);
        assert!(has_boundary_collinear(&pts, &h));
    }
}
