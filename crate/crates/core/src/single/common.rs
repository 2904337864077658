use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::env::Rendered;
use crate::protocol::{Category, DifficultyTable, Mode, SOLO_AGENT};
use crate::registry::EnvInfo;
use crate::render::{render_graph, render_grid, Cell, GraphDrawing, GraphEdge, Style};
use crate::rng::StreamRng;

pub(crate) fn info(
    env_id: &str,
    category: Category,
    difficulty: DifficultyTable,
    rules: &str,
    answer_grammar: &str,
    caption_format: &str,
) -> EnvInfo {
    EnvInfo {
        env_id: env_id.to_string(),
        category,
        mode: Mode::SingleTurn,
        difficulty,
        rules: rules.to_string(),
        action_grammar: answer_grammar.to_string(),
        grammar: None,
        caption_format: caption_format.to_string(),
        agents: vec![SOLO_AGENT.to_string()],
    }
}

/// Largest multiple-of-8 cell size (capped at 64) that keeps a grid of
/// `side` cells plus half-cell margins within 768px.
pub(crate) fn cell_px(side: usize) -> u32 {
    let raw = (768 / (side as u32 + 1)).min(64);
    raw / 8 * 8
}

pub(crate) fn grid_image(cells: &[Vec<Cell>]) -> Rendered {
    let side = cells.len().max(cells.first().map_or(0, |r| r.len()));
    let style = Style::with_cell(cell_px(side));
    let (image, layout) = render_grid(cells, &style).expect("grid sizes are bounded by the difficulty tables");
    Rendered {
        image,
        grid: Some(layout),
    }
}

/// One line per row, one character per cell.
pub(crate) fn matrix_caption(rows: &[Vec<char>]) -> String {
    let lines: Vec<String> = rows.iter().map(|r| r.iter().collect()).collect();
    lines.join("\n")
}

/// Inverse of [`matrix_caption`].
pub fn parse_matrix(text: &str) -> Vec<Vec<char>> {
    text.lines()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.chars().collect())
        .collect()
}

pub(crate) const DIRS4: [(i32, i32); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];

pub(crate) fn neighbors4(r: usize, c: usize, rows: usize, cols: usize) -> impl Iterator<Item = (usize, usize)> {
    DIRS4.iter().filter_map(move |(dr, dc)| {
        let nr = r as i32 + dr;
        let nc = c as i32 + dc;
        (nr >= 0 && nc >= 0 && (nr as usize) < rows && (nc as usize) < cols).then_some((nr as usize, nc as usize))
    })
}

/// Undirected graph with positive integer weights on nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, i64)>,
}

impl WeightedGraph {
    pub fn weight(&self, a: usize, b: usize) -> Option<i64> {
        self.edges
            .iter()
            .find(|&&(u, v, _)| (u, v) == (a, b) || (u, v) == (b, a))
            .map(|e| e.2)
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, i64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b, w) in &self.edges {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        adj
    }

    /// Random spanning tree (each node attaches to an earlier node of a
    /// shuffled order) with weights in `1..=max_w`.
    pub fn random_tree(n: usize, max_w: i64, rng: &mut StreamRng) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let edges = (1..n)
            .map(|i| {
                let j = rng.gen_range(0..i);
                let (a, b) = (order[i].min(order[j]), order[i].max(order[j]));
                (a, b, rng.gen_range(1..=max_w))
            })
            .collect();
        WeightedGraph { n, edges }
    }

    /// Caption: `nodes: 0..n-1` then one `a - b : w` line per edge.
    pub fn caption(&self) -> String {
        let mut out = format!("nodes: 0..{}", self.n.saturating_sub(1));
        for &(a, b, w) in &self.edges {
            out.push_str(&format!("\n{a} - {b} : {w}"));
        }
        out
    }

    pub fn render(&self, highlights: &[usize]) -> Rendered {
        let labels = (0..self.n).map(|i| i.to_string()).collect();
        let edges = self
            .edges
            .iter()
            .map(|&(a, b, w)| GraphEdge {
                a,
                b,
                label: Some(w.to_string()),
            })
            .collect();
        let mut d = GraphDrawing::new(labels, edges);
        d.highlights = highlights.to_vec();
        Rendered::image(render_graph(&d, &Style::default()).expect("fixed 512px canvas"))
    }
}
