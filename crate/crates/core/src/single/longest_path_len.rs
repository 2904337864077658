//! Total weight of the heaviest simple path in a weighted tree.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use super::common::{info, WeightedGraph};
use super::{Task, Verdict};
use crate::env::Rendered;
use crate::grammar::last_int;
use crate::protocol::{Category, DifficultyTable, Params, ParamsExt};
use crate::registry::EnvInfo;
use crate::rng::StreamRng;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    pub graph: WeightedGraph,
}

pub struct LongestPathLen;

/// Distances from `src` along tree edges.
pub fn tree_distances(g: &WeightedGraph, src: usize) -> Vec<i64> {
    let adj = g.adjacency();
    let mut dist = vec![-1i64; g.n];
    dist[src] = 0;
    let mut stack = vec![src];
    while let Some(u) = stack.pop() {
        for &(v, w) in &adj[u] {
            if dist[v] < 0 {
                dist[v] = dist[u] + w;
                stack.push(v);
            }
        }
    }
    dist
}

/// Weighted diameter: the farthest node from any node is one end of a
/// longest path.
pub fn diameter(g: &WeightedGraph) -> i64 {
    if g.n == 0 {
        return 0;
    }
    let d0 = tree_distances(g, 0);
    let far = (0..g.n).max_by_key(|&i| (d0[i], core::cmp::Reverse(i))).unwrap_or(0);
    tree_distances(g, far).into_iter().max().unwrap_or(0)
}

impl Task for LongestPathLen {
    type Instance = Tree;

    fn info() -> EnvInfo {
        info(
            "longest_path_len",
            Category::Graphs,
            DifficultyTable::new(
                &["nodes"],
                [
                    &[("nodes", 8.into()), ("max_weight", 9.into())],
                    &[("nodes", 14.into()), ("max_weight", 9.into())],
                    &[("nodes", 20.into()), ("max_weight", 9.into())],
                ],
            ),
            "The image shows a tree with an integer weight on every edge. Among all paths between two \
             nodes, find the one with the largest total weight and report that total.",
            "a single integer",
            "first line `nodes: 0..N-1`, then one `a - b : weight` line per edge",
        )
    }

    fn generate(params: &Params, rng: &mut StreamRng) -> Option<Tree> {
        let n = params.int("nodes", 8) as usize;
        let mut graph = WeightedGraph::random_tree(n, params.int("max_weight", 9), rng);
        graph.edges.sort_unstable();
        Some(Tree { graph })
    }

    fn solve(t: &Tree) -> String {
        diameter(&t.graph).to_string()
    }

    fn verify(t: &Tree, answer: &str) -> Verdict {
        Verdict::integer(last_int(answer), diameter(&t.graph))
    }

    fn question(t: &Tree) -> String {
        format!(
            "The weighted tree in the image has {} nodes. What is the largest total edge weight of a \
             path between any two nodes? Answer with a single integer.",
            t.graph.n
        )
    }

    fn caption(t: &Tree) -> String {
        t.graph.caption()
    }

    fn render(t: &Tree, _rng: &mut StreamRng) -> Rendered {
        t.graph.render(&[])
    }

    fn random_answer(t: &Tree, rng: &mut dyn RngCore) -> String {
        let a = rng.gen_range(0..t.graph.n);
        let b = rng.gen_range(0..t.graph.n);
        tree_distances(&t.graph, a)[b].to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_and_star() {
        let path = Tree {
            graph: WeightedGraph {
                n: 4,
                edges: vec![(0, 1, 3), (1, 2, 4), (2, 3, 5)],
            },
        };
        assert!(LongestPathLen::verify(&path, "12").correct);
        let star = Tree {
            graph: WeightedGraph {
                n: 4,
                edges: vec![(0, 1, 7), (0, 2, 2), (0, 3, 6)],
            },
        };
        assert_eq!(diameter(&star.graph), 13);
    }
}
