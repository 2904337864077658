//! Minimum-weight route between two highlighted nodes of a weighted graph.

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use rand::{Rng, RngCore};

use super::common::{info, WeightedGraph};
use super::{Task, Verdict};
use crate::env::Rendered;
use crate::grammar::last_int_run;
use crate::protocol::{Category, DifficultyTable, Params, ParamsExt};
use crate::registry::EnvInfo;
use crate::rng::StreamRng;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RouteQuery {
    pub graph: WeightedGraph,
    pub source: usize,
    pub target: usize,
}

pub struct ShortestPath;

/// Dijkstra distances from `src`; `i64::MAX` for unreachable nodes.
pub fn dijkstra(g: &WeightedGraph, src: usize) -> Vec<i64> {
    let adj = g.adjacency();
    let mut dist = vec![i64::MAX; g.n];
    dist[src] = 0;
    let mut heap = BinaryHeap::from([Reverse((0i64, src))]);
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            if d + w < dist[v] {
                dist[v] = d + w;
                heap.push(Reverse((dist[v], v)));
            }
        }
    }
    dist
}

/// One optimal node sequence, recovered by walking predecessors.
fn optimal_route(q: &RouteQuery) -> Vec<usize> {
    let from_t = dijkstra(&q.graph, q.target);
    let adj = q.graph.adjacency();
    let mut route = vec![q.source];
    let mut at = q.source;
    while at != q.target {
        // the lowest-numbered neighbour that stays on a shortest path
        let next = adj[at]
            .iter()
            .filter(|&&(v, w)| from_t[v] != i64::MAX && w + from_t[v] == from_t[at])
            .map(|&(v, _)| v)
            .min()
            .expect("connected graph");
        route.push(next);
        at = next;
    }
    route
}

impl Task for ShortestPath {
    type Instance = RouteQuery;

    fn info() -> EnvInfo {
        info(
            "shortest_path",
            Category::Graphs,
            DifficultyTable::new(
                &["nodes"],
                [
                    &[("nodes", 8.into()), ("max_weight", 9.into())],
                    &[("nodes", 14.into()), ("max_weight", 9.into())],
                    &[("nodes", 20.into()), ("max_weight", 9.into())],
                ],
            ),
            "The image shows an undirected graph with numbered nodes and an integer weight on every edge. \
             Find a path of minimum total weight between the two highlighted nodes and report it as the \
             sequence of node numbers, source first.",
            "node numbers from source to target separated by spaces",
            "first line `nodes: 0..N-1`, then one `a - b : weight` line per edge",
        )
    }

    fn generate(params: &Params, rng: &mut StreamRng) -> Option<RouteQuery> {
        let n = params.int("nodes", 8) as usize;
        let max_w = params.int("max_weight", 9);
        let mut graph = WeightedGraph::random_tree(n, max_w, rng);
        let mut extra = n / 2;
        let mut tries = 0;
        while extra > 0 && tries < 100 {
            tries += 1;
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b && graph.weight(a, b).is_none() {
                graph.edges.push((a.min(b), a.max(b), rng.gen_range(1..=max_w)));
                extra -= 1;
            }
        }
        graph.edges.sort_unstable();
        let source = rng.gen_range(0..n);
        let target = rng.gen_range(0..n);
        (source != target && graph.weight(source, target).is_none()).then_some(RouteQuery { graph, source, target })
    }

    fn solve(q: &RouteQuery) -> String {
        let r: Vec<String> = optimal_route(q).iter().map(usize::to_string).collect();
        r.join(" ")
    }

    fn verify(q: &RouteQuery, answer: &str) -> Verdict {
        let Some(seq) = last_int_run(answer) else {
            return Verdict::wrong("parse");
        };
        if seq.first() != Some(&(q.source as i64)) || seq.last() != Some(&(q.target as i64)) {
            return Verdict::wrong("wrong endpoints");
        }
        let mut total = 0;
        for w in seq.windows(2) {
            let ok = |v: i64| v >= 0 && (v as usize) < q.graph.n;
            match (ok(w[0]) && ok(w[1]))
                .then(|| q.graph.weight(w[0] as usize, w[1] as usize))
                .flatten()
            {
                Some(wt) => total += wt,
                None => return Verdict::wrong("invalid edge"),
            }
        }
        let best = dijkstra(&q.graph, q.source)[q.target];
        Verdict::check(total == best, format!("weight {total} is not minimal"))
    }

    fn question(q: &RouteQuery) -> String {
        format!(
            "In the weighted graph shown, find a minimum-weight path from node {} to node {} (both \
             highlighted). Answer with the node numbers along the path, separated by spaces.",
            q.source, q.target
        )
    }

    fn caption(q: &RouteQuery) -> String {
        format!("{}\nsource: {}\ntarget: {}", q.graph.caption(), q.source, q.target)
    }

    fn render(q: &RouteQuery, _rng: &mut StreamRng) -> Rendered {
        q.graph.render(&[q.source, q.target])
    }

    fn random_answer(q: &RouteQuery, rng: &mut dyn RngCore) -> String {
        let adj = q.graph.adjacency();
        let mut walk = vec![q.source];
        let mut at = q.source;
        for _ in 0..2 * q.graph.n {
            if at == q.target {
                break;
            }
            at = adj[at][rng.gen_range(0..adj[at].len())].0;
            walk.push(at);
        }
        let r: Vec<String> = walk.iter().map(usize::to_string).collect();
        r.join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> RouteQuery {
        RouteQuery {
            graph: WeightedGraph {
                n: 3,
                edges: vec![(0, 1, 1), (1, 2, 1), (0, 2, 5)],
            },
            source: 0,
            target: 2,
        }
    }

    #[test]
    fn direct_edge_and_detour() {
        let mut q = triangle();
        q.graph.edges[2].2 = 1;
        assert!(ShortestPath::verify(&q, "0 2").correct);
        let q = triangle();
        assert!(!ShortestPath::verify(&q, "0 2").correct);
        assert!(ShortestPath::verify(&q, "path: 0 -> 1 -> 2").correct);
        assert_eq!(ShortestPath::solve(&q), "0 1 2");
    }

    #[test]
    fn non_edge_is_rejected() {
        let q = RouteQuery {
            graph: WeightedGraph {
                n: 3,
                edges: vec![(0, 1, 1), (1, 2, 1)],
            },
            source: 0,
            target: 2,
        };
        assert_eq!(ShortestPath::verify(&q, "0 2").detail, "invalid edge");
        assert_eq!(ShortestPath::verify(&q, "1 2").detail, "wrong endpoints");
    }
}
