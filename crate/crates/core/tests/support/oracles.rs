//! Brute-force reference solvers, written without looking at the shipped
//! solvers. Each `judge_*` decides whether a structured candidate answer is
//! correct for an instance.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use gymv_core::single::circuit_logic::{Circuit, Op, Wire};
use gymv_core::single::common::WeightedGraph;
use gymv_core::single::rotten_oranges::Orange;
use gymv_core::single::visible_line::HALF_X;

/// Minute-by-minute rotting simulation; -1 if some orange never rots.
pub fn rot_time(cells: &[Vec<Orange>]) -> i64 {
    let mut g = cells.to_vec();
    let (h, w) = (g.len(), g[0].len());
    let mut minutes = 0;
    loop {
        let mut next = g.clone();
        let mut changed = false;
        for r in 0..h {
            for c in 0..w {
                if g[r][c] != Orange::Fresh {
                    continue;
                }
                let near_rot = (r > 0 && g[r - 1][c] == Orange::Rotten)
                    || (r + 1 < h && g[r + 1][c] == Orange::Rotten)
                    || (c > 0 && g[r][c - 1] == Orange::Rotten)
                    || (c + 1 < w && g[r][c + 1] == Orange::Rotten);
                if near_rot {
                    next[r][c] = Orange::Rotten;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        g = next;
        minutes += 1;
    }
    if g.iter().flatten().any(|&o| o == Orange::Fresh) {
        -1
    } else {
        minutes
    }
}

/// Grid distance by repeated relaxation until a fixpoint; -1 if unreachable.
pub fn relax_distance(walls: &[Vec<bool>], start: (usize, usize), goal: (usize, usize)) -> i64 {
    let (h, w) = (walls.len(), walls[0].len());
    let inf = i64::MAX / 4;
    let mut d = vec![vec![inf; w]; h];
    d[start.0][start.1] = 0;
    loop {
        let mut changed = false;
        for r in 0..h {
            for c in 0..w {
                if walls[r][c] {
                    continue;
                }
                let mut best = d[r][c];
                if r > 0 {
                    best = best.min(d[r - 1][c] + 1);
                }
                if r + 1 < h {
                    best = best.min(d[r + 1][c] + 1);
                }
                if c > 0 {
                    best = best.min(d[r][c - 1] + 1);
                }
                if c + 1 < w {
                    best = best.min(d[r][c + 1] + 1);
                }
                if best < d[r][c] {
                    d[r][c] = best;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let v = d[goal.0][goal.1];
    if v >= inf {
        -1
    } else {
        v
    }
}

/// Tries every square position and size.
pub fn brute_square_area(bits: &[Vec<bool>]) -> i64 {
    let (h, w) = (bits.len(), bits[0].len());
    let mut best = 0;
    for r in 0..h {
        for c in 0..w {
            for k in 1..=(h - r).min(w - c) {
                let full = (r..r + k).all(|i| (c..c + k).all(|j| bits[i][j]));
                if full {
                    best = best.max(k * k);
                }
            }
        }
    }
    best as i64
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    let mut x = x;
    while p[x] != r {
        let nx = p[x];
        p[x] = r;
        x = nx;
    }
    r
}

/// Largest 4-connected land component via union-find.
pub fn union_find_island(land: &[Vec<bool>]) -> i64 {
    let (h, w) = (land.len(), land[0].len());
    let mut parent: Vec<usize> = (0..h * w).collect();
    for r in 0..h {
        for c in 0..w {
            if !land[r][c] {
                continue;
            }
            if r + 1 < h && land[r + 1][c] {
                let (a, b) = (find(&mut parent, r * w + c), find(&mut parent, (r + 1) * w + c));
                parent[a] = b;
            }
            if c + 1 < w && land[r][c + 1] {
                let (a, b) = (find(&mut parent, r * w + c), find(&mut parent, r * w + c + 1));
                parent[a] = b;
            }
        }
    }
    let mut size: HashMap<usize, i64> = HashMap::new();
    for (r, row) in land.iter().enumerate() {
        for (c, &cell) in row.iter().enumerate() {
            if cell {
                *size.entry(find(&mut parent, r * w + c)).or_default() += 1;
            }
        }
    }
    size.values().copied().max().unwrap_or(0)
}

/// Lines attaining the maximum somewhere, by sampling. Samples: a dense
/// grid over the viewport, both far tails, and the midpoints between
/// consecutive pairwise intersection abscissae (where the argmax is unique).
/// Returns 1-based indices.
pub fn sampled_envelope(lines: &[(i64, i64)]) -> BTreeSet<i64> {
    let mut xs: Vec<f64> = Vec::new();
    let steps = 2400;
    for i in 0..=steps {
        xs.push(-(HALF_X as f64) + (2 * HALF_X) as f64 * i as f64 / steps as f64);
    }
    xs.push(-1e6);
    xs.push(1e6);
    let mut cuts: Vec<f64> = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a1, b1) = lines[i];
            let (a2, b2) = lines[j];
            if a1 != a2 {
                cuts.push((b2 - b1) as f64 / (a1 - a2) as f64);
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    for w in cuts.windows(2) {
        xs.push((w[0] + w[1]) / 2.0);
    }
    if let (Some(f), Some(l)) = (cuts.first(), cuts.last()) {
        xs.push(f - 1.0);
        xs.push(l + 1.0);
    }
    let mut out = BTreeSet::new();
    for x in xs {
        let vals: Vec<f64> = lines.iter().map(|&(a, b)| a as f64 * x + b as f64).collect();
        let top = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let winners: Vec<usize> = (0..lines.len()).filter(|&i| (vals[i] - top).abs() < 1e-9).collect();
        // ties only happen exactly at a crossing; those points add nothing
        if winners.len() == 1 {
            out.insert(winners[0] as i64 + 1);
        }
    }
    out
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn in_closed_triangle(p: (i64, i64), a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> bool {
    if cross(a, b, c) == 0 {
        return false;
    }
    let d1 = cross(a, b, p);
    let d2 = cross(b, c, p);
    let d3 = cross(c, a, p);
    let neg = d1 < 0 || d2 < 0 || d3 < 0;
    let pos = d1 > 0 || d2 > 0 || d3 > 0;
    !(neg && pos)
}

/// Hull vertices: points not inside any closed, non-degenerate triangle of
/// three others.
pub fn brute_hull_vertices(points: &[(i64, i64)]) -> i64 {
    let n = points.len();
    let mut count = 0;
    for i in 0..n {
        let others: Vec<(i64, i64)> = (0..n).filter(|&j| j != i).map(|j| points[j]).collect();
        let mut covered = false;
        'outer: for a in 0..others.len() {
            for b in a + 1..others.len() {
                for c in b + 1..others.len() {
                    if in_closed_triangle(points[i], others[a], others[b], others[c]) {
                        covered = true;
                        break 'outer;
                    }
                }
            }
        }
        if !covered {
            count += 1;
        }
    }
    count
}

/// All-pairs shortest distances.
pub fn floyd_warshall(g: &WeightedGraph) -> Vec<Vec<i64>> {
    let inf = i64::MAX / 4;
    let mut d = vec![vec![inf; g.n]; g.n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(a, b, w) in &g.edges {
        d[a][b] = d[a][b].min(w);
        d[b][a] = d[b][a].min(w);
    }
    for k in 0..g.n {
        for i in 0..g.n {
            for j in 0..g.n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

fn edge_weight(g: &WeightedGraph, a: i64, b: i64) -> Option<i64> {
    g.edges
        .iter()
        .find(|&&(x, y, _)| (x as i64 == a && y as i64 == b) || (x as i64 == b && y as i64 == a))
        .map(|e| e.2)
}

/// A node sequence is correct iff it walks real edges from source to
/// target with optimal total weight.
pub fn judge_route(g: &WeightedGraph, source: usize, target: usize, seq: &[i64]) -> bool {
    if seq.first() != Some(&(source as i64)) || seq.last() != Some(&(target as i64)) {
        return false;
    }
    let mut total = 0;
    for w in seq.windows(2) {
        match edge_weight(g, w[0], w[1]) {
            Some(x) => total += x,
            None => return false,
        }
    }
    total == floyd_warshall(g)[source][target]
}

/// Heaviest simple path in a tree: max over all pairs.
pub fn tree_diameter(g: &WeightedGraph) -> i64 {
    floyd_warshall(g)
        .iter()
        .flatten()
        .copied()
        .filter(|&v| v < i64::MAX / 4)
        .max()
        .unwrap_or(0)
}

pub type Grid4 = [[u8; 4]; 4];

fn permutations(items: &[u8]) -> Vec<Vec<u8>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// Every valid filled 4x4 board: rows are permutations of 1..4, checked
/// for columns and boxes.
pub fn all_sudoku_boards() -> Vec<Grid4> {
    let rows = permutations(&[1, 2, 3, 4]);
    let mut out = Vec::new();
    for a in &rows {
        for b in &rows {
            for c in &rows {
                for d in &rows {
                    let g: Grid4 = [
                        [a[0], a[1], a[2], a[3]],
                        [b[0], b[1], b[2], b[3]],
                        [c[0], c[1], c[2], c[3]],
                        [d[0], d[1], d[2], d[3]],
                    ];
                    let cols_ok = (0..4).all(|j| {
                        let s: BTreeSet<u8> = (0..4).map(|i| g[i][j]).collect();
                        s.len() == 4
                    });
                    let boxes_ok = [(0, 0), (0, 2), (2, 0), (2, 2)].iter().all(|&(r, c)| {
                        let s: BTreeSet<u8> = [g[r][c], g[r][c + 1], g[r + 1][c], g[r + 1][c + 1]]
                            .into_iter()
                            .collect();
                        s.len() == 4
                    });
                    if cols_ok && boxes_ok {
                        out.push(g);
                    }
                }
            }
        }
    }
    out
}

/// Completions of `clues` (0 = blank) among all valid boards.
pub fn sudoku_completions(all: &[Grid4], clues: &Grid4) -> Vec<Grid4> {
    all.iter()
        .filter(|g| (0..4).all(|i| (0..4).all(|j| clues[i][j] == 0 || clues[i][j] == g[i][j])))
        .copied()
        .collect()
}

/// Output bit by recursive descent from the last gate.
pub fn eval_recursive(c: &Circuit) -> i64 {
    fn wire(c: &Circuit, w: Wire) -> bool {
        match w {
            Wire::Input(i) => c.inputs[i],
            Wire::Gate(g) => gate(c, g),
        }
    }
    fn gate(c: &Circuit, g: usize) -> bool {
        let gt = &c.gates[g];
        let a = wire(c, gt.ins[0]);
        match gt.op {
            Op::Not => !a,
            Op::And => a & wire(c, gt.ins[1]),
            Op::Or => a | wire(c, gt.ins[1]),
            Op::Xor => a != wire(c, gt.ins[1]),
        }
    }
    i64::from(gate(c, c.gates.len() - 1))
}

/// Every non-attacking placement on an n x n board, as queen sets. Tries all
/// column permutations.
pub fn all_queen_sets(n: usize) -> Vec<BTreeSet<(usize, usize)>> {
    let cols: Vec<u8> = (0..n as u8).collect();
    permutations(&cols)
        .into_iter()
        .filter(|p| (0..n).all(|i| (i + 1..n).all(|j| (p[i] as i64 - p[j] as i64).abs() != (j - i) as i64)))
        .map(|p| p.iter().enumerate().map(|(r, &c)| (r, c as usize)).collect())
        .collect()
}

/// The union of answer and pre-placed queens must be a full solution.
pub fn judge_queens(
    solutions: &[BTreeSet<(usize, usize)>],
    fixed: &[(usize, usize)],
    answer: &[(usize, usize)],
) -> bool {
    let mut set: BTreeSet<(usize, usize)> = answer.iter().copied().collect();
    set.extend(fixed.iter().copied());
    solutions.contains(&set)
}

/// Hanoi state as the peg of every disc (index 0 = smallest).
pub type HanoiState = Vec<u8>;

/// Applies a move if legal under the disc-on-peg representation.
pub fn hanoi_step(state: &mut HanoiState, from: i64, to: i64) -> bool {
    if !(0..3).contains(&from) || !(0..3).contains(&to) || from == to {
        return false;
    }
    let Some(top) = state.iter().position(|&p| p as i64 == from) else {
        return false;
    };
    if state.iter().position(|&p| p as i64 == to).is_some_and(|t| t < top) {
        return false;
    }
    state[top] = to as u8;
    true
}

pub fn judge_hanoi(discs: usize, moves: &[(i64, i64)]) -> bool {
    if moves.is_empty() {
        return false;
    }
    let mut s = vec![0u8; discs];
    moves.iter().all(|&(f, t)| hanoi_step(&mut s, f, t)) && s.iter().all(|&p| p == 2)
}

/// Shortest move list from `state` to all-on-peg-2, by BFS over 3^n states.
pub fn hanoi_bfs(state: &HanoiState) -> Vec<(i64, i64)> {
    let goal = vec![2u8; state.len()];
    let mut prev: HashMap<HanoiState, (HanoiState, (i64, i64))> = HashMap::new();
    let mut q = VecDeque::from([state.clone()]);
    let mut seen: BTreeSet<HanoiState> = BTreeSet::from([state.clone()]);
    while let Some(s) = q.pop_front() {
        if s == goal {
            break;
        }
        for f in 0..3 {
            for t in 0..3 {
                let mut n = s.clone();
                if hanoi_step(&mut n, f, t) && seen.insert(n.clone()) {
                    prev.insert(n.clone(), (s.clone(), (f, t)));
                    q.push_back(n);
                }
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = goal;
    while let Some((p, m)) = prev.get(&cur) {
        path.push(*m);
        cur = p.clone();
    }
    path.reverse();
    path
}
