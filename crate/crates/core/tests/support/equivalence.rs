//! Verifier vs brute-force oracle agreement. For each instance a handful of
//! structured candidate answers (the truth, near misses, random draws) are
//! formatted as free text, verified by the shipped verifier, and judged by
//! the oracle. Every disagreement is reported.

#![allow(dead_code)]

use std::collections::BTreeSet;

use gymv_core::single::{self, binary_matrix, circuit_logic, convex_hull_count, grid_bfs, largest_island};
use gymv_core::single::{longest_path_len, mini_sudoku, n_queens, rotten_oranges, shortest_path};
use gymv_core::single::{tower_of_hanoi, visible_line, Task};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracles::*;

#[derive(Debug, Default, Clone)]
pub struct Tally {
    pub instances: usize,
    pub checks: usize,
    pub disagreements: Vec<String>,
}

impl Tally {
    fn check(&mut self, env: &str, seed: u64, answer: &str, verifier: bool, oracle: bool) {
        self.checks += 1;
        if verifier != oracle {
            self.disagreements.push(format!(
                "{env} seed {seed}: answer {answer:?} verifier={verifier} oracle={oracle}"
            ));
        }
    }
}

fn int_candidates(truth: i64, rng: &mut ChaCha8Rng) -> Vec<i64> {
    let hi = truth.abs() * 2 + 3;
    vec![
        truth,
        truth + 1,
        truth - 1,
        rng.gen_range(-1..=hi),
        rng.gen_range(-1..=hi),
    ]
}

fn int_task<T: Task>(env: &str, level: u8, seeds: &[u64], oracle: impl Fn(&T::Instance) -> i64, tally: &mut Tally) {
    for &seed in seeds {
        let inst = single::instance::<T>(level, seed).expect("generation");
        let truth = oracle(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        tally.instances += 1;
        for v in int_candidates(truth, &mut rng) {
            let text = format!("After working it out, the answer is {v}.");
            tally.check(env, seed, &text, T::verify(&inst, &text).correct, v == truth);
        }
    }
}

fn fmt_route(seq: &[i64]) -> String {
    let parts: Vec<String> = seq.iter().map(|v| v.to_string()).collect();
    format!("Path: {}", parts.join(" -> "))
}

fn shortest(level: u8, seeds: &[u64], tally: &mut Tally) {
    for &seed in seeds {
        let q = single::instance::<shortest_path::ShortestPath>(level, seed).expect("generation");
        let g = &q.graph;
        let d = floyd_warshall(g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        tally.instances += 1;
        // greedy descent along the all-pairs table gives an optimal route
        let mut best = vec![q.source as i64];
        let mut cur = q.source;
        while cur != q.target {
            let next = g
                .edges
                .iter()
                .filter_map(|&(a, b, w)| {
                    let other = if a == cur {
                        b
                    } else if b == cur {
                        a
                    } else {
                        return None;
                    };
                    (w + d[other][q.target] == d[cur][q.target]).then_some(other)
                })
                .min()
                .unwrap();
            best.push(next as i64);
            cur = next;
        }
        let mut walk = vec![q.source as i64];
        let mut cur = q.source;
        for _ in 0..40 {
            if cur == q.target {
                break;
            }
            let nbrs: Vec<usize> = g
                .edges
                .iter()
                .filter_map(|&(a, b, _)| {
                    if a == cur {
                        Some(b)
                    } else if b == cur {
                        Some(a)
                    } else {
                        None
                    }
                })
                .collect();
            cur = *nbrs.choose(&mut rng).unwrap();
            walk.push(cur as i64);
        }
        let mut jump = best.clone();
        jump.insert(1, rng.gen_range(0..g.n as i64));
        let direct = vec![q.source as i64, q.target as i64];
        let mut longer = best.clone();
        if best.len() >= 2 {
            longer.insert(1, best[1]);
            longer.insert(2, best[0]);
        }
        for cand in [best, walk, jump, direct, longer] {
            let text = fmt_route(&cand);
            let v = shortest_path::ShortestPath::verify(&q, &text).correct;
            tally.check(
                "shortest_path",
                seed,
                &text,
                v,
                judge_route(g, q.source, q.target, &cand),
            );
        }
    }
}

fn visible(level: u8, seeds: &[u64], tally: &mut Tally) {
    for &seed in seeds {
        let inst = single::instance::<visible_line::VisibleLine>(level, seed).expect("generation");
        let truth = sampled_envelope(&inst.lines);
        let n = inst.lines.len() as i64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        tally.instances += 1;
        let mut cands: Vec<Vec<i64>> = Vec::new();
        let mut t: Vec<i64> = truth.iter().copied().collect();
        t.shuffle(&mut rng);
        cands.push(t.clone());
        if t.len() > 1 {
            cands.push(t[1..].to_vec());
        }
        if let Some(extra) = (1..=n).find(|i| !truth.contains(i)) {
            let mut more = t.clone();
            more.push(extra);
            cands.push(more);
        }
        let random: Vec<i64> = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
        if !random.is_empty() {
            cands.push(random);
        }
        for c in cands {
            let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            let text = match parts.split_last() {
                Some((last, init)) if !init.is_empty() => format!("Visible: {} and {last}", init.join(", ")),
                _ => format!("Visible: {}", parts.join(", ")),
            };
            let got: BTreeSet<i64> = c.iter().copied().collect();
            let v = visible_line::VisibleLine::verify(&inst, &text).correct;
            tally.check("visible_line", seed, &text, v, got == truth);
        }
    }
}

fn sudoku(level: u8, seeds: &[u64], tally: &mut Tally) {
    let all = all_sudoku_boards();
    for &seed in seeds {
        let p = single::instance::<mini_sudoku::MiniSudoku>(level, seed).expect("generation");
        let sols = sudoku_completions(&all, &p.clues);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        tally.instances += 1;
        // uniqueness is part of the contract
        tally.check("mini_sudoku", seed, "<uniqueness>", true, sols.len() == 1);
        let Some(&sol) = sols.first() else { continue };
        let mut swapped = sol;
        let r = rng.gen_range(0..4);
        swapped[r].swap(0, 1);
        let other = *all.choose(&mut rng).unwrap();
        let mut noisy = sol;
        noisy[rng.gen_range(0..4)][rng.gen_range(0..4)] = rng.gen_range(1..=4);
        for cand in [sol, swapped, other, noisy] {
            let rows: Vec<String> = cand.iter().map(|r| r.iter().map(|d| d.to_string()).collect()).collect();
            let text = format!("Filled grid:\n{}", rows.join("\n"));
            let v = mini_sudoku::MiniSudoku::verify(&p, &text).correct;
            tally.check("mini_sudoku", seed, &text, v, sols.contains(&cand));
        }
    }
}

fn queens(level: u8, seeds: &[u64], tally: &mut Tally) {
    let mut cache: std::collections::HashMap<usize, Vec<BTreeSet<(usize, usize)>>> = Default::default();
    for &seed in seeds {
        let b = single::instance::<n_queens::NQueens>(level, seed).expect("generation");
        let sols = cache.entry(b.n).or_insert_with(|| all_queen_sets(b.n)).clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        tally.instances += 1;
        let valid: Vec<&BTreeSet<(usize, usize)>> =
            sols.iter().filter(|s| b.fixed.iter().all(|f| s.contains(f))).collect();
        tally.check("n_queens", seed, "<solvable>", true, !valid.is_empty());
        let Some(sol) = valid.choose(&mut rng) else { continue };
        let full: Vec<(usize, usize)> = sol.iter().copied().collect();
        let free: Vec<(usize, usize)> = full.iter().copied().filter(|q| !b.fixed.contains(q)).collect();
        let mut moved = full.clone();
        let i = rng.gen_range(0..moved.len());
        moved[i].1 = (moved[i].1 + 1) % b.n;
        let random: Vec<(usize, usize)> = (0..b.n).map(|r| (r, rng.gen_range(0..b.n))).collect();
        let mut shuffled = full.clone();
        shuffled.shuffle(&mut rng);
        for cand in [full, free, moved, random, shuffled] {
            let parts: Vec<String> = cand.iter().map(|(r, c)| format!("({r}, {c})")).collect();
            let text = format!("Queens at {}", parts.join(" "));
            let v = n_queens::NQueens::verify(&b, &text).correct;
            tally.check("n_queens", seed, &text, v, judge_queens(&sols, &b.fixed, &cand));
        }
    }
}

fn hanoi(level: u8, seeds: &[u64], tally: &mut Tally) {
    for &seed in seeds {
        let t = single::instance::<tower_of_hanoi::TowerOfHanoi>(level, seed).expect("generation");
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        tally.instances += 1;
        let start = vec![0u8; t.discs];
        let optimal = hanoi_bfs(&start);
        // a random legal detour, then the shortest way home
        let mut s = start.clone();
        let mut detour = Vec::new();
        for _ in 0..rng.gen_range(1..20) {
            let (f, to) = (rng.gen_range(0..3), rng.gen_range(0..3));
            if hanoi_step(&mut s, f, to) {
                detour.push((f, to));
            }
        }
        detour.extend(hanoi_bfs(&s));
        let mut broken = optimal.clone();
        let k = rng.gen_range(0..broken.len());
        broken.insert(k, (rng.gen_range(0..3), rng.gen_range(0..3)));
        let mut short = optimal.clone();
        short.pop();
        let random: Vec<(i64, i64)> = (0..optimal.len())
            .map(|_| (rng.gen_range(0..3), rng.gen_range(0..3)))
            .collect();
        for cand in [optimal, detour, broken, short, random] {
            let parts: Vec<String> = cand.iter().map(|(a, b)| format!("({a},{b})")).collect();
            let text = format!("Moves: {}", parts.join(", "));
            let v = tower_of_hanoi::TowerOfHanoi::verify(&t, &text).correct;
            tally.check("tower_of_hanoi", seed, &text, v, judge_hanoi(t.discs, &cand));
        }
    }
}

/// Runs the agreement check for one env at one level.
pub fn check_env(env: &str, level: u8, seeds: &[u64]) -> Tally {
    let mut t = Tally::default();
    match env {
        "rotten_oranges" => {
            int_task::<rotten_oranges::RottenOranges>(env, level, seeds, |i| rot_time(&i.cells), &mut t)
        }
        "grid_bfs" => {
            int_task::<grid_bfs::GridBfs>(env, level, seeds, |m| relax_distance(&m.walls, m.start, m.goal), &mut t)
        }
        "binary_matrix" => {
            int_task::<binary_matrix::BinaryMatrix>(env, level, seeds, |m| brute_square_area(&m.bits), &mut t)
        }
        "largest_island" => {
            int_task::<largest_island::LargestIsland>(env, level, seeds, |i| union_find_island(&i.land), &mut t)
        }
        "convex_hull_count" => int_task::<convex_hull_count::ConvexHullCount>(
            env,
            level,
            seeds,
            |p| brute_hull_vertices(&p.points),
            &mut t,
        ),
        "longest_path_len" => {
            int_task::<longest_path_len::LongestPathLen>(env, level, seeds, |tr| tree_diameter(&tr.graph), &mut t)
        }
        "circuit_logic" => int_task::<circuit_logic::CircuitLogic>(env, level, seeds, eval_recursive, &mut t),
        "visible_line" => visible(level, seeds, &mut t),
        "shortest_path" => shortest(level, seeds, &mut t),
        "mini_sudoku" => sudoku(level, seeds, &mut t),
        "n_queens" => queens(level, seeds, &mut t),
        "tower_of_hanoi" => hanoi(level, seeds, &mut t),
        other => panic!("no oracle for {other}"),
    }
    t
}

/// Seeds for the agreement runs: disjoint ranges per level.
pub fn seeds_for(level: u8, count: usize) -> Vec<u64> {
    (0..count as u64)
        .map(|i| 1_000_000 * (u64::from(level) + 1) + i)
        .collect()
}
