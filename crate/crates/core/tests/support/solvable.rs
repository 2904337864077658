//! Per-seed solvability checks for the multi-turn generators.

use std::collections::BTreeSet;

use gymv_core::multi::frozenlake::FrozenLake;
use gymv_core::multi::minesweeper::Minesweeper;
use gymv_core::multi::sokoban::Sokoban;
use gymv_core::multi::MultiTurn;
use gymv_core::{AgentMap, Params, Registry, Seed, SOLO_AGENT};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn params<G: MultiTurn>(level: u8) -> Params {
    G::info().difficulty.level(level).unwrap().clone()
}

pub fn solo(a: &str) -> AgentMap<String> {
    AgentMap::from([(SOLO_AGENT.to_string(), a.to_string())])
}

/// Depth-first reachability, independent of the shipped BFS.
pub fn reachable(holes: &[Vec<bool>], from: (usize, usize), to: (usize, usize)) -> bool {
    let n = holes.len();
    let mut seen = BTreeSet::from([from]);
    let mut stack = vec![from];
    while let Some((r, c)) = stack.pop() {
        if (r, c) == to {
            return true;
        }
        let cand = [(r.wrapping_sub(1), c), (r + 1, c), (r, c.wrapping_sub(1)), (r, c + 1)];
        for (nr, nc) in cand {
            if nr < n && nc < n && !holes[nr][nc] && seen.insert((nr, nc)) {
                stack.push((nr, nc));
            }
        }
    }
    false
}

/// The stored plan, played through the env, solves the level and earns
/// one per box plus the completion bonus.
pub fn sokoban_plan_solves(reg: &Registry, seed: u64) -> Result<(), String> {
    let level = (seed % 3) as u8;
    let g = Sokoban::build(&params::<Sokoban>(level), Seed(seed)).map_err(|e| e.to_string())?;
    let boxes = g.level.boxes.len() as f64;
    if g.level.solved() {
        return Err(format!("sokoban seed {seed}: starts solved"));
    }
    let mut env = reg.make(&reg.spec("sokoban", level).unwrap(), Seed(seed)).unwrap();
    env.reset().unwrap();
    let mut total = 0.0;
    let mut last = None;
    for d in g.plan() {
        let r = env
            .step(&solo(d.name()))
            .map_err(|e| format!("sokoban seed {seed}: {e}"))?;
        total += r.rewards[SOLO_AGENT];
        last = Some(r.terminated[SOLO_AGENT]);
    }
    // on/off-goal terms telescope to the box count
    if last != Some(true) || total != boxes + 10.0 {
        return Err(format!("sokoban seed {seed}: plan ends {last:?} with return {total}"));
    }
    Ok(())
}

pub fn frozenlake_reachable(seed: u64) -> Result<(), String> {
    let level = (seed % 3) as u8;
    let g = FrozenLake::build(&params::<FrozenLake>(level), Seed(seed)).map_err(|e| e.to_string())?;
    let l = &g.lake;
    let open = !l.holes[l.start.0][l.start.1] && !l.holes[l.goal.0][l.goal.1];
    if !open || !reachable(&l.holes, l.start, l.goal) {
        return Err(format!("frozenlake seed {seed}: goal unreachable"));
    }
    Ok(())
}

/// A reveal at a seeded random cell on a fresh board never hits a mine.
pub fn minesweeper_first_reveal_safe(reg: &Registry, seed: u64) -> Result<(), String> {
    let level = (seed % 3) as u8;
    let side = params::<Minesweeper>(level)["side"].as_i64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (r, c) = (rng.gen_range(0..side), rng.gen_range(0..side));
    let mut env = reg.make(&reg.spec("minesweeper", level).unwrap(), Seed(seed)).unwrap();
    env.reset().unwrap();
    let out = env.step(&solo(&format!("reveal {r} {c}"))).map_err(|e| e.to_string())?;
    let text = out.observations[SOLO_AGENT].prompt();
    if out.rewards[SOLO_AGENT] <= 0.0 || text.contains("Boom") {
        return Err(format!("minesweeper seed {seed}: first reveal ({r}, {c}) hit a mine"));
    }
    Ok(())
}
