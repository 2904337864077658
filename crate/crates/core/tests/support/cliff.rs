//! Random-agent accuracy must not rise significantly with difficulty.

use gymv_core::harness::{run_episodes, OracleAgent, RandomAgent};
use gymv_core::metrics::significant_increase;
use gymv_core::Registry;

#[derive(Debug, Clone)]
pub struct Cliff {
    pub env: String,
    /// Random-agent successes per level.
    pub successes: [u64; 3],
    pub n: u64,
    pub oracle_acc: [f64; 3],
}

impl Cliff {
    pub fn non_increasing(&self) -> bool {
        let s = self.successes;
        !(significant_increase(s[0], self.n, s[1], self.n)
            || significant_increase(s[1], self.n, s[2], self.n)
            || significant_increase(s[0], self.n, s[2], self.n))
    }

    pub fn oracle_perfect(&self) -> bool {
        self.oracle_acc.iter().all(|&a| a == 1.0)
    }
}

pub fn measure(reg: &Registry, env: &str, n: u64, oracle_n: u64) -> Cliff {
    let seeds: Vec<u64> = (0..n).map(|i| 90_000 + i).collect();
    let mut successes = [0; 3];
    let mut oracle_acc = [0.0; 3];
    for level in 0..3u8 {
        let spec = reg.spec(env, level).unwrap();
        let batch = run_episodes(reg, &mut RandomAgent::default(), &spec, &seeds, 1).unwrap();
        successes[level as usize] = batch.iter().filter(|e| e.final_score >= 1.0).count() as u64;
        let o = run_episodes(reg, &mut OracleAgent, &spec, &seeds[..oracle_n as usize], 1).unwrap();
        oracle_acc[level as usize] = o.iter().map(|e| e.final_score).sum::<f64>() / oracle_n as f64;
    }
    Cliff {
        env: env.to_string(),
        successes,
        n,
        oracle_acc,
    }
}
