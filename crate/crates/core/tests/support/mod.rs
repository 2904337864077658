// Each test binary uses a different subset.
#![allow(dead_code)]

pub mod cliff;
pub mod equivalence;
pub mod laws;
pub mod oracles;
pub mod solvable;
pub mod transfer_table;
