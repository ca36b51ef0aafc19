//! The sign generator and per-replication substreams.
//!
//! Replication `k` always starts from the same state, whichever worker
//! runs it, so results do not depend on the thread count.

use gfk::rng::{next_state, substream, RngState};

fn main() {
    let mut s = 1u32;
    print!("states from seed 1:");
    for _ in 0..5 {
        s = next_state(s);
        print!(" {s}");
    }
    println!();

    let mut rng = RngState::new(1);
    let signs: String = (0..40).map(|_| if rng.bernoulli() > 0 { '+' } else { '-' }).collect();
    println!("first 40 signs:     {signs}");

    for k in 0..4 {
        println!("substream(42, {k}) starts at {:#010x}", substream(42, k).state());
    }

    let mut rng = RngState::new(2024);
    let n = 1_000_000;
    let total: i64 = (0..n).map(|_| i64::from(rng.bernoulli())).sum();
    println!("mean of {n} signs: {:+.2e}", total as f64 / n as f64);
}
