//! Seeded random substreams.
//!
//! Every random consumer (a node, an edge, a solver read, a Monte Carlo
//! chunk) gets its own generator derived from `(master seed, domain,
//! index)`. Results therefore do not depend on iteration order or on how
//! work is split across threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Domain tags keep substreams of different consumers disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Node = 1,
    Edge = 2,
    Read = 3,
    MonteCarlo = 4,
    Knapsack = 5,
    Task = 6,
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent generator for element `index` of `domain` under `seed`.
pub fn substream(seed: u64, domain: Domain, index: u64) -> StreamRng {
    let key = splitmix64(seed ^ splitmix64(domain as u64));
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(index);
    rng
}

/// Master seed for a derived job, such as one instance of a batch.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    substream(seed, Domain::Task, index).next_u64()
}
