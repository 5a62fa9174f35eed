//! Named, independent random streams derived from one root seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream names. Each consumer draws only from its own stream so that
/// adding draws in one place never shifts another's sequence.
pub const FAILURES: &str = "failures";
pub const TRICKLE: &str = "trickle";
pub const AGENTS: &str = "agents";
pub const NODE_ORDER: &str = "node-order";
pub const AGENT_ORDER: &str = "agent-order";
pub const GENERATOR: &str = "generator";

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn fnv1a(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Derives the stream `name` from `seed`.
pub fn stream(seed: u64, name: &str) -> SimRng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ fnv1a(name)))
}

/// All per-run streams bundled together.
#[derive(Clone, Debug)]
pub struct Streams {
    pub failures: SimRng,
    pub trickle: SimRng,
    pub agents: SimRng,
    pub node_order: SimRng,
    pub agent_order: SimRng,
}

impl Streams {
    pub fn new(seed: u64) -> Self {
        Streams {
            failures: stream(seed, FAILURES),
            trickle: stream(seed, TRICKLE),
            agents: stream(seed, AGENTS),
            node_order: stream(seed, NODE_ORDER),
            agent_order: stream(seed, AGENT_ORDER),
        }
    }
}
