//! Seeded randomness.
//!
//! Every simulation is driven by one master seed. Independent sub-streams are
//! carved out of it by ChaCha stream id, so the instance realization never
//! depends on which policy is run against it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The random stream type used throughout the crate.
pub type SimRng = ChaCha8Rng;

const INSTANCE_STREAM: u64 = 0;
const POLICY_STREAM: u64 = 1;
const ENVIRONMENT_STREAM: u64 = 2;
const CONTEXT_STREAM: u64 = 3;

/// Fixed-offset sub-streams derived from one master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedStreams {
    seed: u64,
}

impl SeedStreams {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Stream used by instance generators.
    pub fn instance(&self) -> SimRng {
        self.stream(INSTANCE_STREAM)
    }

    /// Stream consumed by the policy (posterior samples, tie-breaks).
    pub fn policy(&self) -> SimRng {
        self.stream(POLICY_STREAM)
    }

    /// Stream used to draw rewards.
    pub fn environment(&self) -> SimRng {
        self.stream(ENVIRONMENT_STREAM)
    }

    /// Stream used to draw contexts in contextual runs.
    pub fn context(&self) -> SimRng {
        self.stream(CONTEXT_STREAM)
    }

    fn stream(&self, id: u64) -> SimRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(id);
        rng
    }
}

/// Index of the largest score, ties broken uniformly at random.
///
/// The stream is only consumed when a tie is actually encountered, so runs
/// over continuous samples are unaffected by the tie rule. NaN scores never win.
pub fn argmax_random_tie<R, I>(scores: I, rng: &mut R) -> Option<usize>
where
    R: Rng + ?Sized,
    I: IntoIterator<Item = (usize, f64)>,
{
    let mut best: Option<(usize, f64)> = None;
    let mut ties = 0u32;
    for (idx, score) in scores {
        if score.is_nan() {
            continue;
        }
        match best {
            None => {
                best = Some((idx, score));
                ties = 1;
            }
            Some((_, top)) if score > top => {
                best = Some((idx, score));
                ties = 1;
            }
            Some((_, top)) if score == top => {
                ties += 1;
                // Reservoir step: keep the newcomer with probability 1/ties.
                if rng.gen_range(0..ties) == 0 {
                    best = Some((idx, score));
                }
            }
            _ => {}
        }
    }
    best.map(|(idx, _)| idx)
}
