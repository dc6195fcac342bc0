use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ArmSpec, BanditInstance};

/// What an algorithm is allowed to see of the environment: the number of arms
/// and fresh samples. True moments stay on the harness side.
pub trait RewardSource {
    fn num_arms(&self) -> usize;

    /// One reward in `[0, 1]` from arm `arm`.
    fn pull(&mut self, arm: usize) -> f64;
}

/// Reward streams for one trial. Every arm owns an independent ChaCha stream
/// keyed by `(seed, arm)`, so the `k`-th sample of an arm does not depend on
/// the order in which arms are pulled.
#[derive(Debug, Clone)]
pub struct SeededEnvironment {
    arms: Vec<ArmSpec>,
    streams: Vec<ChaCha8Rng>,
}

impl SeededEnvironment {
    pub fn new(instance: &BanditInstance, seed: u64) -> Self {
        let arms = instance.arms().to_vec();
        let streams = (0..arms.len())
            .map(|arm| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(arm as u64);
                rng
            })
            .collect();
        Self { arms, streams }
    }
}

impl RewardSource for SeededEnvironment {
    fn num_arms(&self) -> usize {
        self.arms.len()
    }

    fn pull(&mut self, arm: usize) -> f64 {
        self.arms[arm].sample(&mut self.streams[arm])
    }
}

/// Mixes a base seed with a path of indices (instance, trial, ...) into a
/// well-spread 64-bit seed using SplitMix64 finalisation.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    let mut state = splitmix(base);
    for &part in path {
        state = splitmix(state ^ splitmix(part.wrapping_add(0x9e37_79b9_7f4a_7c15)));
    }
    state
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
