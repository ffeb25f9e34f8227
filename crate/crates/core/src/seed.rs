// Copyright 2026 The partcorr Authors
// SPDX-License-Identifier: Apache-2.0

//! Deterministic derivation of independent random streams.
//!
//! Every random stream in a run is keyed by `(master_seed, history, channel, ...)`
//! so results never depend on which worker processed which history.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream index used for quantities shared by all histories.
pub const SHARED: u64 = u64::MAX;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a sequence of keys into a single 64-bit seed.
pub fn derive(keys: &[u64]) -> u64 {
    keys.iter()
        .fold(0x6a09_e667_f3bc_c908, |acc, &k| splitmix64(acc ^ splitmix64(k)))
}

pub fn stream(keys: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(keys))
}
