//! Reproducible random streams.
//!
//! Every random quantity in the crate is drawn from a [`StreamRng`] obtained
//! through [`stream_rng`]. The generator is Xoshiro256++; its 256-bit state is
//! filled by SplitMix64 from a 64-bit key derived from `(seed, stream_id)`:
//!
//! ```text
//! key   = splitmix64(seed ^ splitmix64(stream_id ^ 0x6A09E667F3BCC909))
//! s[i]  = successive splitmix64 outputs starting from key, i = 0..4
//! ```
//!
//! Streams are therefore counter-style: any stream can be built directly from
//! its id, without advancing or sharing any other generator. Parallel code
//! assigns disjoint stream ids to tasks and never shares generator state.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

pub type StreamRng = Xoshiro256PlusPlus;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_SALT: u64 = 0x6A09_E667_F3BC_C909;

/// One SplitMix64 output for the state `x` (the state is not advanced).
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream_rng(seed: u64, stream_id: u64) -> StreamRng {
    let mut state = splitmix64(seed ^ splitmix64(stream_id ^ STREAM_SALT));
    let mut bytes = [0u8; 32];
    for chunk in bytes.chunks_exact_mut(8) {
        state = state.wrapping_add(GOLDEN_GAMMA);
        chunk.copy_from_slice(&splitmix64(state).to_le_bytes());
    }
    Xoshiro256PlusPlus::from_seed(bytes)
}

/// Purposes of the streams used by the experiment harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Coefficients = 1,
    Frequencies = 2,
    Baseline = 3,
    Tuples = 4,
}

/// Packs `(purpose, replicate, slot)` into a stream id: purpose in the top
/// 8 bits, replicate in the next 32, slot in the low 24.
pub fn stream_id(purpose: Purpose, replicate: u64, slot: u64) -> u64 {
    assert!(replicate < 1 << 32, "replicate index out of range");
    assert!(slot < 1 << 24, "slot index out of range");
    ((purpose as u64) << 56) | (replicate << 24) | slot
}
