use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator behind every chain: ChaCha with 8 rounds.
///
/// Chain `c` of a run seeded with `seed` uses
/// `ChaCha8Rng::seed_from_u64(seed)` switched to stream `c` with
/// `set_stream(c)`. Streams of a common key never overlap, and the output
/// is identical on every platform.
pub type ChainRng = ChaCha8Rng;

pub fn chain_rng(seed: u64, stream: u64) -> ChainRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
