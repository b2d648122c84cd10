//! Deterministic splittable random streams.
//!
//! Monte-Carlo campaigns fan out over runs, shards, and symbol slots. Each
//! logical task draws from a ChaCha stream keyed by (master seed, stream id),
//! so results are bit-identical no matter how many workers execute the tasks
//! or in which order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// RNG for a logical stream `stream_id` under `master_seed`.
pub fn stream(master_seed: u64, stream_id: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(stream_id);
    rng
}
