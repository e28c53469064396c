//! Seeded random streams.
//!
//! Every consumer draws from ChaCha8 seeded with the user seed, on its own
//! stream id so that, say, a matrix and its right-hand side never share
//! numbers. Normals come from `rand_distr::StandardNormal` (ziggurat).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Clone, Copy)]
pub(crate) enum Stream {
    Matrix = 0,
    Rhs = 1,
    Sketch = 2,
    Check = 3,
}

pub(crate) fn stream(seed: u64, which: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which as u64);
    rng
}

pub(crate) fn fill_normal(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    for x in out.iter_mut() {
        *x = StandardNormal.sample(rng);
    }
}
