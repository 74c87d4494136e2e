use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use walker_ruled::Params;

use crate::config::GridSection;

const BASES: [u64; 3] = [2, 3, 5];

/// Van der Corput radical inverse of `n` in `base`.
pub fn radical_inverse(mut n: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut x = 0.0;
    while n > 0 {
        x += (n % base) as f64 * scale;
        n /= base;
        scale *= inv;
    }
    x
}

/// `count` Halton points in the grid box, shifted modulo 1 by a random
/// offset drawn from ChaCha8 seeded with `seed`.
pub fn quasi_random_points(grid: &GridSection, count: usize, seed: u64) -> Vec<Params> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: [f64; 3] = std::array::from_fn(|_| rng.gen::<f64>());
    let axes = grid.axes();
    (1..=count as u64)
        .map(|n| {
            std::array::from_fn(|d| {
                let x = (radical_inverse(n, BASES[d]) + shift[d]).fract();
                axes[d].lerp(x)
            })
        })
        .collect()
}
