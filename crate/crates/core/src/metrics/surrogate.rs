use rand::seq::SliceRandom;

use crate::rng;

/// Uniformly random permutation of `series` (Fisher–Yates under the seed).
pub fn shuffle_surrogate(series: &[f64], seed: u64) -> Vec<f64> {
    let mut out = series.to_vec();
    out.shuffle(&mut rng::seeded(seed));
    out
}
