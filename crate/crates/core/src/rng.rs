//! Seeded generators shared by every randomized routine.
//!
//! All randomness comes from ChaCha8 seeded with a `u64`. Multi-worker runs give worker
//! `i` the same seed on stream `i`, so the single-worker reference run is exactly
//! stream 0 and streams never overlap.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn worker_stream(seed: u64, worker: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker);
    rng
}

/// Splits `total` units of work over `workers`, earlier workers taking the remainder.
pub(crate) fn split_work(total: u64, workers: usize) -> Vec<u64> {
    let workers = workers.max(1) as u64;
    (0..workers).map(|i| total / workers + u64::from(i < total % workers)).collect()
}

#[cfg(test)]
mod tests {
    use rand::Rng;

    use super::*;

    #[test]
    fn stream_zero_is_the_plain_seed() {
        let a: Vec<u64> = (0..8)
            .map({
                let mut r = seeded(7);
                move |_| r.random()
            })
            .collect();
        let b: Vec<u64> = (0..8)
            .map({
                let mut r = worker_stream(7, 0);
                move |_| r.random()
            })
            .collect();
        assert_eq!(a, b);
        let c: u64 = worker_stream(7, 1).random();
        assert_ne!(a[0], c);
    }

    #[test]
    fn split_covers_total() {
        assert_eq!(split_work(10, 3), vec![4, 3, 3]);
        assert_eq!(split_work(2, 4), vec![1, 1, 0, 0]);
        assert_eq!(split_work(5, 0), vec![5]);
    }
}
