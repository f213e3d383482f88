//! Replica-level parallelism with reproducible random streams.
//!
//! Replica `i` always draws from stream `i` of the ChaCha generator seeded by
//! the master seed, so results do not depend on scheduling or on whether the
//! `parallel` feature is enabled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn replica_rng(master: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(replica);
    rng
}

/// Runs `f(i, rng_i)` for `i in 0..count`, in parallel when the `parallel`
/// feature is on. Output order is replica order.
pub fn map_replicas<T, F>(master: u64, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(|i| f(i, &mut replica_rng(master, i as u64))).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_replicas_sequential(master, count, f)
    }
}

pub fn map_replicas_sequential<T, F>(master: u64, count: usize, f: F) -> Vec<T>
where
    F: Fn(usize, &mut ChaCha8Rng) -> T,
{
    (0..count).map(|i| f(i, &mut replica_rng(master, i as u64))).collect()
}

/// Parallel map over a slice, sequential without the `parallel` feature.
pub fn map_items<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn parallel_matches_sequential() {
        let draw = |_: usize, rng: &mut ChaCha8Rng| rng.gen::<u64>();
        assert_eq!(map_replicas(7, 64, draw), map_replicas_sequential(7, 64, draw));
        let a = map_replicas(7, 2, draw);
        assert_ne!(a[0], a[1]);
    }
}
