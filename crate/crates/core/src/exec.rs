//! Task executors for the data-parallel loops.
//!
//! Every parallel loop in the crate is a set of independent tasks over a
//! slice, each task owning one element. Results never depend on the order
//! in which tasks run, which [`Shuffled`] exists to check.

use core::sync::atomic::{AtomicU64, Ordering};

use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Runs `f(index, item)` once for every item.
pub trait Executor: Sync {
    fn for_each<T, F>(&self, items: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize, &mut T) + Sync + Send;
}

/// In-order execution on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn for_each<T, F>(&self, items: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize, &mut T) + Sync + Send,
    {
        for (i, item) in items.iter_mut().enumerate() {
            f(i, item);
        }
    }
}

/// Serial execution in a fresh random order on every call.
#[derive(Debug)]
pub struct Shuffled {
    state: AtomicU64,
}

impl Shuffled {
    pub fn new(seed: u64) -> Self {
        Self {
            state: AtomicU64::new(seed),
        }
    }
}

impl Executor for Shuffled {
    fn for_each<T, F>(&self, items: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize, &mut T) + Sync + Send,
    {
        let seed = self.state.fetch_add(0x9e37_79b9_7f4a_7c15, Ordering::Relaxed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<(usize, &mut T)> = items.iter_mut().enumerate().collect();
        order.shuffle(&mut rng);
        for (i, item) in order {
            f(i, item);
        }
    }
}
