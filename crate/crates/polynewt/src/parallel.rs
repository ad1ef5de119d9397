//! Thread-pool executor.

use polynewt_core::Executor;
use rayon::prelude::*;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "POLYNEWT_THREADS";

/// Runs tasks on a dedicated rayon pool.
#[derive(Debug)]
pub struct Rayon {
    pool: rayon::ThreadPool,
}

impl Rayon {
    /// A pool of `threads` workers, or rayon's default when `None`.
    pub fn new(threads: Option<usize>) -> Result<Self, rayon::ThreadPoolBuildError> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(t) = threads {
            builder = builder.num_threads(t);
        }
        Ok(Self { pool: builder.build()? })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

/// Reads the thread cap from the environment.
pub fn threads_from_env() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(format!("{THREADS_ENV} must be a positive integer, got `{v}`")),
        },
        Err(e) => Err(format!("{THREADS_ENV}: {e}")),
    }
}

impl Executor for Rayon {
    fn for_each<T, F>(&self, items: &mut [T], f: F)
    where
        T: Send,
        F: Fn(usize, &mut T) + Sync + Send,
    {
        self.pool
            .install(|| items.par_iter_mut().enumerate().for_each(|(i, t)| f(i, t)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn visits_every_item_once() {
        let exec = Rayon::new(Some(3)).unwrap();
        assert_eq!(exec.threads(), 3);
        let mut v = vec![0usize; 1000];
        exec.for_each(&mut v, |i, x| *x += i + 1);
        assert!(v.iter().enumerate().all(|(i, &x)| x == i + 1));
    }
}
