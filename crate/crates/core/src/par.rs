//! Chunked map over integer ranges, rayon-backed when the `parallel`
//! feature is on.  Results always come back in chunk order, so any fold
//! done by the caller is independent of scheduling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

pub const DEFAULT_CHUNK: u64 = 4096;

/// Split `lo..=hi` into chunks of `chunk` and map each.
pub fn map_chunks<T, F>(lo: u64, hi: u64, chunk: u64, exec: Exec, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
{
    if lo > hi {
        return Vec::new();
    }
    let chunk = chunk.max(1);
    let n = (hi - lo) / chunk + 1;
    let bounds = move |k: u64| {
        let a = lo + k * chunk;
        (a, (a + chunk - 1).min(hi))
    };
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(|k| {
                let (a, b) = bounds(k);
                f(a, b)
            }).collect()
        }
        _ => (0..n).map(|k| {
            let (a, b) = bounds(k);
            f(a, b)
        }).collect(),
    }
}

/// Run `f` on a dedicated pool of `n` workers.  Without the `parallel`
/// feature this just calls `f`.
pub fn with_workers<R: Send>(n: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    if n == 0 {
        return Err(Error::InvalidArgument("worker count must be positive".into()));
    }
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
        Ok(pool.install(f))
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok(f())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_range_in_order() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            let v = map_chunks(3, 20, 5, exec, |a, b| (a, b));
            assert_eq!(v, vec![(3, 7), (8, 12), (13, 17), (18, 20)]);
        }
        assert!(map_chunks(5, 4, 1, Exec::Parallel, |a, _| a).is_empty());
    }
}
