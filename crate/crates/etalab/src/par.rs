//! Data-parallel inner loops, with a sequential fallback when the
//! `parallel` feature is disabled.
//!
//! Two hot spots are parallelized: row elimination inside RREF (rows other
//! than the pivot row update independently) and the Tor rank grid (each
//! homology cell is an independent exact-rank computation). Results are
//! bit-identical in both modes; the feature only changes scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Apply `f` to every row (a mutable `stride`-sized chunk) of `entries`.
#[cfg(feature = "parallel")]
pub fn for_each_row<E: Send, G>(entries: &mut [E], stride: usize, f: G)
where
    G: Fn(usize, &mut [E]) + Send + Sync,
{
    if stride == 0 {
        return;
    }
    entries
        .par_chunks_mut(stride)
        .enumerate()
        .for_each(|(r, row)| f(r, row));
}

#[cfg(not(feature = "parallel"))]
pub fn for_each_row<E, G>(entries: &mut [E], stride: usize, f: G)
where
    G: Fn(usize, &mut [E]),
{
    if stride == 0 {
        return;
    }
    for (r, row) in entries.chunks_mut(stride).enumerate() {
        f(r, row);
    }
}

/// Map a list of independent jobs, preserving order.
#[cfg(feature = "parallel")]
pub fn map_jobs<T, U, G>(jobs: Vec<T>, f: G) -> Vec<U>
where
    T: Send,
    U: Send,
    G: Fn(T) -> U + Send + Sync,
{
    jobs.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_jobs<T, U, G>(jobs: Vec<T>, f: G) -> Vec<U>
where
    G: Fn(T) -> U,
{
    jobs.into_iter().map(f).collect()
}

/// Name of the active execution mode, used by benches and reports' logs.
pub fn mode() -> &'static str {
    if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "sequential"
    }
}
