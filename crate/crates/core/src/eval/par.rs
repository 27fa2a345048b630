//! Node-wise map with an optional rayon backend.

/// How per-node work is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    /// Data-parallel over nodes; falls back to sequential without the
    /// `parallel` feature.
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

/// Below this many nodes the thread-pool overhead outweighs the gain.
#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 64;

pub(crate) fn map_nodes<T, E, F>(mode: ExecMode, n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Parallel && n >= PAR_THRESHOLD {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}
