//! Data-parallel map with a sequential fallback.
//!
//! Results are returned in input order in both modes, so callers stay
//! deterministic regardless of scheduling.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    #[default]
    Parallel,
}

impl Mode {
    /// `Parallel` when the `parallel` feature is enabled.
    pub fn available() -> Self {
        if cfg!(feature = "parallel") {
            Mode::Parallel
        } else {
            Mode::Sequential
        }
    }
}

pub fn map<T, R, F>(mode: Mode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        Mode::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Caps the global worker pool; a no-op without the `parallel` feature.
pub fn set_threads(n: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global().is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_keep_order() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = map(Mode::Sequential, &xs, |x| x * x);
        let b = map(Mode::Parallel, &xs, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(a[999], 998001);
    }
}
