//! Data-parallel map with a sequential fallback.
//!
//! Work items carry their own derived seeds, so output never depends on
//! scheduling; order always matches the input. Building without the
//! `parallel` feature drops the rayon dependency entirely and every call
//! runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, preserving order.
///
/// `jobs == 0` uses one worker per core, `jobs == 1` runs inline on the
/// calling thread, any other value builds a dedicated pool of that size.
#[cfg(feature = "parallel")]
pub fn map_items<I, O, F>(items: Vec<I>, jobs: usize, f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Sync + Send,
{
    match jobs {
        1 => items.into_iter().map(f).collect(),
        0 => items.into_par_iter().map(f).collect(),
        n => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("failed to build worker pool")
            .install(|| items.into_par_iter().map(f).collect()),
    }
}

/// Sequential build: `jobs` is accepted for API parity and ignored.
#[cfg(not(feature = "parallel"))]
pub fn map_items<I, O, F>(items: Vec<I>, _jobs: usize, f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Sync + Send,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_input_order() {
        let items: Vec<u64> = (0..1000).collect();
        for jobs in [0, 1, 3] {
            let out = map_items(items.clone(), jobs, |x| x * 2);
            assert_eq!(out, items.iter().map(|x| x * 2).collect::<Vec<_>>());
        }
    }
}
