//! Execution policy for the data-parallel loops.
//!
//! With the `parallel` feature every helper here fans out over rayon's
//! current pool; without it, or inside [`sequential`], the same closures run
//! on the calling thread. Helpers always return results in index order, so
//! callers reduce in a fixed order and floating-point sums do not depend on
//! scheduling.

use std::cell::Cell;

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Run `f` with every helper in this module forced onto the calling thread.
pub fn sequential<R>(f: impl FnOnce() -> R) -> R {
    let prev = FORCE_SEQUENTIAL.with(|c| c.replace(true));
    let out = f();
    FORCE_SEQUENTIAL.with(|c| c.set(prev));
    out
}

/// True when the helpers will use rayon for the current call.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.with(|c| c.get())
}

/// `(0..n).map(f).collect()`, in parallel when enabled.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// `items.iter().map(f).collect()`, in parallel when enabled.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Fill `out[i] = f(i)` chunk by chunk.
pub fn fill_chunks<T, F>(out: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    let chunk = chunk.max(1);
    #[cfg(feature = "parallel")]
    if is_parallel() {
        use rayon::prelude::*;
        out.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(k, c)| f(k * chunk, c));
        return;
    }
    for (k, c) in out.chunks_mut(chunk).enumerate() {
        f(k * chunk, c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let v = map_range(1000, |i| i * i);
        assert!(v.iter().enumerate().all(|(i, &x)| x == i * i));
        let s = sequential(|| map_range(1000, |i| i * i));
        assert_eq!(v, s);
    }

    #[test]
    fn sequential_flag_is_scoped() {
        let before = is_parallel();
        sequential(|| assert!(!is_parallel()));
        assert_eq!(before, is_parallel());
    }

    #[test]
    fn chunks_cover_everything() {
        let mut v = vec![0usize; 1001];
        fill_chunks(&mut v, 64, |start, c| {
            for (k, x) in c.iter_mut().enumerate() {
                *x = start + k;
            }
        });
        assert!(v.iter().enumerate().all(|(i, &x)| x == i));
    }
}
