//! Data-parallel execution helpers. With the `parallel` feature (default)
//! the hot loops fan out over the rayon pool; without it everything runs on
//! the calling thread. Reduction order is fixed (index order) in either mode
//! so results are identical.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n` and collects in index order.
pub fn map_indexed<U: Send>(n: usize, f: impl Fn(usize) -> U + Sync + Send) -> Vec<U> {
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Always-sequential reference path, kept for the benchmark comparison.
pub fn map_indexed_seq<U>(n: usize, f: impl Fn(usize) -> U) -> Vec<U> {
    (0..n).map(f).collect()
}

/// Splits `0..n` into fixed-size chunks, maps each chunk to a partial value,
/// then folds the partials in chunk order. The chunk size is a constant, not
/// thread-count dependent, so the result is bitwise reproducible.
pub fn sum_chunked(
    n: usize,
    chunk: usize,
    f: impl Fn(std::ops::Range<usize>) -> f64 + Sync + Send,
) -> f64 {
    let chunks: Vec<std::ops::Range<usize>> = (0..n)
        .step_by(chunk.max(1))
        .map(|s| s..(s + chunk).min(n))
        .collect();
    let partials: Vec<f64> = {
        #[cfg(feature = "parallel")]
        {
            chunks.into_par_iter().map(f).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            chunks.into_iter().map(f).collect()
        }
    };
    partials.iter().sum()
}

/// Sequential twin of [`sum_chunked`].
pub fn sum_chunked_seq(n: usize, chunk: usize, f: impl Fn(std::ops::Range<usize>) -> f64) -> f64 {
    let partials: Vec<f64> = (0..n)
        .step_by(chunk.max(1))
        .map(|s| f(s..(s + chunk).min(n)))
        .collect();
    partials.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunked_sum_matches_sequential() {
        let f = |r: std::ops::Range<usize>| r.map(|i| (i as f64).sqrt()).sum::<f64>();
        let a = sum_chunked(10_000, 128, f);
        let b = sum_chunked_seq(10_000, 128, f);
        assert_eq!(a, b);
    }
}
