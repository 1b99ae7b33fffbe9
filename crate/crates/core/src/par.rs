//! Deterministic data-parallel reductions.
//!
//! Every reduction splits its index range into fixed-size blocks, sums each
//! block sequentially with compensated summation and then folds the block
//! totals left to right. The block layout never depends on the thread
//! count, so the parallel and sequential paths return bit-identical results.

use std::ops::Range;

/// Block length used by all reductions.
pub const BLOCK: usize = 4096;

/// Execution policy for the inner loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential execution when the `parallel` feature is off.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Sizes the global worker pool. Results do not depend on the count; only
/// the first call has an effect, later calls report an error.
pub fn set_threads(n: usize) -> crate::Result<()> {
    if n == 0 {
        return Err(crate::Error::Domain(
            "thread count must be at least 1".into(),
        ));
    }
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| crate::Error::Capability(e.to_string()))
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok(())
    }
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl std::iter::FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

fn block_sum<F>(range: Range<usize>, f: &F) -> f64
where
    F: Fn(usize) -> f64,
{
    range.map(f).collect::<KahanSum>().value()
}

fn blocks(range: &Range<usize>) -> Vec<Range<usize>> {
    let mut out = Vec::with_capacity((range.end.saturating_sub(range.start)) / BLOCK + 1);
    let mut lo = range.start;
    while lo < range.end {
        let hi = (lo + BLOCK).min(range.end);
        out.push(lo..hi);
        lo = hi;
    }
    out
}

/// Sums `f(i)` over `range` with a fixed block decomposition.
pub fn sum_range<F>(exec: Exec, range: Range<usize>, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let parts = blocks(&range);
    let totals: Vec<f64> = match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            parts.into_par_iter().map(|r| block_sum(r, &f)).collect()
        }
        _ => parts.into_iter().map(|r| block_sum(r, &f)).collect(),
    };
    totals.into_iter().collect::<KahanSum>().value()
}

/// Sums `f(x)` over a slice with the same block layout as [`sum_range`].
pub fn sum_slice<T, F>(exec: Exec, items: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync + Send,
{
    sum_range(exec, 0..items.len(), |i| f(&items[i]))
}

/// Order-preserving map over a slice.
pub fn map_slice<T, U, F>(exec: Exec, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let f = |i: usize| ((i as f64) * 0.37).sin() / (1.0 + i as f64);
        let a = sum_range(Exec::Sequential, 0..100_003, f);
        let b = sum_range(Exec::Parallel, 0..100_003, f);
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = KahanSum::new();
        acc.add(1e16);
        for _ in 0..1000 {
            acc.add(1.0);
        }
        acc.add(-1e16);
        assert_eq!(acc.value(), 1000.0);
    }

    #[test]
    fn empty_range_sums_to_zero() {
        assert_eq!(sum_range(Exec::default(), 5..5, |_| 1.0), 0.0);
    }
}
