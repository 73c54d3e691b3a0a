//! Deterministic subset enumeration helpers.

use itertools::Itertools;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::sum::CompensatedSum;

/// Work items per parallel chunk. Fixed so that the reduction tree does not
/// depend on the thread count.
pub(crate) const CHUNK: usize = 256;

/// All subsets of `0..n` of size `k`, in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

/// Members of the bitmask `mask`, ascending.
pub(crate) fn mask_members(mask: u64, n: usize) -> impl Iterator<Item = usize> {
    (0..n).filter(move |&i| mask >> i & 1 == 1)
}

/// Binomial coefficient as a float.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `n! / (n-k)!`
pub(crate) fn falling_factorial(n: usize, k: usize) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

pub(crate) fn factorial(n: usize) -> f64 {
    falling_factorial(n, n)
}

/// `ln n!`
pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// Sums `f(item)` over `items` in parallel with a fixed chunked reduction order.
pub(crate) fn par_sum<T: Sync>(items: &[T], f: impl Fn(&T) -> Complex64 + Sync) -> Complex64 {
    let partials: Vec<CompensatedSum> = items
        .par_chunks(CHUNK)
        .map(|chunk| chunk.iter().map(&f).collect())
        .collect();
    let mut total = CompensatedSum::new();
    for p in &partials {
        total.merge(p);
    }
    total.value()
}

/// Sums `f(mask)` over `0..count` in parallel with a fixed chunked reduction order.
pub(crate) fn par_sum_range(count: u64, f: impl Fn(u64) -> Complex64 + Sync) -> Complex64 {
    let chunk = CHUNK as u64;
    let chunks = count.div_ceil(chunk);
    let partials: Vec<CompensatedSum> = (0..chunks)
        .into_par_iter()
        .map(|c| (c * chunk..((c + 1) * chunk).min(count)).map(&f).collect())
        .collect();
    let mut total = CompensatedSum::new();
    for p in &partials {
        total.merge(p);
    }
    total.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(binomial(16, 10), 8008.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(falling_factorial(5, 2), 20.0);
        assert_eq!(factorial(0), 1.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-14);
        assert_eq!(mask_members(0b1011, 4).collect::<Vec<_>>(), vec![0, 1, 3]);
    }
}
