//! Pairwise (tree) summation with a fixed reduction order.

use num_complex::Complex64;

const BLOCK: usize = 32;

/// `Σ_{i<n} f(i)` summed pairwise over blocks of [`BLOCK`] terms.
///
/// The reduction tree depends only on `n`, so results are reproducible
/// bit-for-bit and rounding error grows like `O(log n)`.
pub(crate) fn pairwise<F: Fn(usize) -> Complex64>(n: usize, f: &F) -> Complex64 {
    pairwise_range(0, n, f)
}

fn pairwise_range<F: Fn(usize) -> Complex64>(lo: usize, hi: usize, f: &F) -> Complex64 {
    if hi - lo <= BLOCK {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in lo..hi {
            acc += f(i);
        }
        acc
    } else {
        let mid = lo + (hi - lo) / 2;
        pairwise_range(lo, mid, f) + pairwise_range(mid, hi, f)
    }
}
