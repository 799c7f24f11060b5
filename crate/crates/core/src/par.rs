//! Index-parallel map used by the contraction and grid-product kernels.
//!
//! With the `parallel` feature the map runs on the rayon pool, otherwise it is
//! a plain loop. Output order is the index order in both cases and every
//! reduction downstream is done sequentially over that vector, so results do
//! not depend on the schedule.

use num_complex::Complex64;

#[cfg(feature = "parallel")]
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Pairwise (cascade) summation in a fixed tree order.
pub fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let (lo, hi) = xs.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let v = map_range(100, |i| i * i);
        assert!(v.iter().enumerate().all(|(i, &x)| x == i * i));
    }

    #[test]
    fn pairwise_matches_plain_sum_on_integers() {
        let xs: Vec<Complex64> = (0..37).map(|k| Complex64::new(k as f64, -(k as f64))).collect();
        let s = pairwise_sum(&xs);
        assert_eq!(s, Complex64::new(666.0, -666.0));
    }
}
