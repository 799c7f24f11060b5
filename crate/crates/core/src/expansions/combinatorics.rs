//! Partitions by cycle type, permutation signs, and the regrouping of an
//! exponential series into its power-series coefficients.

use crate::error::{CorrError, Result};

/// Largest `n` accepted by [`partitions`].
pub const MAX_PARTITION: usize = 8;

/// A partition of `n` written as pairs `(n_i, m_i)`: part `n_i` repeated
/// `m_i` times, distinct `n_i` in decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    pub pairs: Vec<(usize, usize)>,
}

impl Partition {
    pub fn nu(&self) -> usize {
        self.pairs.len()
    }

    pub fn total(&self) -> usize {
        self.pairs.iter().map(|(n, m)| n * m).sum()
    }
}

pub fn partitions(n: usize) -> Result<Vec<Partition>> {
    if n == 0 || n > MAX_PARTITION {
        return Err(CorrError::InvalidArgument(format!("partitions of {n} outside 1..={MAX_PARTITION}")));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(n, n, &mut current, &mut out);
    Ok(out)
}

fn fill(rest: usize, largest: usize, current: &mut Vec<(usize, usize)>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { pairs: current.clone() });
        return;
    }
    for part in (1..=largest.min(rest)).rev() {
        for count in 1..=rest / part {
            current.push((part, count));
            fill(rest - part * count, part - 1, current, out);
            current.pop();
        }
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Number of permutations of `n` with cycle type `p`:
/// `n! / prod_i (n_i^{m_i} m_i!)`.
pub fn multiplicity(p: &Partition) -> u64 {
    let denom: u64 = p.pairs.iter().map(|&(n, m)| (n as u64).pow(m as u32) * factorial(m)).product();
    factorial(p.total()) / denom
}

/// All permutations of `0..n` with their signs, in lexicographic order.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        out.push((perm.clone(), sign(&perm)));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

pub fn sign(perm: &[usize]) -> i32 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Coefficients `f_0 .. f_n` of `exp(sum_k lambda^k F_k)` given
/// `exps = [F_1, .., F_n]`, grouped by partition:
/// `f_n = sum_pi prod_i F_{n_i}^{m_i} / m_i!`.
pub fn resum(exps: &[f64]) -> Result<Vec<f64>> {
    let mut out = vec![1.0];
    for n in 1..=exps.len() {
        let mut acc = 0.0;
        for p in partitions(n)? {
            acc += p
                .pairs
                .iter()
                .map(|&(k, m)| exps[k - 1].powi(m as i32) / factorial(m) as f64)
                .product::<f64>();
        }
        out.push(acc);
    }
    Ok(out)
}
