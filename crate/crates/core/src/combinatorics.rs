//! Canonical lexicographic enumeration of k-subsets.
//!
//! The position of a subset in this order is the index used for the
//! overlay selection vector, block sizes and retrieval selection vector.

use alloc::vec::Vec;

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Iterator over the k-subsets of `0..n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Subsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Subsets {
    pub fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        Subsets { n, current }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        // rightmost position that can still be incremented
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
        Some(out)
    }
}

/// All k-subsets of `0..n`, lexicographically ordered.
pub fn subsets(n: usize, k: usize) -> Subsets {
    Subsets::new(n, k)
}

/// Lexicographic rank of a sorted subset of `0..n` among all subsets of the
/// same size.
pub fn rank(n: usize, subset: &[usize]) -> usize {
    let k = subset.len();
    let mut r: u64 = 0;
    let mut prev: usize = 0;
    for (i, &c) in subset.iter().enumerate() {
        for j in prev..c {
            r += binomial(n - 1 - j, k - 1 - i);
        }
        prev = c + 1;
    }
    r as usize
}

/// Whether a slice is strictly increasing, i.e. a canonical set.
pub fn is_canonical(set: &[usize]) -> bool {
    set.windows(2).all(|w| w[0] < w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(40, 3), 9880);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(7, 0), 1);
    }

    #[test]
    fn enumeration_is_lexicographic_and_ranked() {
        for n in 0..8 {
            for k in 0..=n + 1 {
                let all: Vec<_> = subsets(n, k).collect();
                assert_eq!(all.len() as u64, binomial(n, k));
                for (i, s) in all.iter().enumerate() {
                    assert!(is_canonical(s));
                    assert_eq!(rank(n, s), i);
                }
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}
