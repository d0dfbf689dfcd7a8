//! Retrieval sets: greedy max-hitting selection and retrievability checks.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::combinatorics::{binomial, is_canonical, subsets};
use crate::overlay::RepairOverlay;
use crate::rational::{int, Rational};
use crate::repair::BlockAssignment;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RetrievalError {
    #[error("retrieval size k = {k} exceeds n = {n}")]
    KTooLarge { k: usize, n: usize },
    #[error("{w} retrieval sets requested but only {available} k-subsets exist")]
    TooManySets { w: u64, available: u64 },
    #[error("{fixed} pre-determined sets exceed w = {w}")]
    TooManyFixed { fixed: usize, w: usize },
    #[error("pre-determined set has {got} nodes, expected k = {k}")]
    FixedWrongSize { got: usize, k: usize },
    #[error("pre-determined set references vertex {0} out of range")]
    FixedOutOfRange(usize),
    #[error("pre-determined set listed twice")]
    FixedDuplicate,
    #[error("only {found} distinct k-subsets available, {needed} needed")]
    Insufficient { found: usize, needed: usize },
}

/// Number of listed hyperedges containing `vertex`.
pub fn hit_count<E: AsRef<[usize]>>(vertex: usize, hyperedges: &[E]) -> usize {
    hyperedges
        .iter()
        .filter(|e| e.as_ref().contains(&vertex))
        .count()
}

/// The `w` retrieval sets: `w₁` pre-determined plus `w₂ = w − w₁` chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetrievalConfig {
    pub n: usize,
    pub k: usize,
    pub fixed: Vec<Vec<usize>>,
    pub chosen: Vec<Vec<usize>>,
}

impl RetrievalConfig {
    pub fn w(&self) -> usize {
        self.fixed.len() + self.chosen.len()
    }

    /// Fixed sets first, then chosen ones.
    pub fn all_sets(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.fixed.iter().chain(&self.chosen)
    }

    /// Candidate k-subsets `Q_1..Q_W` (canonical order, fixed sets removed).
    pub fn candidates(n: usize, k: usize, fixed: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let fixed: BTreeSet<&Vec<usize>> = fixed.iter().collect();
        subsets(n, k).filter(|q| !fixed.contains(q)).collect()
    }

    /// Selection vector `y` over [`Self::candidates`].
    pub fn selection_vector(&self) -> Vec<bool> {
        let chosen: BTreeSet<&Vec<usize>> = self.chosen.iter().collect();
        Self::candidates(self.n, self.k, &self.fixed)
            .iter()
            .map(|q| chosen.contains(q))
            .collect()
    }
}

/// Sorts, checks and deduplicates pre-determined sets.
pub fn normalize_fixed(
    n: usize,
    k: usize,
    fixed: &[Vec<usize>],
) -> Result<Vec<Vec<usize>>, RetrievalError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(fixed.len());
    for f in fixed {
        let mut s = f.clone();
        s.sort_unstable();
        s.dedup();
        if s.len() != k || f.len() != k {
            return Err(RetrievalError::FixedWrongSize { got: f.len(), k });
        }
        if let Some(&v) = s.iter().find(|&&v| v >= n) {
            return Err(RetrievalError::FixedOutOfRange(v));
        }
        if !seen.insert(s.clone()) {
            return Err(RetrievalError::FixedDuplicate);
        }
        out.push(s);
    }
    Ok(out)
}

/// Greedy recursive selection: take the vertex hitting the most
/// hyperedges (lowest id on ties), recurse on the hypergraph without it and
/// its hyperedges to complete `(k−1)`-sets around it, then top up with
/// k-sets avoiding it. Candidates equal to a pre-determined set are skipped.
pub fn retrieval_sets(
    overlay: &RepairOverlay,
    k: usize,
    w: usize,
    fixed: &[Vec<usize>],
) -> Result<RetrievalConfig, RetrievalError> {
    let n = overlay.n();
    if k > n {
        return Err(RetrievalError::KTooLarge { k, n });
    }
    let available = binomial(n, k);
    if w as u64 > available {
        return Err(RetrievalError::TooManySets {
            w: w as u64,
            available,
        });
    }
    let fixed = normalize_fixed(n, k, fixed)?;
    if fixed.len() > w {
        return Err(RetrievalError::TooManyFixed {
            fixed: fixed.len(),
            w,
        });
    }
    let needed = w - fixed.len();
    let skip: BTreeSet<Vec<usize>> = fixed.iter().cloned().collect();
    let vertices: Vec<usize> = (0..n).collect();
    let edges: Vec<&[usize]> = overlay
        .hyperedges()
        .iter()
        .map(|e| e.vertices.as_slice())
        .collect();
    let mut chosen = Vec::with_capacity(needed);
    let mut prefix = Vec::with_capacity(k);
    select(&vertices, &edges, k, needed, &mut prefix, &skip, &mut chosen);
    if chosen.len() < needed {
        return Err(RetrievalError::Insufficient {
            found: chosen.len(),
            needed,
        });
    }
    Ok(RetrievalConfig {
        n,
        k,
        fixed,
        chosen,
    })
}

/// The `w − w₁` non-fixed k-subsets hitting the most hyperedges of the
/// whole overlay, ties in canonical order. Unlike [`retrieval_sets`], hits
/// are never recounted on a reduced hypergraph, so no set hitting nothing is
/// chosen while a hitting one is left.
pub fn ranked_retrieval_sets(
    overlay: &RepairOverlay,
    k: usize,
    w: usize,
    fixed: &[Vec<usize>],
) -> Result<RetrievalConfig, RetrievalError> {
    // same argument checks and fixed-set normalization
    let base = retrieval_sets(overlay, k, w, fixed)?;
    let mut ranked: Vec<(usize, Vec<usize>)> = RetrievalConfig::candidates(overlay.n(), k, &base.fixed)
        .into_iter()
        .map(|q| (overlay.hyperedges().iter().filter(|e| e.hits(&q)).count(), q))
        .collect();
    ranked.sort_by_key(|(hits, _)| core::cmp::Reverse(*hits));
    Ok(RetrievalConfig {
        chosen: ranked.into_iter().take(base.chosen.len()).map(|(_, q)| q).collect(),
        ..base
    })
}

fn select(
    vertices: &[usize],
    edges: &[&[usize]],
    k: usize,
    w: usize,
    prefix: &mut Vec<usize>,
    skip: &BTreeSet<Vec<usize>>,
    out: &mut Vec<Vec<usize>>,
) {
    if w == 0 {
        return;
    }
    if k == 0 {
        let mut set = prefix.clone();
        set.sort_unstable();
        if !skip.contains(&set) {
            out.push(set);
        }
        return;
    }
    if vertices.len() < k {
        return;
    }
    let u = *vertices
        .iter()
        .max_by_key(|&&v| (hit_count(v, edges), core::cmp::Reverse(v)))
        .expect("nonempty vertex set");
    let rest: Vec<usize> = vertices.iter().copied().filter(|&v| v != u).collect();
    let remaining: Vec<&[usize]> = edges.iter().copied().filter(|e| !e.contains(&u)).collect();

    let start = out.len();
    prefix.push(u);
    select(&rest, &remaining, k - 1, w, prefix, skip, out);
    prefix.pop();
    let got = out.len() - start;
    if got < w {
        select(&rest, &remaining, k, w - got, prefix, skip, out);
    }
}

/// Whether the hyperedges hitting `set` carry at least `B` packets.
pub fn is_retrievable(set: &[usize], overlay: &RepairOverlay, assignment: &BlockAssignment) -> bool {
    packets_reachable(set, overlay, assignment) >= int(assignment.object_size())
}

/// Distinct coded packets stored on the nodes of `set`.
pub fn packets_reachable(
    set: &[usize],
    overlay: &RepairOverlay,
    assignment: &BlockAssignment,
) -> Rational {
    overlay
        .hyperedges()
        .iter()
        .filter(|e| e.hits(set))
        .map(|e| assignment.get(e.index))
        .sum()
}

/// Whether `set` is a sorted k-subset of `0..n`.
pub fn is_valid_set(n: usize, k: usize, set: &[usize]) -> bool {
    set.len() == k && is_canonical(set) && set.iter().all(|&v| v < n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn one_based(s: &[&[usize]]) -> Vec<Vec<usize>> {
        s.iter().map(|e| e.iter().map(|v| v - 1).collect()).collect()
    }

    fn five_node_overlay() -> RepairOverlay {
        RepairOverlay::new(
            5,
            2,
            3,
            one_based(&[&[1, 2, 3], &[3, 4, 5], &[1, 2, 5], &[2, 3, 4], &[1, 4, 5]]),
        )
        .unwrap()
    }

    #[test]
    fn hit_counts() {
        let o = five_node_overlay();
        assert_eq!(hit_count(0, o.hyperedges()), 3);
        let empty: [Vec<usize>; 0] = [];
        assert_eq!(hit_count(0, &empty), 0);
        let sparse = RepairOverlay::new(4, 1, 1, vec![vec![0, 1]]).unwrap();
        assert_eq!(hit_count(3, sparse.hyperedges()), 0);
    }

    #[test]
    fn five_node_fixture() {
        let o = five_node_overlay();
        let cfg = retrieval_sets(&o, 3, 6, &[]).unwrap();
        let got: BTreeSet<Vec<usize>> = cfg.chosen.iter().cloned().collect();
        let want: BTreeSet<Vec<usize>> = one_based(&[
            &[1, 2, 3],
            &[1, 3, 4],
            &[1, 3, 5],
            &[1, 2, 4],
            &[1, 4, 5],
            &[1, 2, 5],
        ])
        .into_iter()
        .collect();
        assert_eq!(got, want);
        assert_eq!(cfg.chosen.len(), 6);
    }

    #[test]
    fn empty_overlay_takes_every_subset() {
        let o = RepairOverlay::new(5, 1, 2, vec![]).unwrap();
        let cfg = retrieval_sets(&o, 2, 10, &[]).unwrap();
        let got: BTreeSet<Vec<usize>> = cfg.chosen.into_iter().collect();
        assert_eq!(got, subsets(5, 2).collect());
    }

    #[test]
    fn singletons_follow_residual_hit_order() {
        let o = RepairOverlay::new(5, 1, 3, one_based(&[&[1, 2], &[2, 3], &[2, 4], &[4, 5]]))
            .unwrap();
        let cfg = retrieval_sets(&o, 1, 5, &[]).unwrap();
        // replay: max-hitting vertex of the residual hypergraph each round
        let mut edges: Vec<Vec<usize>> = o.hyperedges().iter().map(|e| e.vertices.clone()).collect();
        let mut left: Vec<usize> = (0..5).collect();
        for set in &cfg.chosen {
            let best = left.iter().map(|&v| hit_count(v, &edges)).max().unwrap();
            let u = *left.iter().find(|&&v| hit_count(v, &edges) == best).unwrap();
            assert_eq!(set, &vec![u]);
            left.retain(|&v| v != u);
            edges.retain(|e| !e.contains(&u));
        }
        assert_eq!(cfg.chosen[0], vec![1]);
    }

    #[test]
    fn fixed_sets_are_skipped() {
        let o = five_node_overlay();
        let fixed = one_based(&[&[1, 2, 3], &[1, 3, 4]]);
        let cfg = retrieval_sets(&o, 3, 6, &fixed).unwrap();
        assert_eq!(cfg.chosen.len(), 4);
        assert!(cfg.chosen.iter().all(|s| !fixed.contains(s)));
        assert_eq!(cfg.w(), 6);
        let y = cfg.selection_vector();
        assert_eq!(y.len(), 10 - 2);
        assert_eq!(y.iter().filter(|b| **b).count(), 4);
    }

    #[test]
    fn errors() {
        let o = five_node_overlay();
        assert_eq!(
            retrieval_sets(&o, 6, 1, &[]),
            Err(RetrievalError::KTooLarge { k: 6, n: 5 })
        );
        assert_eq!(
            retrieval_sets(&o, 4, 6, &[]),
            Err(RetrievalError::TooManySets { w: 6, available: 5 })
        );
        assert_eq!(
            retrieval_sets(&o, 2, 1, &[vec![0, 1], vec![1, 2]]),
            Err(RetrievalError::TooManyFixed { fixed: 2, w: 1 })
        );
        assert_eq!(
            retrieval_sets(&o, 2, 2, &[vec![0, 1], vec![1, 0]]),
            Err(RetrievalError::FixedDuplicate)
        );
        assert_eq!(
            retrieval_sets(&o, 2, 2, &[vec![0, 1, 2]]),
            Err(RetrievalError::FixedWrongSize { got: 3, k: 2 })
        );
    }

    #[test]
    fn retrievability() {
        let o = RepairOverlay::new(3, 1, 2, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let a = BlockAssignment::with(2, [(0, int(1)), (2, int(1))]);
        assert!(is_retrievable(&[1], &o, &a));
        assert!(!is_retrievable(&[0], &o, &a));
        assert!(is_retrievable(&[0, 1, 2], &o, &a));
        let lonely = RepairOverlay::new(4, 1, 2, vec![vec![0, 1]]).unwrap();
        let b = BlockAssignment::with(2, [(0, int(2))]);
        assert!(!is_retrievable(&[3], &lonely, &b));
    }

    #[test]
    fn ranked_sets_skip_what_recursion_recounts_away() {
        let overlay = RepairOverlay::new(5, 1, 1, vec![vec![2, 4], vec![0, 3]]).unwrap();
        let recursive = retrieval_sets(&overlay, 1, 3, &[]).unwrap();
        assert_eq!(recursive.chosen, vec![vec![0], vec![2], vec![1]]);
        let ranked = ranked_retrieval_sets(&overlay, 1, 3, &[]).unwrap();
        assert_eq!(ranked.chosen, vec![vec![0], vec![2], vec![3]]);
        let with_fixed = ranked_retrieval_sets(&overlay, 1, 3, &[vec![4]]).unwrap();
        assert_eq!(with_fixed.fixed, vec![vec![4]]);
        assert_eq!(with_fixed.chosen, vec![vec![0], vec![2]]);
    }
}
