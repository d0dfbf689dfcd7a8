//! Repair overlays: `(ρ+1)`-uniform hypergraphs with bounded vertex degree,
//! their IFR-code form, and the greedy minimum-spanning-tree overlay.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::combinatorics::{self, binomial, subsets};
use crate::netgraph::{mst_weight, Cost, MetricClosure};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OverlayError {
    #[error("hyperedge size rho+1 = {size} exceeds the {n} vertices")]
    HyperedgeTooLarge { size: usize, n: usize },
    #[error("hyperedge has {got} vertices, expected {expected}")]
    WrongCardinality { got: usize, expected: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("vertex {vertex} has degree {degree} > d = {d}")]
    DegreeExceeded { vertex: usize, degree: usize, d: usize },
    #[error("duplicate hyperedge")]
    DuplicateHyperedge,
    #[error("block {block} is stored on {count} nodes, expected rho+1 = {expected}")]
    ReplicationViolation {
        block: usize,
        count: usize,
        expected: usize,
    },
    #[error("code has {got} node sets, expected {expected}")]
    NodeCountMismatch { got: usize, expected: usize },
}

/// Every `(ρ+1)`-subset of `0..n` in canonical order.
pub fn enumerate_hyperedges(n: usize, rho: usize) -> Result<Vec<Vec<usize>>, OverlayError> {
    check_size(n, rho)?;
    Ok(subsets(n, rho + 1).collect())
}

fn check_size(n: usize, rho: usize) -> Result<(), OverlayError> {
    if rho + 1 > n {
        return Err(OverlayError::HyperedgeTooLarge { size: rho + 1, n });
    }
    Ok(())
}

/// A hyperedge with its canonical enumeration index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperedge {
    pub index: usize,
    pub vertices: Vec<usize>,
}

impl Hyperedge {
    pub fn new(n: usize, mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        let index = combinatorics::rank(n, &vertices);
        Hyperedge { index, vertices }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn hits(&self, set: &[usize]) -> bool {
        set.iter().any(|&v| self.contains(v))
    }
}

impl AsRef<[usize]> for Hyperedge {
    fn as_ref(&self) -> &[usize] {
        &self.vertices
    }
}

/// A repair overlay. Hyperedge order is the block order of the equivalent
/// IFR code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairOverlay {
    n: usize,
    rho: usize,
    d: usize,
    edges: Vec<Hyperedge>,
}

impl RepairOverlay {
    pub fn new(
        n: usize,
        rho: usize,
        d: usize,
        hyperedges: Vec<Vec<usize>>,
    ) -> Result<Self, OverlayError> {
        check_size(n, rho)?;
        let mut degree = vec![0usize; n];
        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(hyperedges.len());
        for mut e in hyperedges {
            e.sort_unstable();
            e.dedup();
            if e.len() != rho + 1 {
                return Err(OverlayError::WrongCardinality {
                    got: e.len(),
                    expected: rho + 1,
                });
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(OverlayError::VertexOutOfRange(v));
            }
            for &v in &e {
                degree[v] += 1;
                if degree[v] > d {
                    return Err(OverlayError::DegreeExceeded {
                        vertex: v,
                        degree: degree[v],
                        d,
                    });
                }
            }
            let h = Hyperedge::new(n, e);
            if !seen.insert(h.index) {
                return Err(OverlayError::DuplicateHyperedge);
            }
            edges.push(h);
        }
        Ok(RepairOverlay { n, rho, d, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> usize {
        self.rho
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn hyperedges(&self) -> &[Hyperedge] {
        &self.edges
    }

    /// Number of hyperedges θ.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in &e.vertices {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.edges.iter().any(|e| e.index == index)
    }

    pub fn by_index(&self, index: usize) -> Option<&Hyperedge> {
        self.edges.iter().find(|e| e.index == index)
    }

    /// Canonical indices, ascending.
    pub fn canonical_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = self.edges.iter().map(|e| e.index).collect();
        idx.sort_unstable();
        idx
    }

    pub fn selection(&self) -> OverlaySelection {
        let mut bits = vec![false; binomial(self.n, self.rho + 1) as usize];
        for e in &self.edges {
            bits[e.index] = true;
        }
        OverlaySelection {
            n: self.n,
            rho: self.rho,
            bits,
        }
    }
}

/// Indicator vector `x` over the canonical hyperedge enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlaySelection {
    pub n: usize,
    pub rho: usize,
    pub bits: Vec<bool>,
}

impl OverlaySelection {
    /// Degree constraint `Σ_{i: v∈Ẽ_i} x_i ≤ d` for every vertex.
    pub fn satisfies_degree(&self, d: usize) -> bool {
        let mut deg = vec![0usize; self.n];
        for (e, _) in subsets(self.n, self.rho + 1)
            .zip(&self.bits)
            .filter(|(_, &b)| b)
        {
            for v in e {
                deg[v] += 1;
            }
        }
        deg.iter().all(|&k| k <= d)
    }

    /// Overlay with hyperedges in canonical order.
    pub fn to_overlay(&self, d: usize) -> Result<RepairOverlay, OverlayError> {
        let edges = subsets(self.n, self.rho + 1)
            .zip(&self.bits)
            .filter(|(_, &b)| b)
            .map(|(e, _)| e)
            .collect();
        RepairOverlay::new(self.n, self.rho, d, edges)
    }
}

/// Irregular fractional repetition code: node `v` stores the blocks in
/// `sets[v]`; blocks are `0..θ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IfrCode {
    pub sets: Vec<BTreeSet<usize>>,
}

impl IfrCode {
    pub fn theta(&self) -> usize {
        self.sets
            .iter()
            .filter_map(|s| s.iter().next_back())
            .max()
            .map_or(0, |&b| b + 1)
    }
}

/// Node `v` stores block `i` iff `v ∈ E_i`.
pub fn overlay_to_ifr(overlay: &RepairOverlay) -> IfrCode {
    let mut sets = vec![BTreeSet::new(); overlay.n()];
    for (i, e) in overlay.hyperedges().iter().enumerate() {
        for &v in &e.vertices {
            sets[v].insert(i);
        }
    }
    IfrCode { sets }
}

/// Inverse of [`overlay_to_ifr`]: block `i` becomes the hyperedge of nodes
/// holding it.
pub fn ifr_to_overlay(
    code: &IfrCode,
    n: usize,
    rho: usize,
    d: usize,
) -> Result<RepairOverlay, OverlayError> {
    if code.sets.len() != n {
        return Err(OverlayError::NodeCountMismatch {
            got: code.sets.len(),
            expected: n,
        });
    }
    for (v, s) in code.sets.iter().enumerate() {
        if s.len() > d {
            return Err(OverlayError::DegreeExceeded {
                vertex: v,
                degree: s.len(),
                d,
            });
        }
    }
    let theta = code.theta();
    let mut edges = vec![Vec::new(); theta];
    for (v, s) in code.sets.iter().enumerate() {
        for &b in s {
            edges[b].push(v);
        }
    }
    for (block, e) in edges.iter().enumerate() {
        if e.len() != rho + 1 {
            return Err(OverlayError::ReplicationViolation {
                block,
                count: e.len(),
                expected: rho + 1,
            });
        }
    }
    RepairOverlay::new(n, rho, d, edges)
}

/// Scans `order` and admits a hyperedge iff all its vertices still have
/// degree `< d`.
pub fn select_overlay_by_order(
    n: usize,
    rho: usize,
    d: usize,
    order: &[Vec<usize>],
) -> Result<RepairOverlay, OverlayError> {
    check_size(n, rho)?;
    let mut degree = vec![0usize; n];
    let mut admitted = Vec::new();
    for e in order {
        if e.len() != rho + 1 {
            return Err(OverlayError::WrongCardinality {
                got: e.len(),
                expected: rho + 1,
            });
        }
        if let Some(&v) = e.iter().find(|&&v| v >= n) {
            return Err(OverlayError::VertexOutOfRange(v));
        }
        if e.iter().all(|&v| degree[v] < d) {
            for &v in e {
                degree[v] += 1;
            }
            admitted.push(e.clone());
        }
    }
    RepairOverlay::new(n, rho, d, admitted)
}

/// A candidate hyperedge with its MST weight in the closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedHyperedge {
    pub edge: Hyperedge,
    pub mst_weight: Cost,
}

/// All `(ρ+1)`-subsets sorted by ascending MST weight; ties keep canonical
/// order.
pub fn ranked_hyperedges(
    closure: &MetricClosure,
    rho: usize,
) -> Result<Vec<WeightedHyperedge>, OverlayError> {
    let n = closure.n();
    check_size(n, rho)?;
    let mut ranked: Vec<WeightedHyperedge> = subsets(n, rho + 1)
        .enumerate()
        .map(|(index, vertices)| {
            let mst_weight = mst_weight(closure, &vertices).expect("nonempty in-range set");
            WeightedHyperedge {
                edge: Hyperedge { index, vertices },
                mst_weight,
            }
        })
        .collect();
    ranked.sort_by_key(|w| w.mst_weight);
    Ok(ranked)
}

/// Greedy overlay: admit hyperedges in ascending MST weight under the
/// degree cap.
pub fn greedy_overlay(
    closure: &MetricClosure,
    rho: usize,
    d: usize,
) -> Result<RepairOverlay, OverlayError> {
    let order: Vec<Vec<usize>> = ranked_hyperedges(closure, rho)?
        .into_iter()
        .map(|w| w.edge.vertices)
        .collect();
    select_overlay_by_order(closure.n(), rho, d, &order)
}
