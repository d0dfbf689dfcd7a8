//! Storage network, its metric closure and the spanning-tree primitives
//! used for hyperedge weights and repair plans.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

/// Per-packet cost, always a nonnegative integer.
pub type Cost = u64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetworkError {
    #[error("network has no nodes")]
    Empty,
    #[error("duplicate node id {0}")]
    DuplicateNode(i64),
    #[error("node id {id} outside 1..={n}")]
    NodeIdOutOfRange { id: i64, n: usize },
    #[error("node {0} has a negative storage cost")]
    NegativeStorageCost(i64),
    #[error("edge references unknown node {0}")]
    UnknownNode(i64),
    #[error("self-loop on node {0}")]
    SelfLoop(i64),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(i64, i64),
    #[error("edge {0}-{1} has a negative cost")]
    NegativeCost(i64, i64),
    #[error("Disconnected: node {0} is unreachable from node 1")]
    Disconnected(i64),
    #[error("single-hop mode needs a direct link between {0} and {1}")]
    MissingLink(i64, i64),
    #[error("cost matrix is not a symmetric {0}x{0} matrix with zero diagonal")]
    MalformedMatrix(usize),
    #[error("vertex set is empty")]
    EmptySet,
    #[error("no surviving seed vertex to repair from")]
    EmptySeed,
    #[error("vertex {0} is both a seed and a target")]
    Overlap(usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
}

/// A node as written in an instance file (1-based id, signed for validation).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawNode {
    pub id: i64,
    pub storage_cost: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawEdge {
    pub u: i64,
    pub v: i64,
    pub cost: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawNetwork {
    pub nodes: Vec<RawNode>,
    pub edges: Vec<RawEdge>,
}

/// Undirected link between 0-based vertices, `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Link {
    pub u: usize,
    pub v: usize,
    pub cost: Cost,
}

/// A validated, connected storage network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkSpec {
    storage_costs: Vec<Cost>,
    links: Vec<Link>,
}

/// How communication costs derive from single-hop costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Transmission {
    /// Cheapest multi-hop path.
    #[default]
    MultiHop,
    /// Direct links only; every pair must be linked.
    SingleHop,
}

/// Validates a raw 1-based description.
pub fn build_network(raw: &RawNetwork) -> Result<NetworkSpec, NetworkError> {
    let n = raw.nodes.len();
    if n == 0 {
        return Err(NetworkError::Empty);
    }
    let mut storage = vec![None; n];
    for node in &raw.nodes {
        if node.id < 1 || node.id as u64 > n as u64 {
            return Err(NetworkError::NodeIdOutOfRange { id: node.id, n });
        }
        let slot = &mut storage[node.id as usize - 1];
        if slot.is_some() {
            return Err(NetworkError::DuplicateNode(node.id));
        }
        if node.storage_cost < 0 {
            return Err(NetworkError::NegativeStorageCost(node.id));
        }
        *slot = Some(node.storage_cost as Cost);
    }
    let storage: Vec<Cost> = storage.into_iter().map(|s| s.unwrap_or(0)).collect();

    let mut seen = BTreeSet::new();
    let mut links = Vec::with_capacity(raw.edges.len());
    for e in &raw.edges {
        for id in [e.u, e.v] {
            if id < 1 || id as u64 > n as u64 {
                return Err(NetworkError::UnknownNode(id));
            }
        }
        if e.u == e.v {
            return Err(NetworkError::SelfLoop(e.u));
        }
        if e.cost < 0 {
            return Err(NetworkError::NegativeCost(e.u, e.v));
        }
        let (u, v) = (e.u.min(e.v) as usize - 1, e.u.max(e.v) as usize - 1);
        if !seen.insert((u, v)) {
            return Err(NetworkError::DuplicateEdge(e.u, e.v));
        }
        links.push(Link { u, v, cost: e.cost as Cost });
    }
    NetworkSpec::new(storage, links)
}

impl NetworkSpec {
    /// Builds a network from 0-based links; checks loops, duplicates and
    /// connectivity.
    pub fn new(storage_costs: Vec<Cost>, links: Vec<Link>) -> Result<Self, NetworkError> {
        let n = storage_costs.len();
        if n == 0 {
            return Err(NetworkError::Empty);
        }
        let mut seen = BTreeSet::new();
        let mut normalized = Vec::with_capacity(links.len());
        for l in links {
            let (u, v) = (l.u.min(l.v), l.u.max(l.v));
            if v >= n {
                return Err(NetworkError::UnknownNode(v as i64 + 1));
            }
            if u == v {
                return Err(NetworkError::SelfLoop(u as i64 + 1));
            }
            if !seen.insert((u, v)) {
                return Err(NetworkError::DuplicateEdge(u as i64 + 1, v as i64 + 1));
            }
            normalized.push(Link { u, v, cost: l.cost });
        }
        let spec = NetworkSpec {
            storage_costs,
            links: normalized,
        };
        if let Some(v) = spec.first_unreachable() {
            return Err(NetworkError::Disconnected(v as i64 + 1));
        }
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.storage_costs.len()
    }

    pub fn storage_costs(&self) -> &[Cost] {
        &self.storage_costs
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    fn first_unreachable(&self) -> Option<usize> {
        let n = self.n();
        let mut adj = vec![Vec::new(); n];
        for l in &self.links {
            adj[l.u].push(l.v);
            adj[l.v].push(l.u);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().position(|s| !s)
    }
}

/// Communication cost matrix of the complete graph over the storage nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricClosure {
    n: usize,
    cost: Vec<Cost>,
}

impl MetricClosure {
    /// Wraps a row-major matrix. It must be symmetric with a zero diagonal;
    /// the triangle inequality is not required (see [`Self::is_metric`]).
    pub fn from_matrix(n: usize, cost: Vec<Cost>) -> Result<Self, NetworkError> {
        if n == 0 || cost.len() != n * n {
            return Err(NetworkError::MalformedMatrix(n));
        }
        for i in 0..n {
            if cost[i * n + i] != 0 {
                return Err(NetworkError::MalformedMatrix(n));
            }
            for j in 0..i {
                if cost[i * n + j] != cost[j * n + i] {
                    return Err(NetworkError::MalformedMatrix(n));
                }
            }
        }
        Ok(MetricClosure { n, cost })
    }

    /// Every off-diagonal entry equal to `c`.
    pub fn uniform(n: usize, c: Cost) -> Self {
        let mut cost = vec![c; n * n];
        for i in 0..n {
            cost[i * n + i] = 0;
        }
        MetricClosure { n, cost }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn cost(&self, i: usize, j: usize) -> Cost {
        self.cost[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Cost] {
        &self.cost[i * self.n..(i + 1) * self.n]
    }

    pub fn is_metric(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| self.cost(i, k) <= self.cost(i, j) + self.cost(j, k)))
        })
    }
}

/// All-pairs cheapest-path costs (Floyd–Warshall).
pub fn metric_closure(spec: &NetworkSpec) -> MetricClosure {
    let n = spec.n();
    let mut dist: Vec<Option<Cost>> = vec![None; n * n];
    for i in 0..n {
        dist[i * n + i] = Some(0);
    }
    for l in spec.links() {
        let c = Some(l.cost);
        let cur = &mut dist[l.u * n + l.v];
        if cur.is_none_or(|d| l.cost < d) {
            *cur = c;
            dist[l.v * n + l.u] = c;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = dist[i * n + k] else { continue };
            for j in 0..n {
                if let Some(kj) = dist[k * n + j] {
                    let via = ik.saturating_add(kj);
                    let cur = &mut dist[i * n + j];
                    if cur.is_none_or(|d| via < d) {
                        *cur = Some(via);
                    }
                }
            }
        }
    }
    // connectivity is a NetworkSpec invariant
    let cost = dist.into_iter().map(|d| d.unwrap_or(Cost::MAX)).collect();
    MetricClosure { n, cost }
}

/// Communication costs under the chosen transmission mode.
pub fn communication_costs(
    spec: &NetworkSpec,
    mode: Transmission,
) -> Result<MetricClosure, NetworkError> {
    match mode {
        Transmission::MultiHop => Ok(metric_closure(spec)),
        Transmission::SingleHop => {
            let n = spec.n();
            let mut cost: Vec<Option<Cost>> = vec![None; n * n];
            for i in 0..n {
                cost[i * n + i] = Some(0);
            }
            for l in spec.links() {
                cost[l.u * n + l.v] = Some(l.cost);
                cost[l.v * n + l.u] = Some(l.cost);
            }
            if let Some(pos) = cost.iter().position(Option::is_none) {
                let (i, j) = (pos / n, pos % n);
                return Err(NetworkError::MissingLink(i as i64 + 1, j as i64 + 1));
            }
            Ok(MetricClosure {
                n,
                cost: cost.into_iter().flatten().collect(),
            })
        }
    }
}

fn check_vertices(closure: &MetricClosure, set: &[usize]) -> Result<(), NetworkError> {
    match set.iter().find(|&&v| v >= closure.n()) {
        Some(&v) => Err(NetworkError::VertexOutOfRange(v)),
        None => Ok(()),
    }
}

/// Weight of a minimum spanning tree of the closure restricted to `set`
/// (Prim, `O(|set|²)`).
pub fn mst_weight(closure: &MetricClosure, set: &[usize]) -> Result<Cost, NetworkError> {
    if set.is_empty() {
        return Err(NetworkError::EmptySet);
    }
    check_vertices(closure, set)?;
    let m = set.len();
    let mut in_tree = vec![false; m];
    let mut best: Vec<Cost> = vec![Cost::MAX; m];
    in_tree[0] = true;
    for j in 1..m {
        best[j] = closure.cost(set[0], set[j]);
    }
    let mut total: Cost = 0;
    for _ in 1..m {
        let (next, w) = (0..m)
            .filter(|&j| !in_tree[j])
            .map(|j| (j, best[j]))
            .min_by_key(|&(_, w)| w)
            .expect("pending vertex");
        in_tree[next] = true;
        total = total.saturating_add(w);
        for j in 0..m {
            if !in_tree[j] {
                best[j] = best[j].min(closure.cost(set[next], set[j]));
            }
        }
    }
    Ok(total)
}

/// One block copy: `helper` sends to `target` at `cost` per packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Transfer {
    pub helper: usize,
    pub target: usize,
    pub cost: Cost,
}

/// Prim's algorithm on the graph where all of `seed` is contracted into one
/// source vertex. Each transfer's helper is a seed member or an earlier
/// target. Ties go to the lexicographically smallest `(helper, target)`.
pub fn mst_from_seed(
    closure: &MetricClosure,
    seed: &[usize],
    targets: &[usize],
) -> Result<Vec<Transfer>, NetworkError> {
    if seed.is_empty() {
        return Err(NetworkError::EmptySeed);
    }
    check_vertices(closure, seed)?;
    check_vertices(closure, targets)?;
    if let Some(&v) = targets.iter().find(|t| seed.contains(t)) {
        return Err(NetworkError::Overlap(v));
    }
    let mut pending: Vec<usize> = targets.to_vec();
    pending.sort_unstable();
    pending.dedup();

    // cheapest attachment per pending target, smallest helper on ties
    let attach = |helpers: &mut dyn Iterator<Item = usize>, t: usize| {
        helpers
            .map(|h| (closure.cost(h, t), h))
            .min()
            .expect("nonempty helper set")
    };
    let mut best: Vec<(Cost, usize)> = pending
        .iter()
        .map(|&t| attach(&mut seed.iter().copied(), t))
        .collect();

    let mut out = Vec::with_capacity(pending.len());
    while !pending.is_empty() {
        let pick = (0..pending.len())
            .min_by_key(|&j| (best[j].0, best[j].1, pending[j]))
            .expect("pending target");
        let target = pending.remove(pick);
        let (cost, helper) = best.remove(pick);
        out.push(Transfer {
            helper,
            target,
            cost,
        });
        for (j, &t) in pending.iter().enumerate() {
            let cand = (closure.cost(target, t), target);
            if cand < best[j] {
                best[j] = cand;
            }
        }
    }
    Ok(out)
}

/// Sum of transfer costs.
pub fn plan_weight(transfers: &[Transfer]) -> Cost {
    transfers.iter().map(|t| t.cost).sum()
}
