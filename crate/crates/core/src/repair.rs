//! Failure patterns, optimal per-block repair order, and exact repair-cost
//! evaluation.
//!
//! For one lost block the cheapest way to restore all of its failed
//! replicas is a minimum spanning tree of the hyperedge with the surviving
//! replicas contracted to a single source. Costs are normalized by the
//! object size `B` and averaged over repairable failure patterns.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{binomial, subsets};
use crate::netgraph::{mst_from_seed, plan_weight, MetricClosure, Transfer};
use crate::overlay::{Hyperedge, RepairOverlay};
use crate::rational::{int, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepairError {
    #[error("failure pattern is empty")]
    EmptyPattern,
    #[error("failed vertex {0} out of range")]
    PatternOutOfRange(usize),
    #[error("{size} simultaneous failures exceed rho = {rho}")]
    NotRepairable { size: usize, rho: usize },
    #[error("pattern weight is negative")]
    NegativeWeight,
    #[error("pattern weights sum to zero")]
    ZeroTotalWeight,
    #[error("pattern listed twice in the failure model")]
    DuplicatePattern,
    #[error("block size on hyperedge {0} which is not in the overlay")]
    UnknownHyperedge(usize),
    #[error("block size on hyperedge {0} outside [0, B]")]
    BetaOutOfRange(usize),
}

/// A nonempty set of simultaneously failed vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FailurePattern(Vec<usize>);

impl FailurePattern {
    pub fn new(n: usize, mut nodes: Vec<usize>) -> Result<Self, RepairError> {
        nodes.sort_unstable();
        nodes.dedup();
        if nodes.is_empty() {
            return Err(RepairError::EmptyPattern);
        }
        if let Some(&v) = nodes.iter().find(|&&v| v >= n) {
            return Err(RepairError::PatternOutOfRange(v));
        }
        Ok(FailurePattern(nodes))
    }

    pub fn nodes(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_repairable(&self, rho: usize) -> bool {
        self.len() <= rho
    }
}

/// Every pattern with `1 ≤ |Υ| ≤ ρ`, by size then lexicographically.
pub fn repairable_patterns(n: usize, rho: usize) -> impl Iterator<Item = FailurePattern> {
    (1..=rho.min(n)).flat_map(move |t| subsets(n, t).map(FailurePattern))
}

pub fn repairable_count(n: usize, rho: usize) -> u64 {
    (1..=rho.min(n)).map(|t| binomial(n, t)).sum()
}

/// Probability law over repairable failure patterns.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum FailureModel {
    /// Every repairable pattern equally likely, all sizes pooled.
    #[default]
    Uniform,
    /// Explicit probabilities summing to one; unlisted patterns have
    /// probability zero.
    Weighted(Vec<(FailurePattern, Rational)>),
}

impl FailureModel {
    /// Normalizes nonnegative weights into probabilities.
    pub fn weighted(
        rho: usize,
        weights: Vec<(FailurePattern, Rational)>,
    ) -> Result<Self, RepairError> {
        let mut merged: BTreeMap<FailurePattern, Rational> = BTreeMap::new();
        for (p, w) in weights {
            if !p.is_repairable(rho) {
                return Err(RepairError::NotRepairable { size: p.len(), rho });
            }
            if w.is_negative() {
                return Err(RepairError::NegativeWeight);
            }
            if merged.insert(p, w).is_some() {
                return Err(RepairError::DuplicatePattern);
            }
        }
        let total: Rational = merged.values().sum();
        if total.is_zero() {
            return Err(RepairError::ZeroTotalWeight);
        }
        Ok(FailureModel::Weighted(
            merged
                .into_iter()
                .filter(|(_, w)| !w.is_zero())
                .map(|(p, w)| (p, w / &total))
                .collect(),
        ))
    }

    /// Patterns with positive probability.
    pub fn distribution(&self, n: usize, rho: usize) -> Vec<(FailurePattern, Rational)> {
        match self {
            FailureModel::Uniform => {
                let p = Rational::new(1.into(), repairable_count(n, rho).into());
                repairable_patterns(n, rho).map(|u| (u, p.clone())).collect()
            }
            FailureModel::Weighted(w) => w.clone(),
        }
    }
}

/// Block sizes `β_i` keyed by canonical hyperedge index, plus the object
/// size `B`. Values are integers except in relaxed mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockAssignment {
    object_size: u64,
    beta: BTreeMap<usize, Rational>,
}

impl BlockAssignment {
    pub fn new(object_size: u64) -> Self {
        BlockAssignment {
            object_size,
            beta: BTreeMap::new(),
        }
    }

    pub fn with(object_size: u64, beta: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut a = BlockAssignment::new(object_size);
        for (i, b) in beta {
            a.set(i, b);
        }
        a
    }

    pub fn object_size(&self) -> u64 {
        self.object_size
    }

    pub fn set(&mut self, index: usize, value: Rational) {
        if value.is_zero() {
            self.beta.remove(&index);
        } else {
            self.beta.insert(index, value);
        }
    }

    pub fn get(&self, index: usize) -> Rational {
        self.beta.get(&index).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero entries in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.beta.iter().map(|(&i, b)| (i, b))
    }

    /// Total coded packets `F = Σ β_i`.
    pub fn total(&self) -> Rational {
        self.beta.values().sum()
    }

    pub fn is_integral(&self) -> bool {
        self.beta.values().all(|b| b.is_integer())
    }

    /// Storage amount `α_v = Σ_{i: v∈E_i} β_i` of every vertex.
    pub fn storage_amounts(&self, overlay: &RepairOverlay) -> Vec<Rational> {
        let mut alpha = alloc::vec![Rational::zero(); overlay.n()];
        for e in overlay.hyperedges() {
            let b = self.get(e.index);
            for &v in &e.vertices {
                alpha[v] += &b;
            }
        }
        alpha
    }

    /// Checks `0 ≤ β_i ≤ B` and that nonzero blocks sit on overlay
    /// hyperedges.
    pub fn validate(&self, overlay: &RepairOverlay) -> Result<(), RepairError> {
        let cap = int(self.object_size);
        for (&i, b) in &self.beta {
            if !overlay.contains_index(i) {
                return Err(RepairError::UnknownHyperedge(i));
            }
            if b.is_negative() || *b > cap {
                return Err(RepairError::BetaOutOfRange(i));
            }
        }
        Ok(())
    }

    /// `(B, β) → (γB, γβ)`.
    pub fn scaled(&self, gamma: u64) -> Self {
        let g = int(gamma);
        BlockAssignment {
            object_size: self.object_size * gamma,
            beta: self.beta.iter().map(|(&i, b)| (i, b * &g)).collect(),
        }
    }
}

/// Repair of one lost block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRepair {
    /// Canonical hyperedge index.
    pub hyperedge: usize,
    /// Position of the hyperedge (block number) in the overlay.
    pub block: usize,
    pub transfers: Vec<Transfer>,
}

impl BlockRepair {
    pub fn weight(&self) -> u64 {
        plan_weight(&self.transfers)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairPlan {
    pub pattern: FailurePattern,
    pub blocks: Vec<BlockRepair>,
}

/// Optimal transfer order for every block that lost a replica; blocks are
/// planned independently.
pub fn plan_pattern_repair(
    overlay: &RepairOverlay,
    closure: &MetricClosure,
    pattern: &FailurePattern,
) -> Result<RepairPlan, RepairError> {
    check_pattern(overlay, pattern)?;
    let blocks = overlay
        .hyperedges()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.hits(pattern.nodes()))
        .map(|(block, e)| BlockRepair {
            hyperedge: e.index,
            block,
            transfers: block_transfers(closure, e, pattern),
        })
        .collect();
    Ok(RepairPlan {
        pattern: pattern.clone(),
        blocks,
    })
}

fn check_pattern(overlay: &RepairOverlay, pattern: &FailurePattern) -> Result<(), RepairError> {
    if let Some(&v) = pattern.nodes().iter().find(|&&v| v >= overlay.n()) {
        return Err(RepairError::PatternOutOfRange(v));
    }
    if !pattern.is_repairable(overlay.rho()) {
        return Err(RepairError::NotRepairable {
            size: pattern.len(),
            rho: overlay.rho(),
        });
    }
    Ok(())
}

fn block_transfers(closure: &MetricClosure, e: &Hyperedge, pattern: &FailurePattern) -> Vec<Transfer> {
    let (lost, survivors): (Vec<usize>, Vec<usize>) =
        e.vertices.iter().partition(|&&v| pattern.contains(v));
    mst_from_seed(closure, &survivors, &lost).expect("hyperedge larger than a repairable pattern")
}

/// Normalized repair cost of one pattern:
/// `(1/B) Σ_{lost blocks} β_i · (plan weight of block i)`.
pub fn pattern_repair_cost(
    overlay: &RepairOverlay,
    assignment: &BlockAssignment,
    pattern: &FailurePattern,
    closure: &MetricClosure,
) -> Result<Rational, RepairError> {
    let plan = plan_pattern_repair(overlay, closure, pattern)?;
    let total: Rational = plan
        .blocks
        .iter()
        .map(|b| assignment.get(b.hyperedge) * int(b.weight()))
        .sum();
    Ok(total / int(assignment.object_size()))
}

/// Expected normalized repair cost over repairable patterns, evaluated
/// pattern by pattern.
pub fn system_repair_cost(
    overlay: &RepairOverlay,
    assignment: &BlockAssignment,
    closure: &MetricClosure,
    model: &FailureModel,
) -> Result<Rational, RepairError> {
    let mut total = Rational::zero();
    for (pattern, p) in model.distribution(overlay.n(), overlay.rho()) {
        total += p * pattern_repair_cost(overlay, assignment, &pattern, closure)?;
    }
    Ok(total)
}

/// Linear objective coefficient of one hyperedge: the expected repair
/// weight of its block, so that `c_r = (1/B) Σ a_i β_i`.
pub fn hyperedge_coefficient(
    closure: &MetricClosure,
    rho: usize,
    vertices: &[usize],
    model: &FailureModel,
) -> Rational {
    let n = closure.n();
    let weight = |lost: &[usize]| -> u64 {
        let survivors: Vec<usize> = vertices
            .iter()
            .copied()
            .filter(|v| !lost.contains(v))
            .collect();
        plan_weight(&mst_from_seed(closure, &survivors, lost).expect("survivor exists"))
    };
    match model {
        FailureModel::Uniform => {
            // group patterns by their intersection with the hyperedge
            let outside = n - vertices.len();
            let mut total: u128 = 0;
            for t in 1..=rho.min(vertices.len() - 1) {
                let count: u64 = (0..=rho - t).map(|s| binomial(outside, s)).sum();
                for pick in subsets(vertices.len(), t) {
                    let lost: Vec<usize> = pick.iter().map(|&j| vertices[j]).collect();
                    total += count as u128 * weight(&lost) as u128;
                }
            }
            Rational::new(total.into(), repairable_count(n, rho).into())
        }
        FailureModel::Weighted(dist) => dist
            .iter()
            .filter_map(|(pattern, p)| {
                let lost: Vec<usize> = vertices
                    .iter()
                    .copied()
                    .filter(|&v| pattern.contains(v))
                    .collect();
                (!lost.is_empty()).then(|| p * int(weight(&lost)))
            })
            .sum(),
    }
}

/// Coefficients `a_i` for every canonical `(ρ+1)`-subset.
pub fn objective_coefficients(
    closure: &MetricClosure,
    rho: usize,
    model: &FailureModel,
) -> Vec<Rational> {
    subsets(closure.n(), rho + 1)
        .map(|e| hyperedge_coefficient(closure, rho, &e, model))
        .collect()
}

/// `(1/B) Σ a_i β_i` for coefficients indexed by canonical hyperedge.
pub fn linear_repair_cost(coefficients: &[Rational], assignment: &BlockAssignment) -> Rational {
    let total: Rational = assignment
        .entries()
        .map(|(i, b)| &coefficients[i] * b)
        .sum();
    total / int(assignment.object_size())
}

/// Patterns drawn i.i.d. from the failure model.
pub fn sample_patterns(
    model: &FailureModel,
    n: usize,
    rho: usize,
    trials: u64,
    seed: u64,
) -> Vec<FailurePattern> {
    let dist = model.distribution(n, rho);
    let picks = sample_indices(&dist, trials, seed);
    picks.into_iter().map(|i| dist[i].0.clone()).collect()
}

fn sample_indices(dist: &[(FailurePattern, Rational)], trials: u64, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if dist.is_empty() {
        return Vec::new();
    }
    let uniform = dist.windows(2).all(|w| w[0].1 == w[1].1);
    if uniform {
        (0..trials).map(|_| rng.random_range(0..dist.len())).collect()
    } else {
        let weights = WeightedIndex::new(dist.iter().map(|(_, p)| to_f64(p)))
            .expect("positive probabilities");
        (0..trials).map(|_| weights.sample(&mut rng)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub trials: u64,
    pub mean: f64,
    /// Standard error of the mean.
    pub stderr: f64,
}

/// Sample mean of the pattern repair cost under the failure model.
pub fn monte_carlo_repair_cost(
    overlay: &RepairOverlay,
    assignment: &BlockAssignment,
    closure: &MetricClosure,
    model: &FailureModel,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloEstimate, RepairError> {
    let dist = model.distribution(overlay.n(), overlay.rho());
    let costs: Vec<f64> = dist
        .iter()
        .map(|(p, _)| pattern_repair_cost(overlay, assignment, p, closure).map(|c| to_f64(&c)))
        .collect::<Result<_, _>>()?;
    // Welford
    let (mut mean, mut m2, mut k) = (0.0f64, 0.0f64, 0u64);
    for i in sample_indices(&dist, trials, seed) {
        k += 1;
        let x = costs[i];
        let delta = x - mean;
        mean += delta / k as f64;
        m2 += delta * (x - mean);
    }
    let stderr = if k > 1 {
        libm_sqrt(m2 / (k - 1) as f64 / k as f64)
    } else {
        0.0
    };
    Ok(MonteCarloEstimate {
        trials: k,
        mean,
        stderr,
    })
}

// core has no f64::sqrt without std
fn libm_sqrt(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let mut r = if x > 1.0 { x } else { 1.0 };
    for _ in 0..100 {
        let next = 0.5 * (r + x / r);
        if (next - r).abs() <= f64::EPSILON * r {
            return next;
        }
        r = next;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use alloc::vec;

    fn closure3() -> MetricClosure {
        // c_12 = 1, c_13 = 2, c_23 = 3
        MetricClosure::from_matrix(3, vec![0, 1, 2, 1, 0, 3, 2, 3, 0]).unwrap()
    }

    fn fixture3() -> (RepairOverlay, BlockAssignment) {
        let o = RepairOverlay::new(3, 1, 2, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let a = BlockAssignment::with(2, [(0, int(1)), (2, int(1))]);
        (o, a)
    }

    #[test]
    fn pattern_counts() {
        assert_eq!(repairable_patterns(6, 2).count(), 21);
        let p: Vec<_> = repairable_patterns(3, 1).map(|p| p.0).collect();
        assert_eq!(p, [vec![0], vec![1], vec![2]]);
        assert_eq!(repairable_patterns(4, 4).count(), 15);
        assert_eq!(repairable_count(4, 4), 15);
    }

    #[test]
    fn plan_two_failures_in_one_block() {
        let c = MetricClosure::from_matrix(3, vec![0, 1, 4, 1, 0, 2, 4, 2, 0]).unwrap();
        let o = RepairOverlay::new(3, 2, 1, vec![vec![0, 1, 2]]).unwrap();
        let p = FailurePattern::new(3, vec![1, 2]).unwrap();
        let plan = plan_pattern_repair(&o, &c, &p).unwrap();
        assert_eq!(plan.blocks.len(), 1);
        let t: Vec<(usize, usize)> = plan.blocks[0].transfers.iter().map(|t| (t.helper, t.target)).collect();
        assert_eq!(t, [(0, 1), (1, 2)]);
        assert_eq!(plan.blocks[0].weight(), 3);
    }

    #[test]
    fn plan_rejects_too_many_failures() {
        let (o, _) = fixture3();
        let p = FailurePattern::new(3, vec![0, 1]).unwrap();
        assert_eq!(
            plan_pattern_repair(&o, &closure3(), &p),
            Err(RepairError::NotRepairable { size: 2, rho: 1 })
        );
    }

    #[test]
    fn pattern_cost_fixture() {
        let (o, a) = fixture3();
        let c = closure3();
        let p = |v| FailurePattern::new(3, vec![v]).unwrap();
        assert_eq!(pattern_repair_cost(&o, &a, &p(1), &c).unwrap(), int(2));
        assert_eq!(pattern_repair_cost(&o, &a, &p(0), &c).unwrap(), ratio(1, 2));
        assert_eq!(pattern_repair_cost(&o, &a, &p(2), &c).unwrap(), ratio(3, 2));
        let empty = BlockAssignment::new(2);
        assert!(pattern_repair_cost(&o, &empty, &p(1), &c).unwrap().is_zero());
        assert_eq!(
            pattern_repair_cost(&o, &a.scaled(2), &p(1), &c).unwrap(),
            int(2)
        );
    }

    #[test]
    fn system_cost_fixture() {
        let (o, a) = fixture3();
        let c = closure3();
        let cr = system_repair_cost(&o, &a, &c, &FailureModel::Uniform).unwrap();
        assert_eq!(cr, ratio(4, 3));
        let coef = objective_coefficients(&c, 1, &FailureModel::Uniform);
        assert_eq!(coef[0], ratio(2, 3));
        assert_eq!(linear_repair_cost(&coef, &a), cr);
        assert!(coef.iter().all(|a| a.is_positive()));
        assert!(system_repair_cost(&o, &BlockAssignment::new(2), &c, &FailureModel::Uniform)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn weighted_model() {
        let (o, a) = fixture3();
        let c = closure3();
        let p = |v| FailurePattern::new(3, vec![v]).unwrap();
        let m = FailureModel::weighted(1, vec![(p(1), int(3)), (p(2), int(1))]).unwrap();
        // 3/4 * 2 + 1/4 * 3/2
        let want = ratio(15, 8);
        assert_eq!(system_repair_cost(&o, &a, &c, &m).unwrap(), want);
        let coef = objective_coefficients(&c, 1, &m);
        assert_eq!(linear_repair_cost(&coef, &a), want);
        assert_eq!(
            FailureModel::weighted(1, vec![(FailurePattern::new(3, vec![0, 1]).unwrap(), int(1))]),
            Err(RepairError::NotRepairable { size: 2, rho: 1 })
        );
        assert_eq!(
            FailureModel::weighted(1, vec![(p(0), int(0))]),
            Err(RepairError::ZeroTotalWeight)
        );
        assert_eq!(
            FailureModel::weighted(1, vec![(p(0), ratio(-1, 2))]),
            Err(RepairError::NegativeWeight)
        );
    }

    #[test]
    fn assignment_accounting() {
        let (o, a) = fixture3();
        assert_eq!(a.total(), int(2));
        let alpha = a.storage_amounts(&o);
        assert_eq!(alpha, [int(1), int(2), int(1)]);
        let sum: Rational = alpha.iter().sum();
        assert_eq!(sum, int(2) * a.total());
        assert!(a.validate(&o).is_ok());
        let bad = BlockAssignment::with(2, [(1, int(1))]);
        assert_eq!(bad.validate(&o), Err(RepairError::UnknownHyperedge(1)));
        let big = BlockAssignment::with(2, [(0, int(3))]);
        assert_eq!(big.validate(&o), Err(RepairError::BetaOutOfRange(0)));
    }

    #[test]
    fn monte_carlo_basics() {
        let (o, a) = fixture3();
        let c = closure3();
        let m = FailureModel::Uniform;
        let one = monte_carlo_repair_cost(&o, &a, &c, &m, 1, 7).unwrap();
        let drawn = sample_patterns(&m, 3, 1, 1, 7);
        let direct = pattern_repair_cost(&o, &a, &drawn[0], &c).unwrap();
        assert_eq!(one.mean, to_f64(&direct));
        let x = monte_carlo_repair_cost(&o, &a, &c, &m, 1000, 42).unwrap();
        let y = monte_carlo_repair_cost(&o, &a, &c, &m, 1000, 42).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn sqrt_helper() {
        for x in [0.0, 1e-12, 0.25, 2.0, 1e6] {
            let r = libm_sqrt(x);
            assert!((r * r - x).abs() <= 1e-12 * x.max(1.0));
        }
    }
}
