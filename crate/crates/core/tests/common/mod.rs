#![allow(dead_code)]

use ifropt_core::combinatorics::{binomial, subsets};
use ifropt_core::netgraph::{Cost, Link};
use ifropt_core::optimizer::ProblemInstance;
use ifropt_core::rational::int;
use ifropt_core::{FailureModel, NetworkSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complete network with random link costs in `1..=max_cost`.
pub fn random_network(rng: &mut ChaCha8Rng, n: usize, max_cost: Cost, max_storage: Cost) -> NetworkSpec {
    let links = subsets(n, 2)
        .map(|p| Link {
            u: p[0],
            v: p[1],
            cost: rng.random_range(1..=max_cost),
        })
        .collect();
    let storage = (0..n).map(|_| rng.random_range(1..=max_storage)).collect();
    NetworkSpec::new(storage, links).unwrap()
}

/// Random connected network: a random spanning path plus extra links.
pub fn random_sparse_network(rng: &mut ChaCha8Rng, n: usize, extra: usize, max_cost: Cost) -> NetworkSpec {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut pairs = std::collections::BTreeSet::new();
    for w in order.windows(2) {
        pairs.insert((w[0].min(w[1]), w[0].max(w[1])));
    }
    for _ in 0..extra {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            pairs.insert((u.min(v), u.max(v)));
        }
    }
    let links = pairs
        .into_iter()
        .map(|(u, v)| Link {
            u,
            v,
            cost: rng.random_range(1..=max_cost),
        })
        .collect();
    NetworkSpec::new(vec![1; n], links).unwrap()
}

pub struct Shape {
    pub n: usize,
    pub rho: usize,
    pub d: usize,
    pub k: usize,
    pub w: usize,
    pub object_size: u64,
}

/// Random instance of the given shape; with `fixed` one retrieval set is
/// pinned in advance when `w ≥ 2`.
pub fn random_instance(rng: &mut ChaCha8Rng, shape: &Shape, cap: u64, fixed: bool) -> ProblemInstance {
    let net = random_network(rng, shape.n, 9, 3);
    let fixed_sets = if fixed && shape.w >= 2 {
        let all: Vec<Vec<usize>> = subsets(shape.n, shape.k).collect();
        vec![all[rng.random_range(0..all.len())].clone()]
    } else {
        Vec::new()
    };
    assert!(shape.w as u64 <= binomial(shape.n, shape.k));
    ProblemInstance::new(
        net,
        shape.rho,
        shape.d,
        shape.k,
        shape.w,
        fixed_sets,
        shape.object_size,
        int(cap),
        FailureModel::Uniform,
    )
}

/// A small random shape with `n` in `lo..=hi` and `ρ = 1`.
pub fn random_shape(rng: &mut ChaCha8Rng, lo: usize, hi: usize, max_b: u64) -> Shape {
    let n = rng.random_range(lo..=hi);
    let k = rng.random_range(1..=2.min(n - 1));
    let w = rng.random_range(1..=3.min(binomial(n, k) as usize));
    Shape {
        n,
        rho: 1,
        d: rng.random_range(1..=n - 1),
        k,
        w,
        object_size: rng.random_range(1..=max_b),
    }
}

use ifropt_core::netgraph::MetricClosure;
use ifropt_core::rational::Rational;
use ifropt_core::repair::system_repair_cost;
use ifropt_core::{BlockAssignment, RepairOverlay};
use num_traits::Zero;

/// Cheapest way to refill `lost` when `survivors` still hold the block:
/// every newcomer order, every helper among survivors and earlier
/// newcomers.
pub fn brute_force_refill(closure: &MetricClosure, survivors: &[usize], lost: &[usize]) -> Cost {
    fn go(closure: &MetricClosure, holders: &mut Vec<usize>, left: &mut Vec<usize>) -> Cost {
        if left.is_empty() {
            return 0;
        }
        let mut best = Cost::MAX;
        for pos in 0..left.len() {
            let t = left.remove(pos);
            for h in holders.clone() {
                holders.push(t);
                best = best.min(closure.cost(h, t) + go(closure, holders, left));
                holders.pop();
            }
            left.insert(pos, t);
        }
        best
    }
    go(closure, &mut survivors.to_vec(), &mut lost.to_vec())
}

/// Every `(c_r, c_s)` reachable with integral blocks, by enumerating all
/// `β ∈ {0..B}^m` whose support respects the degree bound.
pub fn achievable_pairs(inst: &ProblemInstance) -> Vec<(Rational, Rational)> {
    let n = inst.n();
    let b = inst.object_size;
    let edges: Vec<Vec<usize>> = subsets(n, inst.rho + 1).collect();
    let m = edges.len();
    let candidates: Vec<Vec<usize>> = subsets(n, inst.k)
        .filter(|s| !inst.fixed_sets.contains(s))
        .collect();
    let cap = &inst.storage_cap * int(b);
    let mut out = Vec::new();
    let mut beta = vec![0u64; m];
    loop {
        let mut degree = vec![0usize; n];
        for (i, e) in edges.iter().enumerate() {
            if beta[i] > 0 {
                for &v in e {
                    degree[v] += 1;
                }
            }
        }
        let reach = |set: &[usize]| -> u64 {
            edges
                .iter()
                .zip(&beta)
                .filter(|(e, _)| e.iter().any(|v| set.contains(v)))
                .map(|(_, &x)| x)
                .sum()
        };
        let storage: u64 = edges
            .iter()
            .zip(&beta)
            .map(|(e, &x)| x * e.iter().map(|&v| inst.network.storage_costs()[v]).sum::<u64>())
            .sum();
        let ok = degree.iter().all(|&g| g <= inst.d)
            && inst.fixed_sets.iter().all(|f| reach(f) >= b)
            && candidates.iter().filter(|c| reach(c) >= b).count() >= inst.free_sets()
            && int(storage) <= cap;
        if ok {
            let chosen: Vec<Vec<usize>> = edges
                .iter()
                .zip(&beta)
                .filter(|(_, &x)| x > 0)
                .map(|(e, _)| e.clone())
                .collect();
            let overlay = RepairOverlay::new(n, inst.rho, inst.d, chosen).unwrap();
            let assignment = BlockAssignment::with(
                b,
                overlay
                    .hyperedges()
                    .iter()
                    .map(|e| (e.index, int(beta[e.index]))),
            );
            let cr = system_repair_cost(&overlay, &assignment, &inst.closure, &inst.failure_model).unwrap();
            out.push((cr, int(storage) / int(b)));
        }
        // next β in base B+1
        let mut i = 0;
        while i < m && beta[i] == b {
            beta[i] = 0;
            i += 1;
        }
        if i == m {
            break;
        }
        beta[i] += 1;
    }
    out.sort();
    out.dedup();
    out
}

pub fn brute_force_optimum(inst: &ProblemInstance) -> Option<Rational> {
    achievable_pairs(inst).into_iter().map(|p| p.0).min()
}

/// Pairs not weakly dominated by a different pair, sorted by `c_r`.
pub fn dominance_filter(pairs: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let mut out: Vec<(Rational, Rational)> = pairs
        .iter()
        .filter(|p| !pairs.iter().any(|q| q != *p && q.0 <= p.0 && q.1 <= p.1))
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}
