mod common;

use common::*;
use ifropt_core::combinatorics::subsets;
use ifropt_core::netgraph::{
    communication_costs, metric_closure, mst_from_seed, mst_weight, plan_weight, Link, MetricClosure,
    NetworkError, NetworkSpec, Transmission,
};
use proptest::prelude::*;

/// Closure of the graph where `seed` is merged into one vertex (index 0)
/// and each target keeps its own vertex.
fn contracted(closure: &MetricClosure, seed: &[usize], targets: &[usize]) -> MetricClosure {
    let m = targets.len() + 1;
    let mut cost = vec![0; m * m];
    for (a, &t) in targets.iter().enumerate() {
        let to_seed = seed.iter().map(|&s| closure.cost(s, t)).min().unwrap();
        cost[a + 1] = to_seed;
        cost[(a + 1) * m] = to_seed;
        for (b, &u) in targets.iter().enumerate() {
            cost[(a + 1) * m + b + 1] = closure.cost(t, u);
        }
    }
    MetricClosure::from_matrix(m, cost).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_a_metric_bounded_by_links(seed in any::<u64>(), n in 2usize..30, extra in 0usize..40) {
        let mut r = rng(seed);
        let net = random_sparse_network(&mut r, n, extra, 20);
        let c = metric_closure(&net);
        prop_assert!(c.is_metric());
        for i in 0..n {
            prop_assert_eq!(c.cost(i, i), 0);
            for j in 0..n {
                prop_assert_eq!(c.cost(i, j), c.cost(j, i));
                if i != j {
                    prop_assert!(c.cost(i, j) > 0);
                }
            }
        }
        for l in net.links() {
            prop_assert!(c.cost(l.u, l.v) <= l.cost);
        }
    }

    #[test]
    fn closure_of_a_metric_is_itself(seed in any::<u64>(), n in 2usize..12) {
        let mut r = rng(seed);
        let base = metric_closure(&random_sparse_network(&mut r, n, n, 9));
        let links = subsets(n, 2)
            .map(|p| Link { u: p[0], v: p[1], cost: base.cost(p[0], p[1]) })
            .collect();
        let complete = NetworkSpec::new(vec![1; n], links).unwrap();
        prop_assert_eq!(metric_closure(&complete), base.clone());
        prop_assert_eq!(communication_costs(&complete, Transmission::SingleHop).unwrap(), base);
    }

    #[test]
    fn seeded_tree_is_optimal(seed in any::<u64>(), n in 3usize..9) {
        let mut r = rng(seed);
        let c = metric_closure(&random_network(&mut r, n, 15, 1));
        let mut vertices: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            vertices.swap(i, (seed as usize + i * 7) % (i + 1));
        }
        let lost_count = 1 + (seed as usize % 3).min(n - 2);
        let (lost, rest) = vertices.split_at(lost_count);
        let seed_count = 1 + (seed as usize / 3) % rest.len();
        let survivors = &rest[..seed_count];
        let plan = mst_from_seed(&c, survivors, lost).unwrap();
        prop_assert_eq!(plan.len(), lost.len());
        let w = plan_weight(&plan);
        prop_assert_eq!(w, mst_weight(&contracted(&c, survivors, lost), &(0..=lost.len()).collect::<Vec<_>>()).unwrap());
        prop_assert_eq!(w, brute_force_refill(&c, survivors, lost));
    }
}

#[test]
fn single_hop_requires_every_link() {
    let net = NetworkSpec::new(
        vec![1, 1, 1],
        vec![Link { u: 0, v: 1, cost: 1 }, Link { u: 1, v: 2, cost: 1 }],
    )
    .unwrap();
    assert_eq!(metric_closure(&net).cost(0, 2), 2);
    assert!(matches!(
        communication_costs(&net, Transmission::SingleHop),
        Err(NetworkError::MissingLink(..))
    ));
}
