//! Runs a plan on real bytes: encode, place, fail, repair, retrieve.

use ifropt_core::erasure::{materialize, mds_encode, ClusterState, MAX_PACKETS};
use ifropt_core::rational::{common_denominator, int, Rational};
use ifropt_core::repair::{pattern_repair_cost, plan_pattern_repair, RepairPlan};
use ifropt_core::{BlockAssignment, FailurePattern, MetricClosure, RepairOverlay};
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// The plan with integral block sizes: fractional sizes are multiplied by
/// their common denominator, which leaves every normalized cost unchanged.
pub fn integral_assignment(assignment: &BlockAssignment) -> CliResult<(u64, BlockAssignment)> {
    let gamma = common_denominator(assignment.entries().map(|(_, b)| b))
        .to_u64()
        .ok_or_else(|| CliError::usage("block sizes have an unusable common denominator"))?;
    let scaled = if gamma == 1 { assignment.clone() } else { assignment.scaled(gamma) };
    Ok((gamma, scaled))
}

pub fn coded_packets(assignment: &BlockAssignment) -> Option<usize> {
    assignment.total().to_integer().to_usize()
}

pub fn random_object(seed: u64, packets: usize, packet_len: usize) -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..packets).map(|_| (0..packet_len).map(|_| rng.random()).collect()).collect()
}

/// Places an integral plan on a fresh cluster.
pub fn deploy(
    overlay: &RepairOverlay,
    assignment: &BlockAssignment,
    source: &[Vec<u8>],
) -> CliResult<ClusterState> {
    let f = coded_packets(assignment).ok_or_else(|| CliError::usage("block sizes out of range"))?;
    if f > MAX_PACKETS {
        return Err(CliError::usage(format!("{f} coded packets exceed the field limit of {MAX_PACKETS}")));
    }
    let coded = mds_encode(source, f).map_err(CliError::usage)?;
    let state = materialize(overlay, assignment, &coded).map_err(CliError::internal)?;
    if !state.replication_holds() {
        return Err(CliError::internal("a block is not replicated on its whole hyperedge"));
    }
    Ok(state)
}

/// Link cost of an executed repair per source packet.
pub fn executed_cost(
    plan: &RepairPlan,
    assignment: &BlockAssignment,
    closure: &MetricClosure,
) -> Rational {
    let mut total = Rational::from_integer(0.into());
    for block in &plan.blocks {
        let size = assignment.get(block.hyperedge);
        for t in &block.transfers {
            total += &size * int(closure.cost(t.helper, t.target));
        }
    }
    total / int(assignment.object_size())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ByteCheck {
    /// Factor applied to fractional block sizes.
    pub scale: u64,
    pub source_packets: u64,
    pub coded_packets: usize,
    pub packet_len: usize,
    pub patterns: usize,
    pub bytes_transferred: u64,
    /// Largest |executed − analytic| normalized pattern cost.
    pub max_discrepancy: f64,
    pub restored: bool,
    pub retrieval_sets_decoded: usize,
}

/// Repairs every pattern on its own copy of the deployed cluster and
/// decodes from every retrieval set.
pub fn byte_check(
    overlay: &RepairOverlay,
    assignment: &BlockAssignment,
    closure: &MetricClosure,
    patterns: &[FailurePattern],
    retrieval: &[Vec<usize>],
    packet_len: usize,
    seed: u64,
) -> CliResult<ByteCheck> {
    let (gamma, scaled) = integral_assignment(assignment)?;
    let b = scaled.object_size();
    let b_usize = usize::try_from(b).map_err(CliError::usage)?;
    if b_usize > MAX_PACKETS {
        return Err(CliError::usage(format!("{b} source packets exceed the field limit")));
    }
    let source = random_object(seed, b_usize, packet_len);
    let state = deploy(overlay, &scaled, &source)?;
    let mut report = ByteCheck {
        scale: gamma,
        source_packets: b,
        coded_packets: coded_packets(&scaled).unwrap_or(0),
        packet_len,
        patterns: 0,
        bytes_transferred: 0,
        max_discrepancy: 0.0,
        restored: true,
        retrieval_sets_decoded: 0,
    };
    let mut worst = Rational::from_integer(0.into());
    for pattern in patterns {
        let plan = plan_pattern_repair(overlay, closure, pattern).map_err(CliError::internal)?;
        let mut s = state.clone();
        s.fail(pattern).map_err(CliError::internal)?;
        let r = s.execute_repair(&plan).map_err(CliError::internal)?;
        report.bytes_transferred += r.bytes_transferred;
        let analytic = pattern_repair_cost(overlay, assignment, pattern, closure).map_err(CliError::internal)?;
        let diff = (executed_cost(&plan, &scaled, closure) - analytic).abs();
        if diff > worst {
            worst = diff;
        }
        report.restored &= s == state;
        report.patterns += 1;
    }
    report.max_discrepancy = ifropt_core::rational::to_f64(&worst);
    for set in retrieval {
        if state.retrieve(set).map_err(CliError::internal)? != source {
            return Err(CliError::internal(format!("retrieval set {set:?} decoded the wrong object")));
        }
        report.retrieval_sets_decoded += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ifropt_core::netgraph::{metric_closure, Link, NetworkSpec};
    use ifropt_core::rational::ratio;
    use ifropt_core::repair::repairable_patterns;

    #[test]
    fn fractional_plan_is_scaled_before_execution() {
        let links = vec![Link { u: 0, v: 1, cost: 1 }, Link { u: 1, v: 2, cost: 2 }];
        let closure = metric_closure(&NetworkSpec::new(vec![1; 3], links).unwrap());
        let overlay = RepairOverlay::new(3, 1, 2, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let assignment = BlockAssignment::with(1, [(0, ratio(1, 2)), (1, ratio(1, 2)), (2, ratio(1, 2))]);
        let patterns: Vec<_> = repairable_patterns(3, 1).collect();
        let sets = vec![vec![0, 1], vec![1, 2]];
        let r = byte_check(&overlay, &assignment, &closure, &patterns, &sets, 8, 7).unwrap();
        assert_eq!(r.scale, 2);
        assert_eq!(r.coded_packets, 3);
        assert_eq!(r.max_discrepancy, 0.0);
        assert!(r.restored);
        assert_eq!(r.retrieval_sets_decoded, 2);
    }
}
