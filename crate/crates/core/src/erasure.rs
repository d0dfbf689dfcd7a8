//! GF(256) outer code and byte-level execution of storage plans.
//!
//! The field uses the reduction polynomial `x⁸+x⁴+x³+x²+1` (0x11D). The
//! `(F, B)` code is systematic: coded packet `i < B` is source packet `i`,
//! and parity packet `i ≥ B` has generator row `1 / (i ⊕ c)` for
//! `c = 0..B`. That parity block is a Cauchy matrix, so every `B` distinct
//! coded packets determine the source. Packet indices are 0-based.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_traits::ToPrimitive;

use crate::overlay::RepairOverlay;
use crate::repair::{BlockAssignment, FailurePattern, RepairPlan};

/// Largest supported number of coded packets.
pub const MAX_PACKETS: usize = 255;

/// Packet length used when none is given.
pub const DEFAULT_PACKET_LEN: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ErasureError {
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,
    #[error("{0} coded packets exceed the field limit of 255")]
    TooManyPackets(usize),
    #[error("code needs at least as many coded packets as source packets (B = {b}, F = {f})")]
    TooFewPackets { b: usize, f: usize },
    #[error("object has no source packets")]
    EmptyObject,
    #[error("packet {0} has the wrong length")]
    PacketLength(usize),
    #[error("need {need} distinct packets, got {have}")]
    InsufficientPackets { have: usize, need: usize },
    #[error("packet index {0} outside the code")]
    IndexOutOfRange(usize),
    #[error("decoding matrix is singular; packets are corrupt")]
    Singular,
    #[error("block sizes do not partition the coded packets: {0}")]
    PartitionMismatch(&'static str),
    #[error("node {node} does not hold block {block}")]
    IntegrityViolation { node: usize, block: usize },
    #[error("node {0} is not failed")]
    NotFailed(usize),
    #[error("node {0} is out of range")]
    NodeOutOfRange(usize),
}

const fn build_tables() -> ([u8; 512], [u8; 256]) {
    let mut exp = [0u8; 512];
    let mut log = [0u8; 256];
    let mut x: u16 = 1;
    let mut i = 0;
    while i < 255 {
        exp[i] = x as u8;
        exp[i + 255] = x as u8;
        log[x as usize] = i as u8;
        x <<= 1;
        if x & 0x100 != 0 {
            x ^= 0x11D;
        }
        i += 1;
    }
    exp[510] = exp[0];
    (exp, log)
}

const TABLES: ([u8; 512], [u8; 256]) = build_tables();
static EXP: [u8; 512] = TABLES.0;
static LOG: [u8; 256] = TABLES.1;

pub fn gf_mul(a: u8, b: u8) -> u8 {
    if a == 0 || b == 0 {
        return 0;
    }
    EXP[LOG[a as usize] as usize + LOG[b as usize] as usize]
}

pub fn gf_inv(a: u8) -> Result<u8, ErasureError> {
    if a == 0 {
        return Err(ErasureError::InverseOfZero);
    }
    Ok(EXP[255 - LOG[a as usize] as usize])
}

/// Generator row of coded packet `index` for a code with `b` source
/// packets.
pub fn generator_row(index: usize, b: usize) -> Vec<u8> {
    if index < b {
        let mut row = vec![0; b];
        row[index] = 1;
        return row;
    }
    (0..b)
        .map(|c| gf_inv((index ^ c) as u8).expect("Cauchy points are distinct"))
        .collect()
}

/// `acc += coef · src`, bytewise.
fn mul_add(acc: &mut [u8], coef: u8, src: &[u8]) {
    if coef == 0 {
        return;
    }
    let lc = LOG[coef as usize] as usize;
    for (a, &s) in acc.iter_mut().zip(src) {
        if s != 0 {
            *a ^= EXP[lc + LOG[s as usize] as usize];
        }
    }
}

fn check_source(source: &[Vec<u8>]) -> Result<usize, ErasureError> {
    let Some(first) = source.first() else {
        return Err(ErasureError::EmptyObject);
    };
    let len = first.len();
    if let Some(i) = source.iter().position(|p| p.len() != len) {
        return Err(ErasureError::PacketLength(i));
    }
    Ok(len)
}

/// Encoded data object together with its block partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedObject {
    source_packets: usize,
    packet_len: usize,
    packets: Vec<Vec<u8>>,
    /// `(canonical hyperedge index, packet range)`, consecutive ranges in
    /// canonical order.
    blocks: Vec<(usize, Range<usize>)>,
}

impl CodedObject {
    /// `B`
    pub fn source_packets(&self) -> usize {
        self.source_packets
    }

    /// `F`
    pub fn coded_packets(&self) -> usize {
        self.packets.len()
    }

    pub fn packet_len(&self) -> usize {
        self.packet_len
    }

    pub fn packet(&self, index: usize) -> &[u8] {
        &self.packets[index]
    }

    pub fn blocks(&self) -> &[(usize, Range<usize>)] {
        &self.blocks
    }

    /// Splits the coded packets into blocks of sizes `β_i`, taken in
    /// canonical hyperedge order.
    pub fn partition(&mut self, assignment: &BlockAssignment) -> Result<(), ErasureError> {
        let mut blocks = Vec::new();
        let mut next = 0usize;
        for (i, beta) in assignment.entries() {
            if !beta.is_integer() {
                return Err(ErasureError::PartitionMismatch("fractional block size"));
            }
            let size = beta
                .to_integer()
                .to_usize()
                .ok_or(ErasureError::PartitionMismatch("block size out of range"))?;
            blocks.push((i, next..next + size));
            next += size;
        }
        if next != self.packets.len() {
            return Err(ErasureError::PartitionMismatch("block sizes do not sum to F"));
        }
        self.blocks = blocks;
        Ok(())
    }
}

pub fn mds_encode(source: &[Vec<u8>], f: usize) -> Result<CodedObject, ErasureError> {
    let len = check_source(source)?;
    let b = source.len();
    if f > MAX_PACKETS {
        return Err(ErasureError::TooManyPackets(f));
    }
    if f < b {
        return Err(ErasureError::TooFewPackets { b, f });
    }
    let mut packets = source.to_vec();
    for index in b..f {
        let mut p = vec![0u8; len];
        for (c, coef) in generator_row(index, b).into_iter().enumerate() {
            mul_add(&mut p, coef, &source[c]);
        }
        packets.push(p);
    }
    Ok(CodedObject {
        source_packets: b,
        packet_len: len,
        packets,
        blocks: Vec::new(),
    })
}

/// Recovers the `b` source packets from any `b` distinct coded packets
/// (extra packets are ignored).
pub fn mds_decode(packets: &[(usize, &[u8])], b: usize) -> Result<Vec<Vec<u8>>, ErasureError> {
    if b == 0 {
        return Err(ErasureError::EmptyObject);
    }
    let mut chosen: BTreeMap<usize, &[u8]> = BTreeMap::new();
    for &(i, p) in packets {
        if i >= MAX_PACKETS {
            return Err(ErasureError::IndexOutOfRange(i));
        }
        chosen.entry(i).or_insert(p);
    }
    if chosen.len() < b {
        return Err(ErasureError::InsufficientPackets {
            have: chosen.len(),
            need: b,
        });
    }
    let chosen: Vec<(usize, &[u8])> = chosen.into_iter().take(b).collect();
    let len = chosen[0].1.len();
    if let Some((i, _)) = chosen.iter().find(|(_, p)| p.len() != len) {
        return Err(ErasureError::PacketLength(*i));
    }
    if chosen.iter().all(|&(i, _)| i < b) {
        return Ok(chosen.iter().map(|(_, p)| p.to_vec()).collect());
    }

    // Gauss-Jordan on [G_S | payload]
    let mut rows: Vec<(Vec<u8>, Vec<u8>)> = chosen
        .iter()
        .map(|&(i, p)| (generator_row(i, b), p.to_vec()))
        .collect();
    for col in 0..b {
        let pivot = (col..b)
            .find(|&r| rows[r].0[col] != 0)
            .ok_or(ErasureError::Singular)?;
        rows.swap(col, pivot);
        let inv = gf_inv(rows[col].0[col])?;
        let (g, p) = &mut rows[col];
        for v in g.iter_mut() {
            *v = gf_mul(*v, inv);
        }
        for v in p.iter_mut() {
            *v = gf_mul(*v, inv);
        }
        let (pg, pp) = rows[col].clone();
        for (r, (g, p)) in rows.iter_mut().enumerate() {
            let f = g[col];
            if r == col || f == 0 {
                continue;
            }
            mul_add(g, f, &pg);
            mul_add(p, f, &pp);
        }
    }
    Ok(rows.into_iter().map(|(_, p)| p).collect())
}

/// One stored block: its packet range and payloads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoredBlock {
    pub packets: Range<usize>,
    pub payload: Vec<Vec<u8>>,
}

/// Contents of every storage node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterState {
    rho: usize,
    source_packets: usize,
    packet_len: usize,
    /// per node: canonical hyperedge index → block
    nodes: Vec<BTreeMap<usize, StoredBlock>>,
    failed: BTreeSet<usize>,
}

/// Transfer accounting of one executed repair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RepairReport {
    pub packets_transferred: u64,
    pub bytes_transferred: u64,
    /// `(helper, newcomer, hyperedge)` per block copy, in execution order.
    pub copies: Vec<(usize, usize, usize)>,
}

/// Places every block on all vertices of its hyperedge.
pub fn materialize(
    overlay: &RepairOverlay,
    assignment: &BlockAssignment,
    coded: &CodedObject,
) -> Result<ClusterState, ErasureError> {
    let mut coded = coded.clone();
    coded.partition(assignment)?;
    let mut nodes = vec![BTreeMap::new(); overlay.n()];
    for (i, range) in coded.blocks() {
        let edge = overlay
            .by_index(*i)
            .ok_or(ErasureError::PartitionMismatch("block on a hyperedge outside the overlay"))?;
        let block = StoredBlock {
            packets: range.clone(),
            payload: coded.packets[range.clone()].to_vec(),
        };
        for &v in &edge.vertices {
            nodes[v].insert(*i, block.clone());
        }
    }
    // empty blocks are still "held", so repair plans stay executable
    for e in overlay.hyperedges() {
        for &v in &e.vertices {
            nodes[v].entry(e.index).or_insert_with(|| StoredBlock {
                packets: 0..0,
                payload: Vec::new(),
            });
        }
    }
    Ok(ClusterState {
        rho: overlay.rho(),
        source_packets: coded.source_packets,
        packet_len: coded.packet_len,
        nodes,
        failed: BTreeSet::new(),
    })
}

impl ClusterState {
    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn blocks(&self, node: usize) -> &BTreeMap<usize, StoredBlock> {
        &self.nodes[node]
    }

    /// `α_v`, packets held by `node`.
    pub fn stored_packets(&self, node: usize) -> usize {
        self.nodes[node].values().map(|b| b.packets.len()).sum()
    }

    pub fn stored_bytes(&self, node: usize) -> usize {
        self.stored_packets(node) * self.packet_len
    }

    pub fn failed(&self) -> &BTreeSet<usize> {
        &self.failed
    }

    /// Number of nodes holding each stored block.
    pub fn replication(&self) -> BTreeMap<usize, usize> {
        let mut count = BTreeMap::new();
        for node in &self.nodes {
            for &i in node.keys() {
                *count.entry(i).or_insert(0) += 1;
            }
        }
        count
    }

    pub fn replication_holds(&self) -> bool {
        self.replication().values().all(|&c| c == self.rho + 1)
    }

    /// Wipes the failed nodes.
    pub fn fail(&mut self, pattern: &FailurePattern) -> Result<(), ErasureError> {
        for &v in pattern.nodes() {
            if v >= self.n() {
                return Err(ErasureError::NodeOutOfRange(v));
            }
            self.nodes[v].clear();
            self.failed.insert(v);
        }
        Ok(())
    }

    /// Runs the plan's block copies in order. Helpers only forward blocks
    /// they hold verbatim; a newcomer may serve a block once it received
    /// it.
    pub fn execute_repair(&mut self, plan: &RepairPlan) -> Result<RepairReport, ErasureError> {
        for &v in plan.pattern.nodes() {
            if !self.failed.contains(&v) {
                return Err(ErasureError::NotFailed(v));
            }
        }
        let mut report = RepairReport::default();
        for block in &plan.blocks {
            for t in &block.transfers {
                let Some(stored) = self.nodes[t.helper].get(&block.hyperedge).cloned() else {
                    return Err(ErasureError::IntegrityViolation {
                        node: t.helper,
                        block: block.hyperedge,
                    });
                };
                if !self.failed.contains(&t.target) {
                    return Err(ErasureError::NotFailed(t.target));
                }
                report.packets_transferred += stored.packets.len() as u64;
                report.bytes_transferred += (stored.packets.len() * self.packet_len) as u64;
                report.copies.push((t.helper, t.target, block.hyperedge));
                self.nodes[t.target].insert(block.hyperedge, stored);
            }
        }
        for &v in plan.pattern.nodes() {
            self.failed.remove(&v);
        }
        Ok(report)
    }

    /// Distinct coded packets reachable from `set`.
    pub fn gather(&self, set: &[usize]) -> BTreeMap<usize, &[u8]> {
        let mut out = BTreeMap::new();
        for &v in set {
            for block in self.nodes[v].values() {
                for (k, idx) in block.packets.clone().enumerate() {
                    out.entry(idx).or_insert(block.payload[k].as_slice());
                }
            }
        }
        out
    }

    /// Decodes the object from the nodes of a retrieval set.
    pub fn retrieve(&self, set: &[usize]) -> Result<Vec<Vec<u8>>, ErasureError> {
        if let Some(&v) = set.iter().find(|&&v| v >= self.n()) {
            return Err(ErasureError::NodeOutOfRange(v));
        }
        let packets: Vec<(usize, &[u8])> = self.gather(set).into_iter().collect();
        mds_decode(&packets, self.source_packets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgraph::MetricClosure;
    use crate::rational::int;
    use crate::repair::plan_pattern_repair;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Carry-less multiply then reduce, bit by bit.
    fn slow_mul(a: u8, b: u8) -> u8 {
        let mut prod: u16 = 0;
        for i in 0..8 {
            if b >> i & 1 == 1 {
                prod ^= (a as u16) << i;
            }
        }
        for bit in (8..16).rev() {
            if prod >> bit & 1 == 1 {
                prod ^= 0x11D << (bit - 8);
            }
        }
        prod as u8
    }

    fn random_source(rng: &mut ChaCha8Rng, b: usize, len: usize) -> Vec<Vec<u8>> {
        (0..b)
            .map(|_| (0..len).map(|_| rng.random()).collect())
            .collect()
    }

    #[test]
    fn multiplication_matches_polynomial_oracle() {
        assert_eq!(gf_mul(2, 3), 6);
        assert_eq!(gf_mul(0x80, 2), 0x1D);
        for a in 0..=255u8 {
            for b in 0..=255u8 {
                assert_eq!(gf_mul(a, b), slow_mul(a, b));
            }
        }
    }

    #[test]
    fn field_axioms_hold_exhaustively() {
        assert_eq!(gf_inv(0), Err(ErasureError::InverseOfZero));
        for a in 1..=255u8 {
            assert_eq!(gf_mul(a, gf_inv(a).unwrap()), 1);
        }
        for a in 0..=255u8 {
            assert_eq!(gf_mul(a, 1), a);
            for b in 0..=255u8 {
                assert_eq!(gf_mul(a, b), gf_mul(b, a));
            }
        }
        // associativity and distributivity on a stride covering every residue
        for a in (0..=255u8).step_by(7) {
            for b in 0..=255u8 {
                for c in (0..=255u8).step_by(11) {
                    assert_eq!(gf_mul(gf_mul(a, b), c), gf_mul(a, gf_mul(b, c)));
                    assert_eq!(gf_mul(a, b ^ c), gf_mul(a, b) ^ gf_mul(a, c));
                }
            }
        }
    }

    #[test]
    fn identity_code_when_f_equals_b() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let src = random_source(&mut rng, 3, 16);
        let coded = mds_encode(&src, 3).unwrap();
        assert_eq!(coded.packets, src);
    }

    #[test]
    fn zero_source_gives_zero_parity() {
        let coded = mds_encode(&[vec![0; 8], vec![0; 8]], 3).unwrap();
        assert!(coded.packets.iter().all(|p| p.iter().all(|&x| x == 0)));
    }

    #[test]
    fn every_four_of_six_decodes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let src = random_source(&mut rng, 4, 32);
        let coded = mds_encode(&src, 6).unwrap();
        let mut count = 0;
        for s in crate::combinatorics::subsets(6, 4) {
            let pk: Vec<(usize, &[u8])> = s.iter().map(|&i| (i, coded.packet(i))).collect();
            assert_eq!(mds_decode(&pk, 4).unwrap(), src);
            count += 1;
        }
        assert_eq!(count, 15);
    }

    #[test]
    fn too_few_packets_fail() {
        let coded = mds_encode(&[vec![1], vec![2], vec![3]], 5).unwrap();
        let pk = [(0, coded.packet(0)), (4, coded.packet(4)), (4, coded.packet(4))];
        assert_eq!(
            mds_decode(&pk, 3),
            Err(ErasureError::InsufficientPackets { have: 2, need: 3 })
        );
        assert_eq!(mds_encode(&[vec![1]], 256), Err(ErasureError::TooManyPackets(256)));
        assert_eq!(
            mds_encode(&[vec![1], vec![2]], 1),
            Err(ErasureError::TooFewPackets { b: 2, f: 1 })
        );
    }

    #[test]
    fn random_subsets_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let b = rng.random_range(1..=12);
            let f = rng.random_range(b..=40);
            let src = random_source(&mut rng, b, 8);
            let coded = mds_encode(&src, f).unwrap();
            let mut idx: Vec<usize> = (0..f).collect();
            for i in (1..f).rev() {
                idx.swap(i, rng.random_range(0..=i));
            }
            let pk: Vec<(usize, &[u8])> = idx[..b].iter().map(|&i| (i, coded.packet(i))).collect();
            assert_eq!(mds_decode(&pk, b).unwrap(), src);
        }
    }

    /// Six-node ring with one pair hyperedge per link.
    fn ring(beta: [u64; 6]) -> (RepairOverlay, BlockAssignment) {
        let edges = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 5], vec![0, 5]];
        let overlay = RepairOverlay::new(6, 1, 2, edges).unwrap();
        let assignment = BlockAssignment::with(
            4,
            overlay
                .hyperedges()
                .iter()
                .zip(beta)
                .map(|(e, b)| (e.index, int(b))),
        );
        (overlay, assignment)
    }

    #[test]
    fn four_node_hypergraph_placement() {
        let edges = vec![vec![0, 1, 2], vec![0, 4, 5], vec![1, 3, 4], vec![2, 3, 4]];
        let overlay = RepairOverlay::new(6, 2, 3, edges).unwrap();
        let assignment = BlockAssignment::with(
            2,
            overlay.hyperedges().iter().map(|e| (e.index, int(1))),
        );
        let coded = mds_encode(&[vec![7; 4], vec![9; 4]], 4).unwrap();
        let state = materialize(&overlay, &assignment, &coded).unwrap();
        let e = |i: usize| overlay.hyperedges()[i].index;
        let keys = |v: usize| state.blocks(v).keys().copied().collect::<BTreeSet<_>>();
        assert_eq!(keys(0), [e(0), e(1)].into_iter().collect());
        assert_eq!(keys(2), [e(0), e(3)].into_iter().collect());
        assert_eq!(keys(4), [e(1), e(2), e(3)].into_iter().collect());
        let total: usize = (0..6).map(|v| state.stored_packets(v)).sum();
        assert_eq!(total, 3 * 4);
        assert!(state.replication_holds());
    }

    #[test]
    fn ring_single_failure_downloads_two_neighbours() {
        let (overlay, assignment) = ring([1; 6]);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let coded = mds_encode(&random_source(&mut rng, 4, 64), 6).unwrap();
        let mut state = materialize(&overlay, &assignment, &coded).unwrap();
        let before = state.clone();
        let closure = MetricClosure::uniform(6, 1);
        let pattern = FailurePattern::new(6, vec![2]).unwrap();
        let plan = plan_pattern_repair(&overlay, &closure, &pattern).unwrap();
        state.fail(&pattern).unwrap();
        let report = state.execute_repair(&plan).unwrap();
        assert_eq!(report.packets_transferred, 2);
        assert_eq!(report.bytes_transferred, 2 * 64);
        let helpers: BTreeSet<usize> = report.copies.iter().map(|c| c.0).collect();
        assert_eq!(helpers, [1, 3].into_iter().collect());
        // the newcomer again holds exactly the blocks of links {2,3} and {3,4}
        let expected: BTreeSet<usize> = [1, 2].iter().map(|&i| overlay.hyperedges()[i].index).collect();
        assert_eq!(state.blocks(2).keys().copied().collect::<BTreeSet<_>>(), expected);
        assert_eq!(state, before);
    }

    #[test]
    fn irregular_ring_decodes_from_two_nodes() {
        let (overlay, assignment) = ring([1, 1, 1, 0, 3, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let src = random_source(&mut rng, 4, 16);
        let coded = mds_encode(&src, 7).unwrap();
        let state = materialize(&overlay, &assignment, &coded).unwrap();
        // nodes 4 and 5 (0-based 3, 4) reach one packet on {3,4} and three on {5,6}
        assert_eq!(state.gather(&[3, 4]).len(), 4);
        assert_eq!(state.retrieve(&[3, 4]).unwrap(), src);
        assert_eq!(state.retrieve(&[0, 1, 2, 3, 4, 5]).unwrap(), src);
        assert!(matches!(
            state.retrieve(&[0]),
            Err(ErasureError::InsufficientPackets { .. })
        ));
    }

    #[test]
    fn empty_assignment_gives_empty_cluster() {
        let (overlay, _) = ring([0; 6]);
        let coded = mds_encode(&[vec![1]], 1).unwrap();
        let empty = BlockAssignment::new(1);
        assert_eq!(
            materialize(&overlay, &empty, &coded),
            Err(ErasureError::PartitionMismatch("block sizes do not sum to F"))
        );
        let mut coded = coded;
        coded.packets.clear();
        let state = materialize(&overlay, &empty, &coded).unwrap();
        assert!((0..6).all(|v| state.stored_packets(v) == 0));
    }

    #[test]
    fn zero_size_blocks_move_no_bytes() {
        let (overlay, assignment) = ring([1, 0, 1, 0, 1, 1]);
        let coded = mds_encode(&[vec![1; 4], vec![2; 4], vec![3; 4], vec![4; 4]], 4).unwrap();
        let mut state = materialize(&overlay, &assignment, &coded).unwrap();
        let closure = MetricClosure::uniform(6, 1);
        // node 3 (0-based 2) lies on {2,3} with β=0 and {3,4} with β=1
        let pattern = FailurePattern::new(6, vec![2]).unwrap();
        let plan = plan_pattern_repair(&overlay, &closure, &pattern).unwrap();
        state.fail(&pattern).unwrap();
        let report = state.execute_repair(&plan).unwrap();
        assert_eq!(report.packets_transferred, 1);
        assert_eq!(report.copies.len(), 2);
    }

    #[test]
    fn missing_block_at_helper_is_reported() {
        let (overlay, assignment) = ring([1; 6]);
        let coded = mds_encode(&[vec![1], vec![2], vec![3], vec![4]], 6).unwrap();
        let mut state = materialize(&overlay, &assignment, &coded).unwrap();
        let closure = MetricClosure::uniform(6, 1);
        let pattern = FailurePattern::new(6, vec![2]).unwrap();
        let plan = plan_pattern_repair(&overlay, &closure, &pattern).unwrap();
        state.fail(&pattern).unwrap();
        state.nodes[1].clear();
        assert!(matches!(
            state.execute_repair(&plan),
            Err(ErasureError::IntegrityViolation { node: 1, .. })
        ));
    }
}
