//! Human-readable walkthroughs of a code on real bytes.

use std::fmt::Write as _;

use ifropt_core::netgraph::{metric_closure, Link, NetworkSpec};
use ifropt_core::optimizer::ProblemInstance;
use ifropt_core::overlay::greedy_overlay;
use ifropt_core::rational::{int, to_exact_string};
use ifropt_core::repair::{pattern_repair_cost, plan_pattern_repair, system_repair_cost};
use ifropt_core::retrieval::retrieval_sets;
use ifropt_core::{BlockAssignment, FailureModel, FailurePattern, MetricClosure, RepairOverlay};

use crate::cli::{Demo, Scenario};
use crate::error::{CliError, CliResult, Exit};
use crate::execute::{deploy, integral_assignment, random_object};
use crate::solution::SolutionFile;
use crate::instance::InstanceFile;

/// Patterns shown in full before the rest are only counted.
const DETAILED: usize = 4;

pub struct Walkthrough {
    pub title: String,
    pub description: String,
    pub closure: MetricClosure,
    pub overlay: RepairOverlay,
    pub assignment: BlockAssignment,
    pub retrieval: Vec<Vec<usize>>,
    pub model: FailureModel,
}

fn set_str(vertices: &[usize]) -> String {
    let ids: Vec<String> = vertices.iter().map(|v| (v + 1).to_string()).collect();
    format!("{{{}}}", ids.join(","))
}

fn ring_closure(costs: &[u64]) -> MetricClosure {
    let n = costs.len();
    let links = costs
        .iter()
        .enumerate()
        .map(|(u, &cost)| Link { u, v: (u + 1) % n, cost })
        .collect();
    metric_closure(&NetworkSpec::new(vec![1; n], links).expect("ring is connected"))
}

fn one_packet_each(overlay: &RepairOverlay, object_size: u64) -> BlockAssignment {
    BlockAssignment::with(object_size, overlay.hyperedges().iter().map(|e| (e.index, int(1))))
}

fn zero_based(sets: &[&[usize]]) -> Vec<Vec<usize>> {
    sets.iter().map(|s| s.iter().map(|v| v - 1).collect()).collect()
}

pub fn scenario(which: Scenario) -> Walkthrough {
    match which {
        Scenario::Ring => {
            let overlay = RepairOverlay::new(6, 1, 2, (0..6).map(|u| vec![u, (u + 1) % 6]).collect())
                .expect("ring overlay");
            Walkthrough {
                title: "ring".into(),
                description: "Six-node ring with unit link costs; one coded packet on every edge, B = 4.".into(),
                closure: ring_closure(&[1; 6]),
                assignment: one_packet_each(&overlay, 4),
                overlay,
                retrieval: zero_based(&[
                    &[1, 3],
                    &[1, 4],
                    &[1, 5],
                    &[2, 4],
                    &[2, 5],
                    &[2, 6],
                    &[3, 5],
                    &[3, 6],
                    &[4, 6],
                ]),
                model: FailureModel::Uniform,
            }
        }
        Scenario::Hypergraph => {
            let edges = zero_based(&[&[1, 2, 3], &[1, 4, 5], &[3, 4, 5], &[2, 3, 4]]);
            let overlay = RepairOverlay::new(5, 2, 3, edges).expect("hypergraph overlay");
            Walkthrough {
                title: "hypergraph".into(),
                description: "Five nodes on a unit-cost ring, four 3-node hyperedges, one packet per block, B = 3; \
                              tolerates any two failures."
                    .into(),
                closure: ring_closure(&[1; 5]),
                assignment: one_packet_each(&overlay, 3),
                overlay,
                retrieval: zero_based(&[&[3, 4], &[1, 3], &[2, 5], &[3, 5]]),
                model: FailureModel::Uniform,
            }
        }
        Scenario::FiveNode => {
            let closure = ring_closure(&[1, 4, 2, 3, 5]);
            let overlay = greedy_overlay(&closure, 2, 3).expect("five-node overlay");
            let config = retrieval_sets(&overlay, 3, 6, &[]).expect("six retrieval sets");
            let b = config
                .all_sets()
                .map(|s| overlay.hyperedges().iter().filter(|e| e.hits(s)).count())
                .min()
                .unwrap_or(1) as u64;
            Walkthrough {
                title: "five-node".into(),
                description: format!(
                    "Ring 1-2-3-4-5-1 with link costs 1, 4, 2, 3, 5; greedy overlay for two failures and degree 3, \
                     greedy retrieval sets of size 3, one packet per block, B = {b}."
                ),
                closure,
                assignment: one_packet_each(&overlay, b),
                overlay,
                retrieval: config.all_sets().cloned().collect(),
                model: FailureModel::Uniform,
            }
        }
    }
}

pub fn from_files(instance: &ProblemInstance, solution: &SolutionFile) -> CliResult<Walkthrough> {
    let plan = solution.to_plan(instance)?;
    Ok(Walkthrough {
        title: "instance".into(),
        description: format!(
            "{} nodes, {} hyperedges, c_r = {}, c_s = {}.",
            instance.n(),
            plan.overlay.len(),
            to_exact_string(&plan.repair_cost),
            to_exact_string(&plan.storage_cost)
        ),
        closure: instance.closure.clone(),
        overlay: plan.overlay,
        assignment: plan.assignment,
        retrieval: plan.retrieval.all_sets().cloned().collect(),
        model: instance.failure_model.clone(),
    })
}

/// Encodes, places, fails and repairs every pattern of the failure model,
/// and decodes from every retrieval set. Any deviation is an error.
pub fn walk(w: &Walkthrough, packet_len: usize, seed: u64) -> CliResult<String> {
    let mut out = String::new();
    let (gamma, scaled) = integral_assignment(&w.assignment)?;
    let b = usize::try_from(scaled.object_size()).map_err(CliError::usage)?;
    let source = random_object(seed, b, packet_len);
    let state = deploy(&w.overlay, &scaled, &source)?;
    let internal = |e: &dyn std::fmt::Display| CliError::internal(format!("{}: {e}", w.title));

    let _ = writeln!(out, "== {} ==\n{}", w.title, w.description);
    if gamma > 1 {
        let _ = writeln!(out, "block sizes scaled by {gamma} to whole packets");
    }
    let f = scaled.total();
    let _ = writeln!(out, "encode: {b} source packets -> {f} coded packets of {packet_len} bytes");
    let _ = writeln!(out, "place:");
    for v in 0..state.n() {
        let blocks: Vec<String> = state
            .blocks(v)
            .iter()
            .map(|(i, blk)| {
                let e = w.overlay.by_index(*i).expect("stored block on the overlay");
                format!("{} [{}..{})", set_str(&e.vertices), blk.packets.start, blk.packets.end)
            })
            .collect();
        let _ = writeln!(
            out,
            "  node {}: {} packets in {}",
            v + 1,
            state.stored_packets(v),
            if blocks.is_empty() { "no blocks".to_string() } else { blocks.join(", ") }
        );
    }

    let patterns: Vec<FailurePattern> = w
        .model
        .distribution(w.overlay.n(), w.overlay.rho())
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    let mut total_bytes = 0u64;
    for (shown, pattern) in patterns.iter().enumerate() {
        let plan = plan_pattern_repair(&w.overlay, &w.closure, pattern).map_err(|e| internal(&e))?;
        let mut s = state.clone();
        s.fail(pattern).map_err(|e| internal(&e))?;
        let report = s.execute_repair(&plan).map_err(|e| internal(&e))?;
        if s != state {
            return Err(internal(&format!("pattern {} not restored", set_str(pattern.nodes()))));
        }
        total_bytes += report.bytes_transferred;
        if shown < DETAILED {
            let cost = pattern_repair_cost(&w.overlay, &w.assignment, pattern, &w.closure).map_err(|e| internal(&e))?;
            let _ = writeln!(out, "fail {}:", set_str(pattern.nodes()));
            for &(helper, target, hyperedge) in &report.copies {
                let e = w.overlay.by_index(hyperedge).expect("repaired block on the overlay");
                let packets = scaled.get(hyperedge);
                let _ = writeln!(
                    out,
                    "  block {}: node {} -> node {}, {} packet(s) at link cost {}",
                    set_str(&e.vertices),
                    helper + 1,
                    target + 1,
                    packets,
                    w.closure.cost(helper, target)
                );
            }
            let _ = writeln!(
                out,
                "  restored byte-identical; {} bytes moved; repair cost {} per source packet",
                report.bytes_transferred,
                to_exact_string(&cost)
            );
        }
    }
    if patterns.len() > DETAILED {
        let _ = writeln!(out, "... {} more patterns repaired byte-identical", patterns.len() - DETAILED);
    }

    let _ = writeln!(out, "retrieve:");
    for set in &w.retrieval {
        let got = state.gather(set).len();
        let decoded = state.retrieve(set).map_err(|e| internal(&e))?;
        if decoded != source {
            return Err(internal(&format!("retrieval set {} decoded the wrong object", set_str(set))));
        }
        let _ = writeln!(out, "  {}: {got} distinct packets, object decoded", set_str(set));
    }
    let system = system_repair_cost(&w.overlay, &w.assignment, &w.closure, &w.model).map_err(|e| internal(&e))?;
    let _ = writeln!(
        out,
        "summary: {} failure patterns repaired ({} bytes), {} retrieval sets decoded, system repair cost {}",
        patterns.len(),
        total_bytes,
        w.retrieval.len(),
        to_exact_string(&system)
    );
    Ok(out)
}

pub fn demo(args: &Demo) -> CliResult<Exit> {
    let walkthroughs = match (&args.instance, &args.solution) {
        (Some(i), Some(s)) => {
            let instance = InstanceFile::read(i)?.to_instance()?;
            vec![from_files(&instance, &SolutionFile::read(s)?)?]
        }
        _ => match args.scenario {
            Some(s) => vec![scenario(s)],
            None => [Scenario::Ring, Scenario::Hypergraph, Scenario::FiveNode]
                .into_iter()
                .map(scenario)
                .collect(),
        },
    };
    let mut text = Vec::new();
    for w in &walkthroughs {
        text.push(walk(w, args.packet_len, args.seed)?);
    }
    print!("{}", text.join("\n"));
    Ok(Exit::Success)
}
