//! Best-bound branch-and-bound over exact LP relaxations.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use num_traits::Zero;

use super::model::LinearModel;
use super::simplex::{model_bounds, solve_lp_bounded, Bounds, LpResult, LpStatus};
use super::OptimizerError;
use crate::rational::{fractionality, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpResult {
    pub status: LpStatus,
    pub values: Vec<Rational>,
    pub objective: Rational,
    pub nodes: u64,
    pub pivots: u64,
}

struct Node {
    bound: Rational,
    seq: u64,
    bounds: Bounds,
    lp: LpResult,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.bound, self.seq).cmp(&(&other.bound, other.seq))
    }
}

/// Minimizes the model with integrality enforced on flagged variables.
///
/// Branches on the most fractional integer variable (lowest index on ties)
/// and always expands the open node with the smallest LP bound, oldest
/// first. A rounding dive from the root (and periodically from later nodes)
/// supplies incumbents early. The search is single-threaded, so the reported witness is
/// deterministic for a given model.
pub fn solve_ilp(model: &LinearModel) -> Result<IlpResult, OptimizerError> {
    let root_bounds = model_bounds(model);
    let mut pivots = 0u64;
    let mut nodes = 1u64;
    let root = solve_lp_bounded(model, &root_bounds)?;
    pivots += root.pivots;
    if root.status != LpStatus::Optimal {
        return Ok(IlpResult {
            status: root.status,
            values: Vec::new(),
            objective: Rational::zero(),
            nodes,
            pivots,
        });
    }

    let mut open = BinaryHeap::new();
    let mut seq = 0u64;
    open.push(Reverse(Node {
        bound: root.objective.clone(),
        seq,
        bounds: root_bounds,
        lp: root,
    }));
    let mut incumbent: Option<(Rational, Vec<Rational>)> = None;
    let mut expanded = 0u64;

    while let Some(Reverse(node)) = open.pop() {
        if expanded.is_multiple_of(DIVE_EVERY) {
            if let Some((objective, values)) = dive(model, &node.bounds, &node.lp, &mut nodes, &mut pivots)? {
                if incumbent.as_ref().is_none_or(|(best, _)| objective < *best) {
                    incumbent = Some((objective, values));
                }
            }
        }
        expanded += 1;
        if let Some((best, _)) = &incumbent {
            if node.bound >= *best {
                break;
            }
        }
        let Some(j) = branching_variable(model, &node.lp.values) else {
            // integral and best-bound: nothing open can beat it
            incumbent = Some((node.lp.objective, node.lp.values));
            break;
        };
        let v = &node.lp.values[j];
        let down = v.floor();
        let up = v.ceil();
        for child_bounds in [
            with_upper(&node.bounds, j, down),
            with_lower(&node.bounds, j, up),
        ] {
            nodes += 1;
            let lp = solve_lp_bounded(model, &child_bounds)?;
            pivots += lp.pivots;
            if lp.status != LpStatus::Optimal {
                continue;
            }
            if let Some((best, _)) = &incumbent {
                if lp.objective >= *best {
                    continue;
                }
            }
            if branching_variable(model, &lp.values).is_none() {
                let better = incumbent
                    .as_ref()
                    .is_none_or(|(best, _)| lp.objective < *best);
                if better {
                    incumbent = Some((lp.objective.clone(), lp.values.clone()));
                }
            }
            seq += 1;
            open.push(Reverse(Node {
                bound: lp.objective.clone(),
                seq,
                bounds: child_bounds,
                lp,
            }));
        }
    }

    Ok(match incumbent {
        Some((objective, values)) => IlpResult {
            status: LpStatus::Optimal,
            values,
            objective,
            nodes,
            pivots,
        },
        None => IlpResult {
            status: LpStatus::Infeasible,
            values: Vec::new(),
            objective: Rational::zero(),
            nodes,
            pivots,
        },
    })
}

/// Nodes expanded between two dives.
const DIVE_EVERY: u64 = 64;

/// Primal heuristic: repeatedly fixes the integer variable closest to an
/// integer at its rounded value and re-solves, trying the other side once
/// when that fails. Returns an integral solution if one is reached.
fn dive(
    model: &LinearModel,
    bounds: &Bounds,
    lp: &LpResult,
    nodes: &mut u64,
    pivots: &mut u64,
) -> Result<Option<(Rational, Vec<Rational>)>, OptimizerError> {
    let mut bounds = bounds.clone();
    let mut values = lp.values.clone();
    let mut objective = lp.objective.clone();
    loop {
        let pick = model
            .vars
            .iter()
            .enumerate()
            .filter(|(j, v)| v.integer && !values[*j].is_integer())
            .map(|(j, _)| {
                let v = &values[j];
                let down = v - v.floor();
                let up = v.ceil() - v;
                let round_down = down <= up;
                (j, down.min(up), round_down)
            })
            .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
        let Some((j, _, round_down)) = pick else {
            return Ok(Some((objective, values)));
        };
        let down = values[j].floor();
        let up = values[j].ceil();
        let first = if round_down { down.clone() } else { up.clone() };
        let second = if round_down { up } else { down };
        let mut solved = None;
        for target in [first, second] {
            if target < bounds[j].0 || bounds[j].1.as_ref().is_some_and(|u| target > *u) {
                continue;
            }
            let mut trial = bounds.clone();
            trial[j] = (target.clone(), Some(target));
            *nodes += 1;
            let r = solve_lp_bounded(model, &trial)?;
            *pivots += r.pivots;
            if r.status == LpStatus::Optimal {
                solved = Some((trial, r));
                break;
            }
        }
        let Some((trial, r)) = solved else {
            return Ok(None);
        };
        bounds = trial;
        values = r.values;
        objective = r.objective;
    }
}

fn branching_variable(model: &LinearModel, values: &[Rational]) -> Option<usize> {
    let mut best: Option<(usize, Rational)> = None;
    for (j, v) in model.vars.iter().enumerate() {
        if !v.integer || values[j].is_integer() {
            continue;
        }
        let f = fractionality(&values[j]);
        if best.as_ref().is_none_or(|(_, b)| f > *b) {
            best = Some((j, f));
        }
    }
    best.map(|(j, _)| j)
}

fn with_upper(bounds: &Bounds, j: usize, u: Rational) -> Bounds {
    let mut b = bounds.clone();
    b[j].1 = Some(match b[j].1.take() {
        Some(old) if old < u => old,
        _ => u,
    });
    b
}

fn with_lower(bounds: &Bounds, j: usize, l: Rational) -> Bounds {
    let mut b = bounds.clone();
    if l > b[j].0 {
        b[j].0 = l;
    }
    b
}
