//! Repair-cost minimization: the joint overlay / retrieval / block-size
//! ILP, its relaxation in the block sizes, the Pareto frontier between
//! repair and storage cost, and the three-step heuristic.

mod branch;
mod model;
mod simplex;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

pub use branch::{solve_ilp, IlpResult};
pub use model::{Constraint, LinearModel, Relation, VarRole, Variable};
pub use simplex::{model_bounds, solve_lp, solve_lp_bounded, Bounds, LpResult, LpStatus};

use crate::combinatorics::{binomial, subsets};
use crate::netgraph::{metric_closure, Cost, MetricClosure, NetworkSpec};
use crate::overlay::{greedy_overlay, OverlayError, RepairOverlay};
use crate::rational::{int, Rational};
use crate::repair::{hyperedge_coefficient, BlockAssignment, FailureModel};
use crate::retrieval::{normalize_fixed, ranked_retrieval_sets, retrieval_sets, RetrievalConfig, RetrievalError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OptimizerError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error(transparent)]
    Overlay(#[from] OverlayError),
    #[error(transparent)]
    Retrieval(#[from] RetrievalError),
    #[error("LP optimality certificate failed: {0}")]
    CertificateFailed(&'static str),
}

/// Everything the optimizer needs about one storage system.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub network: NetworkSpec,
    pub closure: MetricClosure,
    pub rho: usize,
    pub d: usize,
    pub k: usize,
    pub w: usize,
    /// Pre-determined retrieval sets (0-based, sorted).
    pub fixed_sets: Vec<Vec<usize>>,
    /// Object size `B` in packets.
    pub object_size: u64,
    /// Storage cost cap per unit of data, `C_s`.
    pub storage_cap: Rational,
    pub failure_model: FailureModel,
}

impl ProblemInstance {
    /// Instance over the multi-hop metric closure of `network`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        network: NetworkSpec,
        rho: usize,
        d: usize,
        k: usize,
        w: usize,
        fixed_sets: Vec<Vec<usize>>,
        object_size: u64,
        storage_cap: Rational,
        failure_model: FailureModel,
    ) -> Self {
        let closure = metric_closure(&network);
        ProblemInstance {
            network,
            closure,
            rho,
            d,
            k,
            w,
            fixed_sets,
            object_size,
            storage_cap,
            failure_model,
        }
    }

    pub fn n(&self) -> usize {
        self.network.n()
    }

    pub fn validate(&self) -> Result<(), OptimizerError> {
        let n = self.n();
        let bad = |m: String| Err(OptimizerError::InvalidInstance(m));
        if self.closure.n() != n {
            return bad(format!("closure covers {} nodes, network {}", self.closure.n(), n));
        }
        if self.rho + 1 > n {
            return bad(format!("rho + 1 = {} exceeds n = {}", self.rho + 1, n));
        }
        if self.k == 0 || self.k > n {
            return bad(format!("k = {} outside 1..={}", self.k, n));
        }
        if self.fixed_sets.len() > self.w {
            return bad(format!("w1 = {} exceeds w = {}", self.fixed_sets.len(), self.w));
        }
        if self.w as u64 > binomial(n, self.k) {
            return bad(format!("w = {} exceeds C({}, {})", self.w, n, self.k));
        }
        if self.object_size == 0 {
            return bad("object size B must be at least 1".into());
        }
        if self.storage_cap.is_negative() {
            return bad("storage cap C_s must be nonnegative".into());
        }
        normalize_fixed(n, self.k, &self.fixed_sets)?;
        Ok(())
    }

    /// `w₂`, the number of retrieval sets left to the optimizer.
    pub fn free_sets(&self) -> usize {
        self.w - self.fixed_sets.len()
    }

    /// `Σ_{v∈E} s_v`: storage cost of one packet on every replica of `E`.
    pub fn hyperedge_storage(&self, vertices: &[usize]) -> Cost {
        vertices
            .iter()
            .map(|&v| self.network.storage_costs()[v])
            .sum()
    }

    pub fn with_object_size(&self, object_size: u64) -> Self {
        ProblemInstance {
            object_size,
            ..self.clone()
        }
    }
}

/// Size of the full model: `C(n, ρ+1) + C(n, k)` selection variables.
pub fn full_model_selection_vars(n: usize, rho: usize, k: usize) -> u64 {
    binomial(n, rho + 1).saturating_add(binomial(n, k))
}

/// A model together with the meaning of its columns.
#[derive(Debug, Clone)]
pub struct ModelLayout {
    pub model: LinearModel,
    /// Hyperedge vertex sets, by position in `beta_vars`.
    pub hyperedges: Vec<Vec<usize>>,
    /// Canonical index per entry of `hyperedges`.
    pub hyperedge_index: Vec<usize>,
    pub x_vars: Vec<usize>,
    pub y_vars: Vec<usize>,
    pub beta_vars: Vec<usize>,
    /// Candidate retrieval sets, by position in `y_vars`.
    pub candidates: Vec<Vec<usize>>,
    /// `a_i` per entry of `hyperedges`.
    pub coefficients: Vec<Rational>,
    /// Row holding `Σ_i S_i β_i ≤ B·C_s`.
    pub storage_row: usize,
}

impl ModelLayout {
    /// `c_r = (1/B) Σ a_i β_i` as an objective vector.
    pub fn repair_objective(&self, object_size: u64) -> Vec<Rational> {
        let mut c = vec![Rational::zero(); self.model.vars.len()];
        let b = int(object_size);
        for (pos, &j) in self.beta_vars.iter().enumerate() {
            c[j] = &self.coefficients[pos] / &b;
        }
        c
    }

    /// `c_s = (1/B) Σ_i S_i β_i` as an objective vector.
    pub fn storage_objective(&self, instance: &ProblemInstance) -> Vec<Rational> {
        let mut c = vec![Rational::zero(); self.model.vars.len()];
        let b = int(instance.object_size);
        for (pos, &j) in self.beta_vars.iter().enumerate() {
            c[j] = int(instance.hyperedge_storage(&self.hyperedges[pos])) / &b;
        }
        c
    }
}

fn binary(name: String, role: VarRole) -> Variable {
    Variable {
        name,
        lower: Rational::zero(),
        upper: Some(Rational::one()),
        integer: true,
        role,
    }
}

/// Builds the full repair-cost ILP. With `relax_b` the block sizes are
/// continuous on `[0, B]`; overlay and retrieval selections stay binary.
pub fn build_model(instance: &ProblemInstance, relax_b: bool) -> Result<ModelLayout, OptimizerError> {
    instance.validate()?;
    let n = instance.n();
    let b = int(instance.object_size);
    let hyperedges: Vec<Vec<usize>> = subsets(n, instance.rho + 1).collect();
    let fixed = normalize_fixed(n, instance.k, &instance.fixed_sets)?;
    let w2 = instance.free_sets();
    let candidates = if w2 > 0 {
        RetrievalConfig::candidates(n, instance.k, &fixed)
    } else {
        Vec::new()
    };

    let mut model = LinearModel::default();
    let y_vars: Vec<usize> = (0..candidates.len())
        .map(|j| model.add_var(binary(format!("y_{}", j + 1), VarRole::Retrieval(j))))
        .collect();
    let x_vars: Vec<usize> = (0..hyperedges.len())
        .map(|i| model.add_var(binary(format!("x_{}", i + 1), VarRole::Overlay(i))))
        .collect();
    let beta_vars: Vec<usize> = (0..hyperedges.len())
        .map(|i| {
            model.add_var(Variable {
                name: format!("b_{}", i + 1),
                lower: Rational::zero(),
                upper: Some(b.clone()),
                integer: !relax_b,
                role: VarRole::Block(i),
            })
        })
        .collect();

    // β_i ≤ B x_i
    for i in 0..hyperedges.len() {
        model.add_row(
            format!("link_{}", i + 1),
            vec![(beta_vars[i], Rational::one()), (x_vars[i], -b.clone())],
            Relation::Le,
            Rational::zero(),
        );
    }
    // degree
    for v in 0..n {
        let coeffs = (0..hyperedges.len())
            .filter(|&i| hyperedges[i].contains(&v))
            .map(|i| (x_vars[i], Rational::one()))
            .collect();
        model.add_row(format!("degree_{}", v + 1), coeffs, Relation::Le, int(instance.d as u64));
    }
    let hitting = |set: &[usize]| -> Vec<(usize, Rational)> {
        (0..hyperedges.len())
            .filter(|&i| hyperedges[i].iter().any(|v| set.contains(v)))
            .map(|i| (beta_vars[i], Rational::one()))
            .collect()
    };
    for (j, r) in fixed.iter().enumerate() {
        model.add_row(format!("fixed_{}", j + 1), hitting(r), Relation::Ge, b.clone());
    }
    if w2 > 0 {
        model.add_row(
            "count",
            y_vars.iter().map(|&j| (j, Rational::one())).collect(),
            Relation::Eq,
            int(w2 as u64),
        );
        for (j, q) in candidates.iter().enumerate() {
            let mut coeffs = hitting(q);
            coeffs.push((y_vars[j], -b.clone()));
            model.add_row(format!("retrieve_{}", j + 1), coeffs, Relation::Ge, Rational::zero());
        }
    }
    let storage_row = model.add_row(
        "storage",
        (0..hyperedges.len())
            .map(|i| (beta_vars[i], int(instance.hyperedge_storage(&hyperedges[i]))))
            .collect(),
        Relation::Le,
        &b * &instance.storage_cap,
    );

    let coefficients: Vec<Rational> = hyperedges
        .iter()
        .map(|e| hyperedge_coefficient(&instance.closure, instance.rho, e, &instance.failure_model))
        .collect();
    let mut layout = ModelLayout {
        model,
        hyperedge_index: (0..hyperedges.len()).collect(),
        hyperedges,
        x_vars,
        y_vars,
        beta_vars,
        candidates,
        coefficients,
        storage_row,
    };
    let objective = layout.repair_objective(instance.object_size);
    layout.model.set_objective(objective);
    Ok(layout)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl From<LpStatus> for SolveStatus {
    fn from(s: LpStatus) -> Self {
        match s {
            LpStatus::Optimal => SolveStatus::Optimal,
            LpStatus::Infeasible => SolveStatus::Infeasible,
            LpStatus::Unbounded => SolveStatus::Unbounded,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub variables: usize,
    pub rows: usize,
    pub nodes: u64,
    pub pivots: u64,
}

/// A concrete MDS-IFR code design with its cost pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodePlan {
    pub overlay: RepairOverlay,
    pub retrieval: RetrievalConfig,
    pub assignment: BlockAssignment,
    /// System repair cost `c_r`.
    pub repair_cost: Rational,
    /// System storage cost `c_s`.
    pub storage_cost: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub status: SolveStatus,
    pub plan: Option<CodePlan>,
    pub stats: SolverStats,
}

impl Solution {
    fn without_plan(status: SolveStatus, stats: SolverStats) -> Self {
        Solution {
            status,
            plan: None,
            stats,
        }
    }

    pub fn repair_cost(&self) -> Option<&Rational> {
        self.plan.as_ref().map(|p| &p.repair_cost)
    }

    pub fn storage_cost(&self) -> Option<&Rational> {
        self.plan.as_ref().map(|p| &p.storage_cost)
    }
}

/// `(c_r, c_s)` of an assignment on an overlay, from per-hyperedge
/// coefficients.
pub fn plan_costs(
    instance: &ProblemInstance,
    overlay: &RepairOverlay,
    assignment: &BlockAssignment,
) -> (Rational, Rational) {
    let b = int(assignment.object_size());
    let mut repair = Rational::zero();
    let mut storage = Rational::zero();
    for e in overlay.hyperedges() {
        let beta = assignment.get(e.index);
        if beta.is_zero() {
            continue;
        }
        let a = hyperedge_coefficient(&instance.closure, instance.rho, &e.vertices, &instance.failure_model);
        repair += a * &beta;
        storage += int(instance.hyperedge_storage(&e.vertices)) * &beta;
    }
    (repair / &b, storage / b)
}

fn extract_plan(
    instance: &ProblemInstance,
    layout: &ModelLayout,
    values: &[Rational],
) -> Result<CodePlan, OptimizerError> {
    let selected: Vec<Vec<usize>> = layout
        .x_vars
        .iter()
        .enumerate()
        .filter(|(_, &j)| values[j].is_one())
        .map(|(pos, _)| layout.hyperedges[pos].clone())
        .collect();
    let overlay = RepairOverlay::new(instance.n(), instance.rho, instance.d, selected)?;
    let assignment = BlockAssignment::with(
        instance.object_size,
        layout
            .beta_vars
            .iter()
            .enumerate()
            .map(|(pos, &j)| (layout.hyperedge_index[pos], values[j].clone())),
    );
    let chosen = layout
        .y_vars
        .iter()
        .enumerate()
        .filter(|(_, &j)| values[j].is_one())
        .map(|(pos, _)| layout.candidates[pos].clone())
        .collect();
    let retrieval = RetrievalConfig {
        n: instance.n(),
        k: instance.k,
        fixed: normalize_fixed(instance.n(), instance.k, &instance.fixed_sets)?,
        chosen,
    };
    let (repair_cost, storage_cost) = plan_costs(instance, &overlay, &assignment);
    Ok(CodePlan {
        overlay,
        retrieval,
        assignment,
        repair_cost,
        storage_cost,
    })
}

fn solve_layout(
    instance: &ProblemInstance,
    layout: &ModelLayout,
) -> Result<Solution, OptimizerError> {
    let r = solve_ilp(&layout.model)?;
    let stats = SolverStats {
        variables: layout.model.vars.len(),
        rows: layout.model.rows.len(),
        nodes: r.nodes,
        pivots: r.pivots,
    };
    if r.status != LpStatus::Optimal {
        return Ok(Solution::without_plan(r.status.into(), stats));
    }
    debug_assert!(layout.model.is_feasible(&r.values));
    Ok(Solution {
        status: SolveStatus::Optimal,
        plan: Some(extract_plan(instance, layout, &r.values)?),
        stats,
    })
}

/// Exact optimum of the full model; with `relax_b` the block sizes are
/// continuous (the asymptotically achievable repair cost).
pub fn solve_full(instance: &ProblemInstance, relax_b: bool) -> Result<Solution, OptimizerError> {
    let layout = build_model(instance, relax_b)?;
    solve_layout(instance, &layout)
}

/// Minimizes `λ·c_r + (1−λ)·c_s` over the integer model.
pub fn solve_weighted_sum(
    instance: &ProblemInstance,
    lambda: &Rational,
) -> Result<Solution, OptimizerError> {
    let mut layout = build_model(instance, false)?;
    let repair = layout.repair_objective(instance.object_size);
    let storage = layout.storage_objective(instance);
    let mu = Rational::one() - lambda;
    let objective = repair
        .iter()
        .zip(&storage)
        .map(|(r, s)| lambda * r + &mu * s)
        .collect();
    layout.model.set_objective(objective);
    solve_layout(instance, &layout)
}

/// One frontier point with the design that attains it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontierPoint {
    pub repair_cost: Rational,
    pub storage_cost: Rational,
    pub witness: Solution,
}

/// Lists every Pareto-optimal `(c_r, c_s)` pair under the storage cap, by
/// alternately minimizing repair cost and then storage cost at that repair
/// cost, and tightening the storage bound strictly below the last point.
pub fn pareto_frontier(instance: &ProblemInstance) -> Result<Vec<FrontierPoint>, OptimizerError> {
    let mut layout = build_model(instance, false)?;
    let repair = layout.repair_objective(instance.object_size);
    let storage = layout.storage_objective(instance);
    let b = int(instance.object_size);
    let mut frontier = Vec::new();
    loop {
        layout.model.set_objective(repair.clone());
        let first = solve_ilp(&layout.model)?;
        if first.status != LpStatus::Optimal {
            break;
        }
        let cr = first.objective;

        let pin = layout.model.add_row(
            "pin_repair",
            repair
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j, c.clone()))
                .collect(),
            Relation::Eq,
            cr.clone(),
        );
        layout.model.set_objective(storage.clone());
        let mut witness = solve_layout(instance, &layout)?;
        layout.model.rows.remove(pin);
        let Some(plan) = witness.plan.as_ref() else {
            return Err(OptimizerError::InvalidInstance(
                "storage minimization lost feasibility at a pinned repair cost".into(),
            ));
        };
        let cs = plan.storage_cost.clone();
        witness.stats.nodes += first.nodes;
        witness.stats.pivots += first.pivots;
        frontier.push(FrontierPoint {
            repair_cost: cr,
            storage_cost: cs.clone(),
            witness,
        });
        // integral s and β make B·c_s an integer, so c_s < c_s* is B·c_s ≤ B·c_s* − 1
        layout.model.rows[layout.storage_row].rhs = &b * &cs - Rational::one();
    }
    Ok(frontier)
}

/// Three steps: greedy overlay, greedy retrieval sets, then block sizes
/// optimized with overlay and retrieval sets held fixed. When the greedy
/// recursive retrieval sets admit no block sizes, the sets ranked by hits on
/// the whole overlay are tried instead.
pub fn heuristic_solve(instance: &ProblemInstance, relax_b: bool) -> Result<Solution, OptimizerError> {
    instance.validate()?;
    let overlay = greedy_overlay(&instance.closure, instance.rho, instance.d)?;
    let recursive = retrieval_sets(&overlay, instance.k, instance.w, &instance.fixed_sets)?;
    let first = block_sizes(instance, overlay.clone(), recursive, relax_b)?;
    if first.status != SolveStatus::Infeasible {
        return Ok(first);
    }
    let ranked = ranked_retrieval_sets(&overlay, instance.k, instance.w, &instance.fixed_sets)?;
    let mut second = block_sizes(instance, overlay, ranked, relax_b)?;
    second.stats.nodes += first.stats.nodes;
    second.stats.pivots += first.stats.pivots;
    Ok(second)
}

fn block_sizes(
    instance: &ProblemInstance,
    overlay: RepairOverlay,
    retrieval: RetrievalConfig,
    relax_b: bool,
) -> Result<Solution, OptimizerError> {
    let layout = reduced_model(instance, &overlay, &retrieval, relax_b);
    let (status, values, nodes, pivots) = if relax_b {
        let r = solve_lp(&layout.model)?;
        (r.status, r.values, 1, r.pivots)
    } else {
        let r = solve_ilp(&layout.model)?;
        (r.status, r.values, r.nodes, r.pivots)
    };
    let stats = SolverStats {
        variables: layout.model.vars.len(),
        rows: layout.model.rows.len(),
        nodes,
        pivots,
    };
    if status != LpStatus::Optimal {
        return Ok(Solution::without_plan(status.into(), stats));
    }
    let assignment = BlockAssignment::with(
        instance.object_size,
        layout
            .beta_vars
            .iter()
            .enumerate()
            .map(|(pos, &j)| (layout.hyperedge_index[pos], values[j].clone())),
    );
    let (repair_cost, storage_cost) = plan_costs(instance, &overlay, &assignment);
    Ok(Solution {
        status: SolveStatus::Optimal,
        plan: Some(CodePlan {
            overlay,
            retrieval,
            assignment,
            repair_cost,
            storage_cost,
        }),
        stats,
    })
}

/// Block-size model for a fixed overlay and fixed retrieval sets:
/// `|H|` variables, `|H| + w + 1` rows.
pub fn reduced_model(
    instance: &ProblemInstance,
    overlay: &RepairOverlay,
    retrieval: &RetrievalConfig,
    relax_b: bool,
) -> ModelLayout {
    let b = int(instance.object_size);
    let mut model = LinearModel::default();
    let edges = overlay.hyperedges();
    let beta_vars: Vec<usize> = edges
        .iter()
        .map(|e| {
            model.add_var(Variable {
                name: format!("b_{}", e.index + 1),
                lower: Rational::zero(),
                upper: None,
                integer: !relax_b,
                role: VarRole::Block(e.index),
            })
        })
        .collect();
    for (pos, e) in edges.iter().enumerate() {
        model.add_row(
            format!("link_{}", e.index + 1),
            vec![(beta_vars[pos], Rational::one())],
            Relation::Le,
            b.clone(),
        );
    }
    for (j, r) in retrieval.all_sets().enumerate() {
        let coeffs = edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.hits(r))
            .map(|(pos, _)| (beta_vars[pos], Rational::one()))
            .collect();
        model.add_row(format!("retrieve_{}", j + 1), coeffs, Relation::Ge, b.clone());
    }
    let storage_row = model.add_row(
        "storage",
        edges
            .iter()
            .enumerate()
            .map(|(pos, e)| (beta_vars[pos], int(instance.hyperedge_storage(&e.vertices))))
            .collect(),
        Relation::Le,
        &b * &instance.storage_cap,
    );
    let coefficients: Vec<Rational> = edges
        .iter()
        .map(|e| hyperedge_coefficient(&instance.closure, instance.rho, &e.vertices, &instance.failure_model))
        .collect();
    let mut layout = ModelLayout {
        model,
        hyperedges: edges.iter().map(|e| e.vertices.clone()).collect(),
        hyperedge_index: edges.iter().map(|e| e.index).collect(),
        x_vars: Vec::new(),
        y_vars: Vec::new(),
        beta_vars,
        candidates: Vec::new(),
        coefficients,
        storage_row,
    };
    let objective = layout.repair_objective(instance.object_size);
    layout.model.set_objective(objective);
    layout
}

/// Worst-case cost increase of [`scale_and_round`]:
/// `(Σ a_i / γB, Σ S_i / γB)` over the overlay's hyperedges.
pub fn rounding_bounds(instance: &ProblemInstance, overlay: &RepairOverlay, gamma: u64) -> (Rational, Rational) {
    let denom = int(instance.object_size * gamma);
    let mut a = Rational::zero();
    let mut s = Rational::zero();
    for e in overlay.hyperedges() {
        a += hyperedge_coefficient(&instance.closure, instance.rho, &e.vertices, &instance.failure_model);
        s += int(instance.hyperedge_storage(&e.vertices));
    }
    (a / &denom, s / denom)
}

/// Integer design at object size `γB`: every `γβ_i` rounded up.
pub fn scale_and_round(instance: &ProblemInstance, plan: &CodePlan, gamma: u64) -> CodePlan {
    assert!(gamma >= 1, "scale factor must be at least 1");
    let scaled = plan.assignment.scaled(gamma);
    let rounded = BlockAssignment::with(
        scaled.object_size(),
        scaled.entries().map(|(i, b)| (i, b.ceil())).collect::<Vec<_>>(),
    );
    let scaled_instance = instance.with_object_size(rounded.object_size());
    let (repair_cost, storage_cost) = plan_costs(&scaled_instance, &plan.overlay, &rounded);
    CodePlan {
        overlay: plan.overlay.clone(),
        retrieval: plan.retrieval.clone(),
        assignment: rounded,
        repair_cost,
        storage_cost,
    }
}

/// Checks a plan against the model constraints (degree, block links,
/// retrieval sets); the storage cap is checked against `cap`.
pub fn plan_is_feasible(instance: &ProblemInstance, plan: &CodePlan, cap: &Rational) -> bool {
    let a = &plan.assignment;
    let b = int(a.object_size());
    a.validate(&plan.overlay).is_ok()
        && plan.overlay.degrees().iter().all(|&deg| deg <= instance.d)
        && plan.retrieval.w() == instance.w
        && plan
            .retrieval
            .all_sets()
            .all(|r| crate::retrieval::packets_reachable(r, &plan.overlay, a) >= b)
        && plan.storage_cost <= *cap
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgraph::Link;
    use crate::rational::ratio;

    fn complete(storage: Vec<Cost>, costs: &[(usize, usize, Cost)]) -> NetworkSpec {
        let links = costs.iter().map(|&(u, v, cost)| Link { u, v, cost }).collect();
        NetworkSpec::new(storage, links).unwrap()
    }

    fn triangle(cap: u64) -> ProblemInstance {
        let net = complete(vec![1, 1, 1], &[(0, 1, 1), (0, 2, 2), (1, 2, 3)]);
        ProblemInstance::new(net, 1, 2, 1, 1, vec![], 1, int(cap), FailureModel::Uniform)
    }

    fn var(model: &mut LinearModel, name: &str, lower: i64, upper: Option<i64>) -> usize {
        model.add_var(Variable {
            name: name.into(),
            lower: ratio(lower, 1),
            upper: upper.map(|u| ratio(u, 1)),
            integer: false,
            role: VarRole::Block(0),
        })
    }

    #[test]
    fn lp_lower_bound_is_attained() {
        let mut m = LinearModel::default();
        let x = var(&mut m, "x", 0, None);
        m.add_row("lo", vec![(x, int(1))], Relation::Ge, int(3));
        m.add_row("hi", vec![(x, int(1))], Relation::Le, int(10));
        m.set_objective(vec![int(1)]);
        let r = solve_lp(&m).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.values, vec![int(3)]);
    }

    #[test]
    fn lp_contradictory_rows_are_infeasible() {
        let mut m = LinearModel::default();
        let x = var(&mut m, "x", 0, None);
        m.add_row("lo", vec![(x, int(1))], Relation::Ge, int(5));
        m.add_row("hi", vec![(x, int(1))], Relation::Le, int(4));
        assert_eq!(solve_lp(&m).unwrap().status, LpStatus::Infeasible);
        let mut m = LinearModel::default();
        var(&mut m, "x", 3, Some(2));
        assert_eq!(solve_lp(&m).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn lp_unbounded_is_reported() {
        let mut m = LinearModel::default();
        let x = var(&mut m, "x", 0, None);
        let y = var(&mut m, "y", 0, None);
        m.add_row("r", vec![(x, int(1)), (y, -int(1))], Relation::Le, int(1));
        m.set_objective(vec![-int(1), int(0)]);
        assert_eq!(solve_lp(&m).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn lp_fractional_optimum() {
        // max x + y s.t. 2x + y <= 4, x + 3y <= 6
        let mut m = LinearModel::default();
        let x = var(&mut m, "x", 0, None);
        let y = var(&mut m, "y", 0, None);
        m.add_row("a", vec![(x, int(2)), (y, int(1))], Relation::Le, int(4));
        m.add_row("b", vec![(x, int(1)), (y, int(3))], Relation::Le, int(6));
        m.set_objective(vec![-int(1), -int(1)]);
        let r = solve_lp(&m).unwrap();
        assert_eq!(r.values, vec![ratio(6, 5), ratio(8, 5)]);
        assert_eq!(r.objective, ratio(-14, 5));
    }

    #[test]
    fn lp_with_equality_and_redundant_row() {
        let mut m = LinearModel::default();
        let x = var(&mut m, "x", 0, None);
        let y = var(&mut m, "y", 0, None);
        m.add_row("e1", vec![(x, int(1)), (y, int(1))], Relation::Eq, int(2));
        m.add_row("e2", vec![(x, int(2)), (y, int(2))], Relation::Eq, int(4));
        m.set_objective(vec![int(3), int(1)]);
        let r = solve_lp(&m).unwrap();
        assert_eq!(r.values, vec![int(0), int(2)]);
    }

    #[test]
    fn ilp_rounds_through_branching() {
        // max x + y s.t. 2x + 2y <= 3, integers -> 1
        let mut m = LinearModel::default();
        let x = var(&mut m, "x", 0, None);
        let y = var(&mut m, "y", 0, None);
        m.vars[x].integer = true;
        m.vars[y].integer = true;
        m.add_row("a", vec![(x, int(2)), (y, int(2))], Relation::Le, int(3));
        m.set_objective(vec![-int(1), -int(1)]);
        let r = solve_ilp(&m).unwrap();
        assert_eq!(r.objective, -int(1));
        let mut m2 = m.clone();
        m2.add_row("b", vec![(x, int(2))], Relation::Eq, int(1));
        assert_eq!(solve_ilp(&m2).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn triangle_model_dimensions() {
        let layout = build_model(&triangle(100), false).unwrap();
        assert_eq!(layout.x_vars.len(), 3);
        assert_eq!(layout.y_vars.len(), 3);
        assert_eq!(layout.beta_vars.len(), 3);
        assert_eq!(layout.model.rows.len(), 3 + 3 + 1 + 3 + 1);
        assert_eq!(layout.model.integer_count(), 9);
        let relaxed = build_model(&triangle(100), true).unwrap();
        assert_eq!(relaxed.model.integer_count(), 6);
        for &j in &relaxed.beta_vars {
            assert_eq!(relaxed.model.vars[j].upper, Some(int(1)));
        }
    }

    #[test]
    fn all_sets_fixed_drops_retrieval_variables() {
        let mut inst = triangle(100);
        inst.fixed_sets = vec![vec![0]];
        let layout = build_model(&inst, false).unwrap();
        assert!(layout.y_vars.is_empty());
        assert_eq!(layout.model.rows.len(), 3 + 3 + 1 + 1);
    }

    #[test]
    fn triangle_optimum() {
        let sol = solve_full(&triangle(100), false).unwrap();
        let plan = sol.plan.unwrap();
        assert_eq!(plan.repair_cost, ratio(2, 3));
        assert_eq!(plan.storage_cost, int(2));
        assert_eq!(plan.assignment.get(0), int(1));
        assert_eq!(plan.retrieval.chosen.len(), 1);
        assert!(plan.retrieval.chosen[0] == vec![0] || plan.retrieval.chosen[0] == vec![1]);
    }

    #[test]
    fn zero_storage_cap_is_infeasible() {
        let sol = solve_full(&triangle(0), false).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
        assert!(sol.plan.is_none());
    }

    #[test]
    fn triangle_frontier_is_one_point() {
        let f = pareto_frontier(&triangle(100)).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].repair_cost, ratio(2, 3));
        assert_eq!(f[0].storage_cost, int(2));
        assert!(pareto_frontier(&triangle(0)).unwrap().is_empty());
    }

    #[test]
    fn triangle_heuristic_matches_optimum() {
        let sol = heuristic_solve(&triangle(100), false).unwrap();
        let plan = sol.plan.unwrap();
        // a triangle has degree 2 everywhere, so d = 2 admits all three edges
        assert_eq!(plan.overlay.canonical_indices(), vec![0, 1, 2]);
        assert_eq!(plan.retrieval.chosen, vec![vec![0]]);
        assert_eq!(plan.repair_cost, ratio(2, 3));
        assert_eq!(sol.stats.variables, 3);
        assert_eq!(sol.stats.rows, 3 + 1 + 1);
    }

    #[test]
    fn scaling_an_integral_plan_by_one_is_identity() {
        let inst = triangle(100);
        let plan = solve_full(&inst, false).unwrap().plan.unwrap();
        assert_eq!(scale_and_round(&inst, &plan, 1), plan);
    }

    #[test]
    fn symmetric_instance_is_relabeling_invariant() {
        let costs: Vec<(usize, usize, Cost)> =
            subsets(4, 2).map(|p| (p[0], p[1], 3)).collect();
        let base = ProblemInstance::new(
            complete(vec![2; 4], &costs),
            1,
            2,
            2,
            2,
            vec![vec![0, 1]],
            2,
            int(100),
            FailureModel::Uniform,
        );
        let mut moved = base.clone();
        moved.fixed_sets = vec![vec![2, 3]];
        let a = solve_full(&base, false).unwrap();
        let b = solve_full(&moved, false).unwrap();
        assert_eq!(a.repair_cost(), b.repair_cost());
    }

    #[test]
    fn invalid_instances_are_rejected() {
        let mut inst = triangle(1);
        inst.rho = 3;
        assert!(matches!(build_model(&inst, false), Err(OptimizerError::InvalidInstance(_))));
        let mut inst = triangle(1);
        inst.w = 4;
        assert!(build_model(&inst, false).is_err());
        let mut inst = triangle(1);
        inst.object_size = 0;
        assert!(build_model(&inst, false).is_err());
    }
}
