//! Solution files: a code design with exact costs as JSON.

use std::path::Path;

use ifropt_core::optimizer::{plan_costs, plan_is_feasible, CodePlan, ProblemInstance, Solution, SolveStatus};
use ifropt_core::overlay::RepairOverlay;
use ifropt_core::rational::{parse_exact, to_exact_string, to_f64, Rational};
use ifropt_core::retrieval::normalize_fixed;
use ifropt_core::{BlockAssignment, RetrievalConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::instance::{to_ids, to_vertices, ExactValue};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostEntry {
    /// Reduced "p/q".
    pub exact: String,
    /// Display only.
    pub decimal: f64,
}

impl CostEntry {
    pub fn new(r: &Rational) -> Self {
        CostEntry {
            exact: to_exact_string(r),
            decimal: to_f64(r),
        }
    }

    pub fn value(&self) -> CliResult<Rational> {
        let r = parse_exact(&self.exact).map_err(|e| CliError::usage(format!("bad exact value: {}", e.0)))?;
        if to_exact_string(&r) != self.exact {
            return Err(CliError::usage(format!("{:?} is not a reduced p/q fraction", self.exact)));
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaEntry {
    pub hyperedge: Vec<i64>,
    pub value: ExactValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StatsEntry {
    pub variables: usize,
    pub rows: usize,
    pub nodes: u64,
    pub pivots: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StatusEntry {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub status: StatusEntry,
    /// "ilp", "lp" or "heuristic"; "pareto" for frontier witnesses.
    pub method: String,
    pub relax_b: bool,
    pub object_size: u64,
    pub c_r: Option<CostEntry>,
    pub c_s: Option<CostEntry>,
    /// Hyperedges in overlay order, 1-based.
    pub overlay: Vec<Vec<i64>>,
    /// Canonical rank of each overlay hyperedge among all (ρ+1)-subsets.
    #[serde(default)]
    pub overlay_indices: Vec<usize>,
    pub beta: Vec<BetaEntry>,
    /// All retrieval sets, pre-determined ones first.
    pub retrieval_sets: Vec<Vec<i64>>,
    pub stats: StatsEntry,
}

impl SolutionFile {
    pub fn from_solution(solution: &Solution, method: &str, relax_b: bool, object_size: u64) -> Self {
        let status = match solution.status {
            SolveStatus::Optimal => StatusEntry::Optimal,
            SolveStatus::Infeasible => StatusEntry::Infeasible,
            SolveStatus::Unbounded => StatusEntry::Unbounded,
        };
        let s = solution.stats;
        let stats = StatsEntry {
            variables: s.variables,
            rows: s.rows,
            nodes: s.nodes,
            pivots: s.pivots,
        };
        let mut file = SolutionFile {
            status,
            method: method.to_string(),
            relax_b,
            object_size,
            c_r: None,
            c_s: None,
            overlay: Vec::new(),
            overlay_indices: Vec::new(),
            beta: Vec::new(),
            retrieval_sets: Vec::new(),
            stats,
        };
        if let Some(plan) = &solution.plan {
            file.c_r = Some(CostEntry::new(&plan.repair_cost));
            file.c_s = Some(CostEntry::new(&plan.storage_cost));
            file.overlay = plan.overlay.hyperedges().iter().map(|e| to_ids(&e.vertices)).collect();
            file.overlay_indices = plan.overlay.hyperedges().iter().map(|e| e.index).collect();
            file.beta = plan
                .overlay
                .hyperedges()
                .iter()
                .map(|e| BetaEntry {
                    hyperedge: to_ids(&e.vertices),
                    value: ExactValue::from_rational(&plan.assignment.get(e.index)),
                })
                .collect();
            file.retrieval_sets = plan.retrieval.all_sets().map(|s| to_ids(s)).collect();
        }
        file
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: invalid solution: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serializes")
    }

    /// Rebuilds the design against its instance and re-checks it: the
    /// constraints, and that the stored exact costs are the recomputed
    /// ones. A mismatch is an internal invariant violation.
    pub fn to_plan(&self, instance: &ProblemInstance) -> CliResult<CodePlan> {
        if self.status != StatusEntry::Optimal {
            return Err(CliError::infeasible(format!("solution status is {:?}", self.status)));
        }
        let n = instance.n();
        if self.object_size != instance.object_size {
            return Err(CliError::usage(format!(
                "solution is for B = {}, instance has B = {}",
                self.object_size, instance.object_size
            )));
        }
        let edges = self
            .overlay
            .iter()
            .map(|e| to_vertices(e, n, "overlay"))
            .collect::<CliResult<Vec<_>>>()?;
        let overlay = RepairOverlay::new(n, instance.rho, instance.d, edges).map_err(CliError::usage)?;
        if !self.overlay_indices.is_empty() && overlay.hyperedges().iter().map(|e| e.index).ne(self.overlay_indices.iter().copied()) {
            return Err(CliError::usage("overlay_indices do not match the overlay hyperedges"));
        }
        let mut assignment = BlockAssignment::new(instance.object_size);
        for b in &self.beta {
            let vertices = to_vertices(&b.hyperedge, n, "beta")?;
            let edge = overlay
                .hyperedges()
                .iter()
                .find(|e| e.vertices == vertices)
                .ok_or_else(|| CliError::usage(format!("beta on {:?}, which is not in the overlay", b.hyperedge)))?;
            assignment.set(edge.index, b.value.parse()?);
        }
        assignment.validate(&overlay).map_err(CliError::usage)?;
        let fixed = normalize_fixed(n, instance.k, &instance.fixed_sets).map_err(CliError::usage)?;
        let sets = self
            .retrieval_sets
            .iter()
            .map(|s| to_vertices(s, n, "retrieval set"))
            .collect::<CliResult<Vec<_>>>()?;
        if sets.len() < fixed.len() || sets[..fixed.len()] != fixed[..] {
            return Err(CliError::usage("retrieval sets must start with the instance's fixed sets"));
        }
        let retrieval = RetrievalConfig {
            n,
            k: instance.k,
            chosen: sets[fixed.len()..].to_vec(),
            fixed,
        };
        let (repair_cost, storage_cost) = plan_costs(instance, &overlay, &assignment);
        let plan = CodePlan {
            overlay,
            retrieval,
            assignment,
            repair_cost,
            storage_cost,
        };
        let stored = |c: &Option<CostEntry>, what: &str| -> CliResult<Rational> {
            c.as_ref()
                .ok_or_else(|| CliError::usage(format!("optimal solution without {what}")))?
                .value()
        };
        if stored(&self.c_r, "c_r")? != plan.repair_cost || stored(&self.c_s, "c_s")? != plan.storage_cost {
            return Err(CliError::internal("stored costs differ from the recomputed costs"));
        }
        if !plan_is_feasible(instance, &plan, &instance.storage_cap) {
            return Err(CliError::internal("solution violates the instance constraints"));
        }
        Ok(plan)
    }
}
