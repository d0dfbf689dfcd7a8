//! Instance files: network, parameters and failure model as JSON.

use std::path::Path;

use ifropt_core::netgraph::{build_network, communication_costs, RawEdge, RawNetwork, RawNode, Transmission};
use ifropt_core::optimizer::ProblemInstance;
use ifropt_core::rational::{parse_exact, to_exact_string, Rational};
use ifropt_core::{FailureModel, FailurePattern};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// An exact number written either as a JSON integer or as a "p/q" string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExactValue {
    Integer(i64),
    Text(String),
}

impl ExactValue {
    pub fn parse(&self) -> CliResult<Rational> {
        match self {
            ExactValue::Integer(v) => Ok(Rational::from_integer((*v).into())),
            ExactValue::Text(s) => parse_exact(s).map_err(|e| CliError::usage(format!("bad number {s:?}: {}", e.0))),
        }
    }

    /// Integers stay integers, everything else becomes "p/q".
    pub fn from_rational(r: &Rational) -> Self {
        match (r.is_integer(), num_traits::ToPrimitive::to_i64(&r.to_integer())) {
            (true, Some(v)) => ExactValue::Integer(v),
            _ => ExactValue::Text(to_exact_string(r)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeEntry {
    pub id: i64,
    pub storage_cost: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub u: i64,
    pub v: i64,
    pub cost: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub rho: usize,
    pub d: usize,
    pub k: usize,
    pub w: usize,
    /// Number of fixed sets; checked against `fixed_retrieval_sets` when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w1: Option<usize>,
    #[serde(rename = "B")]
    pub object_size: u64,
    #[serde(rename = "Cs")]
    pub storage_cap: ExactValue,
    #[serde(default)]
    pub fixed_retrieval_sets: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureMode {
    #[default]
    Uniform,
    Weighted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternWeight {
    pub pattern: Vec<i64>,
    pub weight: ExactValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureModelEntry {
    pub mode: FailureMode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<PatternWeight>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransmissionMode {
    #[default]
    MultiHop,
    SingleHop,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub nodes: Vec<NodeEntry>,
    pub edges: Vec<EdgeEntry>,
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_model: Option<FailureModelEntry>,
    #[serde(default)]
    pub transmission: TransmissionMode,
}

/// 1-based node list to sorted 0-based vertices.
pub fn to_vertices(ids: &[i64], n: usize, what: &str) -> CliResult<Vec<usize>> {
    let mut out = Vec::with_capacity(ids.len());
    for &id in ids {
        if id < 1 || id as u64 > n as u64 {
            return Err(CliError::usage(format!("{what} references unknown node {id}")));
        }
        out.push(id as usize - 1);
    }
    out.sort_unstable();
    Ok(out)
}

/// 0-based vertices back to 1-based ids.
pub fn to_ids(vertices: &[usize]) -> Vec<i64> {
    vertices.iter().map(|&v| v as i64 + 1).collect()
}

impl InstanceFile {
    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("invalid instance: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn raw_network(&self) -> RawNetwork {
        RawNetwork {
            nodes: self
                .nodes
                .iter()
                .map(|n| RawNode {
                    id: n.id,
                    storage_cost: n.storage_cost,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    u: e.u,
                    v: e.v,
                    cost: e.cost,
                })
                .collect(),
        }
    }

    /// Validates everything and builds the optimizer's view.
    pub fn to_instance(&self) -> CliResult<ProblemInstance> {
        let network = build_network(&self.raw_network()).map_err(CliError::usage)?;
        let n = network.n();
        let mode = match self.transmission {
            TransmissionMode::MultiHop => Transmission::MultiHop,
            TransmissionMode::SingleHop => Transmission::SingleHop,
        };
        let closure = communication_costs(&network, mode).map_err(CliError::usage)?;
        let p = &self.params;
        let fixed_sets = p
            .fixed_retrieval_sets
            .iter()
            .map(|s| to_vertices(s, n, "fixed retrieval set"))
            .collect::<CliResult<Vec<_>>>()?;
        if let Some(w1) = p.w1 {
            if w1 != fixed_sets.len() {
                return Err(CliError::usage(format!(
                    "w1 = {w1} but {} fixed retrieval sets are listed",
                    fixed_sets.len()
                )));
            }
        }
        let failure_model = match &self.failure_model {
            None => FailureModel::Uniform,
            Some(entry) => match entry.mode {
                FailureMode::Uniform => {
                    if !entry.weights.is_empty() {
                        return Err(CliError::usage("uniform failure model takes no weights"));
                    }
                    FailureModel::Uniform
                }
                FailureMode::Weighted => {
                    let mut weights = Vec::new();
                    for pw in &entry.weights {
                        let nodes = to_vertices(&pw.pattern, n, "failure pattern")?;
                        let pattern = FailurePattern::new(n, nodes).map_err(CliError::usage)?;
                        weights.push((pattern, pw.weight.parse()?));
                    }
                    FailureModel::weighted(p.rho, weights).map_err(CliError::usage)?
                }
            },
        };
        let instance = ProblemInstance {
            network,
            closure,
            rho: p.rho,
            d: p.d,
            k: p.k,
            w: p.w,
            fixed_sets,
            object_size: p.object_size,
            storage_cap: p.storage_cap.parse()?,
            failure_model,
        };
        instance.validate()?;
        Ok(instance)
    }
}
