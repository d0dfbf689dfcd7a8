//! Exact two-phase primal simplex on a dense rational tableau.
//!
//! Pivoting follows Dantzig's rule and switches to Bland's rule for the rest
//! of a phase after a long run of degenerate pivots, which rules out
//! cycling. Every optimum is checked against an independently assembled
//! dual certificate before it is returned.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::model::{LinearModel, Relation};
use super::OptimizerError;
use crate::rational::Rational;

/// Consecutive degenerate pivots tolerated before switching to Bland.
const DEGENERATE_RUN: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpResult {
    pub status: LpStatus,
    /// Variable values (empty unless optimal).
    pub values: Vec<Rational>,
    pub objective: Rational,
    pub pivots: u64,
}

impl LpResult {
    fn status_only(status: LpStatus, pivots: u64) -> Self {
        LpResult {
            status,
            values: Vec::new(),
            objective: Rational::zero(),
            pivots,
        }
    }
}

/// Variable bounds `(lower, upper)`.
pub type Bounds = Vec<(Rational, Option<Rational>)>;

pub fn model_bounds(model: &LinearModel) -> Bounds {
    model
        .vars
        .iter()
        .map(|v| (v.lower.clone(), v.upper.clone()))
        .collect()
}

/// Solves the LP relaxation (integrality ignored).
pub fn solve_lp(model: &LinearModel) -> Result<LpResult, OptimizerError> {
    solve_lp_bounded(model, &model_bounds(model))
}

/// Standard form: `min c·z`, `A z (rel) b`, `z ≥ 0`, `b ≥ 0`.
struct Standard {
    /// model variable for each column
    columns: Vec<usize>,
    rows: Vec<Vec<(usize, Rational)>>,
    relations: Vec<Relation>,
    rhs: Vec<Rational>,
    cost: Vec<Rational>,
}

/// Solves with the given bounds in place of the model's own.
pub fn solve_lp_bounded(model: &LinearModel, bounds: &[(Rational, Option<Rational>)]) -> Result<LpResult, OptimizerError> {
    let nvars = model.vars.len();
    assert_eq!(bounds.len(), nvars);

    // fixed variables are substituted out
    let mut col_of = vec![None; nvars];
    let mut columns = Vec::new();
    for (j, (lo, up)) in bounds.iter().enumerate() {
        match up {
            Some(u) if u < lo => return Ok(LpResult::status_only(LpStatus::Infeasible, 0)),
            Some(u) if u == lo => {}
            _ => {
                col_of[j] = Some(columns.len());
                columns.push(j);
            }
        }
    }

    let mut std_rows = Vec::new();
    let mut relations = Vec::new();
    let mut rhs = Vec::new();
    let mut push_row = |mut coeffs: Vec<(usize, Rational)>, mut rel: Relation, mut b: Rational| {
        if b.is_negative() {
            for (_, a) in coeffs.iter_mut() {
                *a = -&*a;
            }
            b = -b;
            rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        std_rows.push(coeffs);
        relations.push(rel);
        rhs.push(b);
    };
    for row in &model.rows {
        let mut b = row.rhs.clone();
        let mut coeffs = Vec::with_capacity(row.coeffs.len());
        for (j, a) in &row.coeffs {
            b -= a * &bounds[*j].0;
            if let Some(c) = col_of[*j] {
                coeffs.push((c, a.clone()));
            }
        }
        if coeffs.is_empty() {
            if !row.relation.holds(&Rational::zero(), &b) {
                return Ok(LpResult::status_only(LpStatus::Infeasible, 0));
            }
            continue;
        }
        push_row(coeffs, row.relation, b);
    }
    for (c, &j) in columns.iter().enumerate() {
        if let (lo, Some(u)) = &bounds[j] {
            push_row(vec![(c, Rational::one())], Relation::Le, u - lo);
        }
    }
    let cost = columns.iter().map(|&j| model.objective[j].clone()).collect();
    let std = Standard {
        columns,
        rows: std_rows,
        relations,
        rhs,
        cost,
    };

    let (status, z, pivots) = Tableau::run(&std)?;
    if status != LpStatus::Optimal {
        return Ok(LpResult::status_only(status, pivots));
    }
    let mut values: Vec<Rational> = bounds.iter().map(|(lo, _)| lo.clone()).collect();
    for (c, &j) in std.columns.iter().enumerate() {
        values[j] += &z[c];
    }
    let objective = model.objective_value(&values);
    Ok(LpResult {
        status,
        values,
        objective,
        pivots,
    })
}

struct Tableau {
    /// m rows, each `ncols + 1` wide (last entry is the right-hand side)
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// reduced costs, last entry is minus the objective value
    d: Vec<Rational>,
    ncols: usize,
    first_artificial: usize,
    pivots: u64,
}

impl Tableau {
    fn run(std: &Standard) -> Result<(LpStatus, Vec<Rational>, u64), OptimizerError> {
        let m = std.rows.len();
        let nstruct = std.columns.len();
        let nslack = std
            .relations
            .iter()
            .filter(|r| **r != Relation::Eq)
            .count();
        let nart = std
            .relations
            .iter()
            .filter(|r| **r != Relation::Le)
            .count();
        let ncols = nstruct + nslack + nart;
        let first_artificial = nstruct + nslack;

        let mut t = vec![vec![Rational::zero(); ncols + 1]; m];
        let mut basis = vec![0; m];
        // column holding B⁻¹ e_i at the start, for dual extraction
        let mut unit_col = vec![0; m];
        let (mut s, mut a) = (nstruct, first_artificial);
        for i in 0..m {
            for (c, v) in &std.rows[i] {
                t[i][*c] = v.clone();
            }
            t[i][ncols] = std.rhs[i].clone();
            match std.relations[i] {
                Relation::Le => {
                    t[i][s] = Rational::one();
                    basis[i] = s;
                    s += 1;
                }
                Relation::Ge => {
                    t[i][s] = -Rational::one();
                    s += 1;
                    t[i][a] = Rational::one();
                    basis[i] = a;
                    a += 1;
                }
                Relation::Eq => {
                    t[i][a] = Rational::one();
                    basis[i] = a;
                    a += 1;
                }
            }
            unit_col[i] = basis[i];
        }

        let mut tab = Tableau {
            t,
            basis,
            d: Vec::new(),
            ncols,
            first_artificial,
            pivots: 0,
        };

        if nart > 0 {
            let mut cost = vec![Rational::zero(); ncols];
            for c in cost.iter_mut().skip(first_artificial) {
                *c = Rational::one();
            }
            tab.price(&cost);
            let status = tab.optimize(true);
            debug_assert_eq!(status, LpStatus::Optimal);
            if tab.d[ncols].is_negative() {
                return Ok((LpStatus::Infeasible, Vec::new(), tab.pivots));
            }
            tab.drive_out_artificials();
        }

        let mut cost = vec![Rational::zero(); ncols];
        cost[..nstruct].clone_from_slice(&std.cost);
        tab.price(&cost);
        let status = tab.optimize(false);
        if status != LpStatus::Optimal {
            return Ok((status, Vec::new(), tab.pivots));
        }

        let mut z = vec![Rational::zero(); nstruct];
        for (i, &b) in tab.basis.iter().enumerate() {
            if b < nstruct {
                z[b] = tab.t[i][ncols].clone();
            }
        }
        let duals: Vec<Rational> = unit_col
            .iter()
            .map(|&u| {
                tab.basis
                    .iter()
                    .enumerate()
                    .map(|(r, &b)| &cost[b] * &tab.t[r][u])
                    .sum()
            })
            .collect();
        verify_certificate(std, &z, &duals)?;
        Ok((LpStatus::Optimal, z, tab.pivots))
    }

    /// Reduced costs for `cost` under the current basis.
    fn price(&mut self, cost: &[Rational]) {
        let mut d: Vec<Rational> = cost.to_vec();
        d.push(Rational::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (k, v) in self.t[i].iter().enumerate() {
                if !v.is_zero() {
                    d[k] -= cb * v;
                }
            }
        }
        self.d = d;
    }

    fn optimize(&mut self, phase_one: bool) -> LpStatus {
        let limit = if phase_one {
            self.ncols
        } else {
            self.first_artificial
        };
        let mut bland = false;
        let mut degenerate = 0u32;
        loop {
            let entering = if bland {
                (0..limit).find(|&j| self.d[j].is_negative())
            } else {
                (0..limit)
                    .filter(|&j| self.d[j].is_negative())
                    .min_by(|&a, &b| self.d[a].cmp(&self.d[b]).then(a.cmp(&b)))
            };
            let Some(c) = entering else {
                return LpStatus::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.t[i][self.ncols] / a;
                let better = match &leave {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, ratio)) = leave else {
                return LpStatus::Unbounded;
            };
            if ratio.is_zero() {
                degenerate += 1;
                if degenerate > DEGENERATE_RUN {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }
            self.pivot(r, c);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let inv = self.t[r][c].recip();
        let nz: Vec<usize> = (0..=self.ncols)
            .filter(|&k| !self.t[r][k].is_zero())
            .collect();
        for &k in &nz {
            self.t[r][k] *= &inv;
        }
        let pivot_row = core::mem::take(&mut self.t[r]);
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &k in &nz {
                row[k] -= &f * &pivot_row[k];
            }
        }
        if !self.d[c].is_zero() {
            let f = self.d[c].clone();
            for &k in &nz {
                self.d[k] -= &f * &pivot_row[k];
            }
        }
        self.t[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Replaces zero-valued basic artificials by real columns where the row
    /// allows it; rows with none are redundant and keep their artificial.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.t.len() {
            if self.basis[r] < self.first_artificial {
                continue;
            }
            if let Some(c) = (0..self.first_artificial).find(|&j| !self.t[r][j].is_zero()) {
                self.pivot(r, c);
            }
        }
    }
}

/// Checks dual sign conditions, dual feasibility and strong duality against
/// the standard-form data.
fn verify_certificate(std: &Standard, z: &[Rational], y: &[Rational]) -> Result<(), OptimizerError> {
    for (i, rel) in std.relations.iter().enumerate() {
        let ok = match rel {
            Relation::Le => !y[i].is_positive(),
            Relation::Ge => !y[i].is_negative(),
            Relation::Eq => true,
        };
        if !ok {
            return Err(OptimizerError::CertificateFailed("dual sign"));
        }
    }
    let mut reduced = std.cost.clone();
    for (i, row) in std.rows.iter().enumerate() {
        if y[i].is_zero() {
            continue;
        }
        for (c, a) in row {
            reduced[*c] -= &y[i] * a;
        }
    }
    if reduced.iter().any(|r| r.is_negative()) {
        return Err(OptimizerError::CertificateFailed("dual feasibility"));
    }
    for (i, row) in std.rows.iter().enumerate() {
        let lhs: Rational = row.iter().map(|(c, a)| a * &z[*c]).sum();
        if !std.relations[i].holds(&lhs, &std.rhs[i]) || z.iter().any(|v| v.is_negative()) {
            return Err(OptimizerError::CertificateFailed("primal feasibility"));
        }
    }
    let primal: Rational = std.cost.iter().zip(z).map(|(c, v)| c * v).sum();
    let dual: Rational = y.iter().zip(&std.rhs).map(|(a, b)| a * b).sum();
    if primal != dual {
        return Err(OptimizerError::CertificateFailed("duality gap"));
    }
    Ok(())
}
