//! Linear models with exact rational data, and their LP-format text dump.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::rational::{Exact, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

/// What a model variable stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarRole {
    /// `x_i`, canonical hyperedge index.
    Overlay(usize),
    /// `y_j`, index into the candidate retrieval sets.
    Retrieval(usize),
    /// `β_i`, canonical hyperedge index.
    Block(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub lower: Rational,
    pub upper: Option<Rational>,
    pub integer: bool,
    pub role: VarRole,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn lhs(&self, values: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, a)| a * &values[*j]).sum()
    }
}

/// `minimize c·x` subject to rows and variable bounds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearModel {
    pub vars: Vec<Variable>,
    pub rows: Vec<Constraint>,
    pub objective: Vec<Rational>,
}

impl LinearModel {
    pub fn add_var(&mut self, var: Variable) -> usize {
        self.vars.push(var);
        self.objective.push(Rational::zero());
        self.vars.len() - 1
    }

    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        coeffs: Vec<(usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) -> usize {
        let coeffs = coeffs.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        self.rows.push(Constraint {
            name: name.into(),
            coeffs,
            relation,
            rhs,
        });
        self.rows.len() - 1
    }

    pub fn set_objective(&mut self, objective: Vec<Rational>) {
        assert_eq!(objective.len(), self.vars.len());
        self.objective = objective;
    }

    pub fn objective_value(&self, values: &[Rational]) -> Rational {
        self.objective
            .iter()
            .zip(values)
            .map(|(c, x)| c * x)
            .sum()
    }

    /// Exact feasibility check, integrality included.
    pub fn is_feasible(&self, values: &[Rational]) -> bool {
        values.len() == self.vars.len()
            && self.vars.iter().zip(values).all(|(v, x)| {
                *x >= v.lower
                    && v.upper.as_ref().is_none_or(|u| x <= u)
                    && (!v.integer || x.is_integer())
            })
            && self
                .rows
                .iter()
                .all(|r| r.relation.holds(&r.lhs(values), &r.rhs))
    }

    pub fn integer_count(&self) -> usize {
        self.vars.iter().filter(|v| v.integer).count()
    }

    /// Indices of variables with the given role kind.
    pub fn vars_where(&self, pred: impl Fn(VarRole) -> bool) -> Vec<usize> {
        (0..self.vars.len()).filter(|&j| pred(self.vars[j].role)).collect()
    }
}

fn write_terms(
    f: &mut fmt::Formatter<'_>,
    vars: &[Variable],
    terms: impl Iterator<Item = (usize, Rational)>,
) -> fmt::Result {
    let mut first = true;
    for (j, a) in terms {
        if a.is_zero() {
            continue;
        }
        let sign = if a.is_negative() { "-" } else { "+" };
        let mag = a.abs();
        if first {
            if a.is_negative() {
                write!(f, " -")?;
            }
        } else {
            write!(f, " {sign}")?;
        }
        first = false;
        write!(f, " {} {}", Exact(&mag), vars[j].name)?;
    }
    if first {
        write!(f, " 0")?;
    }
    Ok(())
}

/// LP-format-like text with exact `p/q` coefficients.
impl fmt::Display for LinearModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "minimize")?;
        write!(f, "  obj:")?;
        write_terms(f, &self.vars, self.objective.iter().cloned().enumerate())?;
        writeln!(f)?;
        writeln!(f, "subject to")?;
        for r in &self.rows {
            write!(f, "  {}:", r.name)?;
            write_terms(f, &self.vars, r.coeffs.iter().cloned())?;
            writeln!(f, " {} {}", r.relation.symbol(), Exact(&r.rhs))?;
        }
        writeln!(f, "bounds")?;
        for v in &self.vars {
            match &v.upper {
                Some(u) => writeln!(f, "  {} <= {} <= {}", Exact(&v.lower), v.name, Exact(u))?,
                None => writeln!(f, "  {} >= {}", v.name, Exact(&v.lower))?,
            }
        }
        let ints: Vec<&str> = self
            .vars
            .iter()
            .filter(|v| v.integer)
            .map(|v| v.name.as_str())
            .collect();
        if !ints.is_empty() {
            writeln!(f, "general")?;
            for chunk in ints.chunks(8) {
                write!(f, " ")?;
                for name in chunk {
                    write!(f, " {name}")?;
                }
                writeln!(f)?;
            }
        }
        writeln!(f, "end")
    }
}
