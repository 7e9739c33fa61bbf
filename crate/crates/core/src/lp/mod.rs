//! Exact rational linear programming in standard form: maximize `c·x`
//! subject to `A x = b`, `x >= 0`.
//!
//! Dense tableau, two-phase simplex, Bland's rule. Fine up to a few thousand
//! columns; beyond that a revised method would be needed.

mod file;
mod simplex;

pub use file::{parse_lp_file, to_lp_file};
pub use simplex::{solve, FeasibleBasis, SolveStats};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    /// Sparse row over variable indices.
    #[serde(with = "rational::terms")]
    pub terms: Vec<(usize, Rational)>,
    #[serde(with = "rational")]
    pub rhs: Rational,
}

/// All variables are nonnegative and every constraint is an equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub variables: Vec<String>,
    pub constraints: Vec<Constraint>,
    #[serde(with = "rational::terms")]
    pub objective: Vec<(usize, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            LpOutcome::Optimal { .. } => "optimal",
            LpOutcome::Infeasible => "infeasible",
            LpOutcome::Unbounded => "unbounded",
        }
    }
}

/// Identifier rules of the LP text format: no whitespace, no leading digit
/// or period, restricted punctuation.
pub fn is_valid_name(name: &str) -> bool {
    const PUNCT: &str = "!\"#$%&()/,.;?@_`'{}|~";
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    let ok = |c: char| c.is_ascii_alphanumeric() || PUNCT.contains(c);
    name.len() <= 255 && ok(first) && !first.is_ascii_digit() && first != '.' && chars.all(ok)
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(&mut self, name: impl Into<String>) -> usize {
        self.variables.push(name.into());
        self.variables.len() - 1
    }

    pub fn add_equality(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(usize, Rational)>,
        rhs: Rational,
    ) {
        self.constraints.push(Constraint {
            name: name.into(),
            terms,
            rhs,
        });
    }

    pub fn set_objective(&mut self, terms: Vec<(usize, Rational)>) {
        self.objective = terms;
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashMap::new();
        for (i, v) in self.variables.iter().enumerate() {
            if !is_valid_name(v) {
                return Err(Error::MalformedLp(format!("bad variable name `{v}`")));
            }
            if seen.insert(v.as_str(), i).is_some() {
                return Err(Error::MalformedLp(format!("variable `{v}` declared twice")));
            }
        }
        let check_row = |what: &str, terms: &[(usize, Rational)]| -> Result<()> {
            let mut used = vec![false; self.variables.len()];
            for &(j, _) in terms {
                if j >= used.len() {
                    return Err(Error::MalformedLp(format!(
                        "{what}: variable index {j} out of range"
                    )));
                }
                if std::mem::replace(&mut used[j], true) {
                    return Err(Error::MalformedLp(format!(
                        "{what}: `{}` appears twice",
                        self.variables[j]
                    )));
                }
            }
            Ok(())
        };
        check_row("objective", &self.objective)?;
        let mut names = HashMap::new();
        for c in &self.constraints {
            if !is_valid_name(&c.name) {
                return Err(Error::MalformedLp(format!(
                    "bad constraint name `{}`",
                    c.name
                )));
            }
            if names.insert(c.name.as_str(), ()).is_some() {
                return Err(Error::MalformedLp(format!(
                    "constraint `{}` declared twice",
                    c.name
                )));
            }
            check_row(&c.name, &c.terms)?;
        }
        Ok(())
    }

    /// Checks `A x = b`, `x >= 0` exactly.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        use num::{Signed, Zero};
        if x.len() != self.variables.len() || x.iter().any(Signed::is_negative) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let mut lhs = Rational::zero();
            for (j, a) in &c.terms {
                if !x[*j].is_zero() {
                    lhs += a * &x[*j];
                }
            }
            lhs == c.rhs
        })
    }

    pub fn objective_at(&self, x: &[Rational]) -> Rational {
        self.objective.iter().map(|(j, c)| c * &x[*j]).sum()
    }
}
