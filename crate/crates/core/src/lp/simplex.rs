use std::cmp::Ordering;

use num::{One, Signed, Zero};

use super::{LinearProgram, LpOutcome};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub phase1_pivots: usize,
    pub phase2_pivots: usize,
    /// Constraint rows found linearly dependent and dropped after phase 1.
    pub redundant_rows: usize,
}

#[derive(Clone, Debug)]
struct Tableau {
    /// Each row: coefficients over all columns, then the rhs.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs (for maximization) over all columns, then `-z`.
    obj: Vec<Rational>,
    /// Columns at or beyond this index may not enter.
    enter_limit: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Pivoted,
}

impl Tableau {
    fn width(&self) -> usize {
        self.obj.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        let pivot_row = &mut self.rows[r];
        let nz: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        if !inv.is_one() {
            for &j in &nz {
                pivot_row[j] *= &inv;
            }
        }
        let prow: Vec<(usize, Rational)> =
            nz.iter().map(|&j| (j, self.rows[r][j].clone())).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            if row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for (j, a) in &prow {
                row[*j] -= &f * a;
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }

    /// One iteration of Bland's rule.
    fn step(&mut self) -> Step {
        let Some(c) = (0..self.enter_limit).find(|&j| self.obj[j].is_positive()) else {
            return Step::Optimal;
        };
        let rhs = self.width();
        let mut best: Option<usize> = None;
        for i in 0..self.rows.len() {
            let a = &self.rows[i][c];
            if !a.is_positive() {
                continue;
            }
            best = Some(match best {
                None => i,
                Some(b) => {
                    // rhs_i / a_i vs rhs_b / a_b
                    let lhs = &self.rows[i][rhs] * &self.rows[b][c];
                    let rhs_ = &self.rows[b][rhs] * a;
                    match lhs.cmp(&rhs_) {
                        Ordering::Less => i,
                        Ordering::Equal if self.basis[i] < self.basis[b] => i,
                        _ => b,
                    }
                }
            });
        }
        match best {
            None => Step::Unbounded,
            Some(r) => {
                self.pivot(r, c);
                Step::Pivoted
            }
        }
    }

    fn run(&mut self, pivots: &mut usize) -> Step {
        loop {
            match self.step() {
                Step::Pivoted => *pivots += 1,
                done => return done,
            }
        }
    }
}

/// A basic feasible solution of an LP's constraint system, reusable across
/// objectives.
#[derive(Clone, Debug)]
pub struct FeasibleBasis {
    tableau: Tableau,
    n: usize,
    pub stats: SolveStats,
}

impl FeasibleBasis {
    /// Phase 1. `Ok(None)` when the constraints have no nonnegative solution.
    pub fn find(lp: &LinearProgram) -> Result<Option<Self>> {
        lp.validate()?;
        let n = lp.num_variables();
        let m = lp.num_constraints();
        let width = n + m;
        let mut rows = Vec::with_capacity(m);
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![Rational::zero(); width + 1];
            let flip = c.rhs.is_negative();
            for (j, a) in &c.terms {
                row[*j] = if flip { -a.clone() } else { a.clone() };
            }
            row[width] = if flip { -c.rhs.clone() } else { c.rhs.clone() };
            row[n + i] = Rational::one();
            rows.push(row);
        }
        // maximize -Σ artificials; reduced costs are the column sums, and the
        // last entry (-z) starts at Σ b
        let mut obj = vec![Rational::zero(); width + 1];
        for row in &rows {
            for j in (0..n).chain([width]) {
                if !row[j].is_zero() {
                    obj[j] += &row[j];
                }
            }
        }
        let mut t = Tableau {
            rows,
            basis: (n..n + m).collect(),
            obj,
            enter_limit: n,
        };
        let mut stats = SolveStats::default();
        t.enter_limit = width;
        if let Step::Unbounded = t.run(&mut stats.phase1_pivots) {
            return Err(Error::MalformedLp("phase 1 unbounded".into()));
        }
        // obj[width] holds -z; z = -Σ artificials must be zero exactly
        if !t.obj[width].is_zero() {
            return Ok(None);
        }
        // drive remaining artificials out of the basis, dropping dependent rows
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= n {
                match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => {
                        t.pivot(i, j);
                        stats.phase1_pivots += 1;
                    }
                    None => {
                        t.rows.swap_remove(i);
                        t.basis.swap_remove(i);
                        stats.redundant_rows += 1;
                        continue;
                    }
                }
            }
            i += 1;
        }
        for row in &mut t.rows {
            let rhs = row[width].clone();
            row.truncate(n);
            row.push(rhs);
        }
        t.obj = vec![Rational::zero(); n + 1];
        t.enter_limit = n;
        Ok(Some(FeasibleBasis {
            tableau: t,
            n,
            stats,
        }))
    }

    /// Phase 2 from this basis for an objective over the LP's variables.
    pub fn maximize(
        &self,
        lp: &LinearProgram,
        objective: &[(usize, Rational)],
    ) -> Result<(LpOutcome, SolveStats)> {
        let mut t = self.tableau.clone();
        let n = self.n;
        let mut cost = vec![Rational::zero(); n];
        for (j, c) in objective {
            if *j >= n {
                return Err(Error::MalformedLp(format!(
                    "objective index {j} out of range"
                )));
            }
            cost[*j] = c.clone();
        }
        // reduced costs: c_j - Σ_i c_{B_i} T_ij; last entry -z
        let mut obj: Vec<Rational> = cost.iter().cloned().chain([Rational::zero()]).collect();
        for (row, &b) in t.rows.iter().zip(&t.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    obj[j] -= cb * a;
                }
            }
        }
        t.obj = obj;
        let mut stats = self.stats;
        let outcome = match t.run(&mut stats.phase2_pivots) {
            Step::Unbounded => LpOutcome::Unbounded,
            _ => {
                let mut point = vec![Rational::zero(); n];
                for (row, &b) in t.rows.iter().zip(&t.basis) {
                    point[b] = row[n].clone();
                }
                let value: Rational = objective.iter().map(|(j, c)| c * &point[*j]).sum();
                if !lp.is_feasible_point(&point) || value != -t.obj[n].clone() {
                    return Err(Error::MalformedLp(
                        "returned point failed exact verification".into(),
                    ));
                }
                LpOutcome::Optimal { value, point }
            }
        };
        Ok((outcome, stats))
    }
}

/// Two-phase simplex with exact arithmetic. The optimal point is checked
/// against every constraint before it is returned.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    match FeasibleBasis::find(lp)? {
        None => Ok(LpOutcome::Infeasible),
        Some(fb) => Ok(fb.maximize(lp, &lp.objective)?.0),
    }
}
