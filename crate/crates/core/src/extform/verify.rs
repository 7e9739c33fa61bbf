use std::collections::BTreeMap;

use num::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::dp::map_dp_prepared;
use super::{lift_vertex, Accounting, ExtendedFormulation};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::polytope::{cor_vertices, map_brute_force, Weights};
use crate::rational::{int, to_pq, Rational};

/// Lift checks run over all subsets up to this many vertices.
pub const LIFT_CHECK_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EfMismatch {
    pub trial: usize,
    pub objective: BTreeMap<String, i64>,
    pub lp: Option<String>,
    pub dp: String,
    pub brute_force: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftCheck {
    pub subsets: usize,
    pub failures: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EfVerifyReport {
    pub trials: usize,
    pub seed: u64,
    pub matches: usize,
    pub mismatches: Vec<EfMismatch>,
    /// LP optima whose projection left `[0,1]` in some coordinate.
    pub outside_unit_box: usize,
    pub lift: Option<LiftCheck>,
    pub accounting: Accounting,
}

impl EfVerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
            && self.outside_unit_box == 0
            && self.lift.as_ref().is_none_or(|l| l.failures.is_empty())
    }
}

/// Integer weights in `[-10, 10]` for every variable, drawn in
/// `Graph::variables` order from the given ChaCha8 stream.
pub fn random_objective(g: &Graph, rng: &mut ChaCha8Rng) -> Weights {
    g.variables()
        .into_iter()
        .map(|v| (v, int(rng.gen_range(-10..=10))))
        .collect()
}

/// Compares the LP optimum over `ef`, the DP optimum and brute force on
/// `trials` seeded objectives; also checks every lift when `n` is small.
pub fn verify_ef(
    g: &Graph,
    ef: &ExtendedFormulation,
    trials: usize,
    seed: u64,
) -> Result<EfVerifyReport> {
    if g.labels() != ef.graph.labels() || g.edge_indices() != ef.graph.edge_indices() {
        return Err(Error::MismatchedIndex(
            "formulation was built for a different graph".into(),
        ));
    }
    let fb = ef.feasible_basis()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    let mut outside_unit_box = 0;
    for trial in 0..trials {
        let w = random_objective(g, &mut rng);
        let bf = map_brute_force(g, &w)?;
        let dp = map_dp_prepared(g, &ef.prepared, &w)?;
        let lp = match &fb {
            Some(fb) => ef.maximize_with(fb, &w)?,
            None => None,
        };
        if let Some(sol) = &lp {
            if sol
                .x
                .iter()
                .any(|c| c.is_negative() || *c > Rational::one())
            {
                outside_unit_box += 1;
            }
        }
        let lp_value = lp.map(|s| s.value);
        if lp_value.as_ref() != Some(&bf.value) || dp.value != bf.value {
            mismatches.push(EfMismatch {
                trial,
                objective: w
                    .iter()
                    .map(|(k, v)| (k.to_string(), v.to_integer().try_into().unwrap()))
                    .collect(),
                lp: lp_value.as_ref().map(to_pq),
                dp: to_pq(&dp.value),
                brute_force: to_pq(&bf.value),
            });
        }
    }
    let lift = (g.n() <= LIFT_CHECK_LIMIT).then(|| -> Result<LiftCheck> {
        let mut failures = Vec::new();
        let vs = cor_vertices(g)?;
        for v in &vs {
            let x = v.subset(g);
            let l = lift_vertex(ef, &x)?;
            let want: Vec<Rational> = v
                .coordinates(g)
                .into_iter()
                .map(|b| int(b as i64))
                .collect();
            if !ef.lp.is_feasible_point(&l) || ef.project(&l) != want {
                failures.push(x.into_iter().map(String::from).collect());
            }
        }
        Ok(LiftCheck {
            subsets: vs.len(),
            failures,
        })
    });
    Ok(EfVerifyReport {
        trials,
        seed,
        matches: trials - mismatches.len(),
        mismatches,
        outside_unit_box,
        lift: lift.transpose()?,
        accounting: ef.accounting.clone(),
    })
}
