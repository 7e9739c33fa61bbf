//! Extended formulation of `COR(G)` over a tree decomposition of the
//! constraint graph `G'`, exact MAP by max-sum over the same tree, and the
//! loop checking both against brute force.
//!
//! One variable `λ_{t,φ}` per node `t` and locally consistent 0/1 assignment
//! `φ` of its bag. Constraints: `Σ_φ λ_{t,φ} = 1` per node, equal marginals
//! on `B_s ∩ B_t` per tree edge, `λ >= 0`. The coordinate `x_z` reads the
//! marginal of `z` at the lexicographically least node whose bag holds `z`.

mod dp;
mod verify;

pub use dp::map_dp;
pub use verify::{random_objective, verify_ef, EfMismatch, EfVerifyReport, LiftCheck};

use std::collections::BTreeMap;

use num::{BigInt, One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VariableId};
use crate::lp::{is_valid_name, FeasibleBasis, LinearProgram, LpOutcome};
use crate::polytope::{AffineForm, AffineMap, CorVertex, Weights};
use crate::rational::{int, Rational};
use crate::treewidth::{validate_decomposition, TreeDecomposition};

/// Bags with more free (undetermined) positions than this are refused.
pub const MAX_FREE_BAG_POSITIONS: usize = 22;

/// One tree node with its bag resolved to `R^{V ∪ E}` coordinates.
#[derive(Clone, Debug)]
pub(crate) struct BagNode {
    pub name: String,
    pub vars: Vec<VariableId>,
    /// Consistent assignments as bitmasks over bag positions, ascending.
    pub assignments: Vec<u64>,
    /// `(bag position, vertex index in G)` for the vertex members.
    pub vertex_positions: Vec<(usize, usize)>,
}

/// Validated decomposition of `G'` with per-node consistent assignments.
#[derive(Clone, Debug)]
pub(crate) struct Prepared {
    pub nodes: Vec<BagNode>,
    /// Tree edges as node indices `(s, t)` with `s < t`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// For each variable of `G` (in `Graph::variables` order): canonical node
    /// and position of the variable in its bag.
    pub canonical: Vec<(usize, usize)>,
    pub width: usize,
}

impl Prepared {
    pub fn new(g: &Graph, td: &TreeDecomposition) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::InvalidParameter("graph has no vertices".into()));
        }
        let cg = g.constraint_graph();
        validate_decomposition(&cg.graph, td).into_result()?;
        let td = td.clone().normalized();
        let index: BTreeMap<&str, usize> = td
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut nodes = Vec::with_capacity(td.nodes.len());
        for name in &td.nodes {
            let vars: Vec<VariableId> = td
                .bag(name)
                .iter()
                .map(|l| cg.variable_of(l).cloned().expect("validated bag label"))
                .collect();
            let pos = |v: &VariableId| vars.iter().position(|x| x == v);
            let mut tied = Vec::new();
            let mut free = Vec::new();
            let mut vertex_positions = Vec::new();
            for (p, var) in vars.iter().enumerate() {
                match var {
                    VariableId::Vertex(l) => {
                        free.push(p);
                        vertex_positions.push((p, g.index_of(l).unwrap()));
                    }
                    VariableId::Edge(u, v) => {
                        match (
                            pos(&VariableId::vertex(u.as_str())),
                            pos(&VariableId::vertex(v.as_str())),
                        ) {
                            (Some(a), Some(b)) => tied.push((p, a, b)),
                            _ => free.push(p),
                        }
                    }
                }
            }
            if free.len() > MAX_FREE_BAG_POSITIONS {
                return Err(Error::TooLarge {
                    what: "bag",
                    size: free.len(),
                    limit: MAX_FREE_BAG_POSITIONS,
                });
            }
            let mut assignments: Vec<u64> = (0u64..1 << free.len())
                .map(|bits| {
                    let mut m = 0u64;
                    for (k, &p) in free.iter().enumerate() {
                        m |= (bits >> k & 1) << p;
                    }
                    for &(p, a, b) in &tied {
                        m |= (m >> a & m >> b & 1) << p;
                    }
                    m
                })
                .collect();
            assignments.sort_unstable();
            nodes.push(BagNode {
                name: name.clone(),
                vars,
                assignments,
                vertex_positions,
            });
        }
        let mut edges: Vec<(usize, usize)> = td
            .tree_edges
            .iter()
            .map(|(a, b)| {
                let (x, y) = (index[a.as_str()], index[b.as_str()]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        let canonical = g
            .variables()
            .iter()
            .map(|z| {
                nodes
                    .iter()
                    .enumerate()
                    .find_map(|(t, n)| n.vars.iter().position(|v| v == z).map(|p| (t, p)))
                    .expect("validated decomposition covers every node of G'")
            })
            .collect();
        Ok(Prepared {
            nodes,
            edges,
            canonical,
            width: td.width(),
        })
    }

    /// Pairs `(position in s, position in t)` of the shared bag members.
    pub fn intersection(&self, s: usize, t: usize) -> Vec<(usize, usize)> {
        let (bs, bt) = (&self.nodes[s].vars, &self.nodes[t].vars);
        bs.iter()
            .enumerate()
            .filter_map(|(i, v)| bt.iter().position(|w| w == v).map(|j| (i, j)))
            .collect()
    }
}

/// Gathers the bits at `positions` into a compact key.
pub(crate) fn restrict(mask: u64, positions: impl Iterator<Item = usize>) -> u64 {
    positions
        .enumerate()
        .fold(0, |acc, (k, p)| acc | (mask >> p & 1) << k)
}

fn bits_string(mask: u64, len: usize) -> String {
    (0..len)
        .map(|p| if mask >> p & 1 == 1 { '1' } else { '0' })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Accounting {
    pub lambda: usize,
    pub equalities: usize,
    /// One nonnegativity per λ; equalities are not counted.
    pub inequalities: usize,
    pub width: usize,
    pub nodes: usize,
    pub n: usize,
    pub m: usize,
    /// `(n + m) · 2^(width + 1)`, decimal.
    pub budget: String,
    pub within_budget: bool,
    pub convention: &'static str,
}

/// `λ_{t,φ}` as exported in the sidecar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaVar {
    pub name: String,
    pub node: String,
    /// `φ` as a 0/1 string over `bag` in order.
    pub assignment: String,
}

#[derive(Clone, Debug)]
pub struct ExtendedFormulation {
    pub graph: Graph,
    pub decomposition: TreeDecomposition,
    pub lp: LinearProgram,
    /// From λ names onto `Graph::variables` of `graph`.
    pub projection: AffineMap<String>,
    pub accounting: Accounting,
    pub lambdas: Vec<LambdaVar>,
    pub(crate) prepared: Prepared,
    /// λ indices read by each output coordinate.
    proj_support: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    variables: Vec<String>,
    bags: BTreeMap<&'a str, Vec<String>>,
    lambdas: &'a [LambdaVar],
    projection: Vec<SidecarRow>,
    accounting: &'a Accounting,
}

#[derive(Serialize)]
struct SidecarRow {
    output: String,
    sum_of: Vec<String>,
}

/// Builds the formulation for `g` from a decomposition of its constraint
/// graph. Fails with [`Error::InvalidDecomposition`] naming the violated
/// condition when `td` is not a decomposition of `G'`.
pub fn build_ef(g: &Graph, td: &TreeDecomposition) -> Result<ExtendedFormulation> {
    let prep = Prepared::new(g, td)?;
    let mut lp = LinearProgram::new();
    let mut lambdas = Vec::new();
    // first λ index of each node
    let mut offset = Vec::with_capacity(prep.nodes.len());
    for (k, node) in prep.nodes.iter().enumerate() {
        offset.push(lp.num_variables());
        let tag = if is_valid_name(&format!("lam_{}", node.name)) {
            node.name.clone()
        } else {
            format!("n{k}")
        };
        for &a in &node.assignments {
            let bits = bits_string(a, node.vars.len());
            let name = format!("lam_{tag}_{bits}");
            lp.add_variable(name.clone());
            lambdas.push(LambdaVar {
                name,
                node: node.name.clone(),
                assignment: bits,
            });
        }
    }
    let tag_of = |k: usize| {
        lambdas[offset[k]]
            .name
            .split('_')
            .nth(1)
            .unwrap()
            .to_string()
    };
    for (k, node) in prep.nodes.iter().enumerate() {
        let terms = (0..node.assignments.len())
            .map(|i| (offset[k] + i, int(1)))
            .collect();
        lp.add_equality(format!("norm_{}", tag_of(k)), terms, int(1));
    }
    for &(s, t) in &prep.edges {
        let inter = prep.intersection(s, t);
        let mut rows: BTreeMap<u64, Vec<(usize, Rational)>> = BTreeMap::new();
        for (i, &a) in prep.nodes[s].assignments.iter().enumerate() {
            let key = restrict(a, inter.iter().map(|p| p.0));
            rows.entry(key).or_default().push((offset[s] + i, int(1)));
        }
        for (i, &a) in prep.nodes[t].assignments.iter().enumerate() {
            let key = restrict(a, inter.iter().map(|p| p.1));
            rows.entry(key).or_default().push((offset[t] + i, int(-1)));
        }
        for (key, terms) in rows {
            let name = format!(
                "cons_{}_{}_{}",
                tag_of(s),
                tag_of(t),
                bits_string(key, inter.len())
            );
            lp.add_equality(name, terms, Rational::zero());
        }
    }
    let outputs = g.variables();
    let mut forms = Vec::with_capacity(outputs.len());
    let mut proj_support = Vec::with_capacity(outputs.len());
    for &(t, p) in &prep.canonical {
        let support: Vec<usize> = prep.nodes[t]
            .assignments
            .iter()
            .enumerate()
            .filter(|(_, a)| *a >> p & 1 == 1)
            .map(|(i, _)| offset[t] + i)
            .collect();
        forms.push(AffineForm {
            terms: support
                .iter()
                .map(|&j| (lp.variables[j].clone(), int(1)))
                .collect(),
            offset: Rational::zero(),
        });
        proj_support.push(support);
    }
    let projection = AffineMap::new(outputs, forms)?;
    let lambda = lp.num_variables();
    let budget = BigInt::from(g.n() + g.m()) << (prep.width + 1);
    let accounting = Accounting {
        lambda,
        equalities: lp.num_constraints(),
        inequalities: lambda,
        width: prep.width,
        nodes: prep.nodes.len(),
        n: g.n(),
        m: g.m(),
        within_budget: BigInt::from(lambda) <= budget,
        budget: budget.to_string(),
        convention: "inequalities = lambda nonnegativities; equalities not counted",
    };
    lp.validate()?;
    Ok(ExtendedFormulation {
        graph: g.clone(),
        decomposition: td.clone().normalized(),
        lp,
        projection,
        accounting,
        lambdas,
        prepared: prep,
        proj_support,
    })
}

/// Optimum of a weight vector over the formulation, with the projected point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpMap {
    pub value: Rational,
    pub lambda: Vec<Rational>,
    /// Projected coordinates in `Graph::variables` order.
    pub x: Vec<Rational>,
}

impl ExtendedFormulation {
    /// The objective `w ∘ π` over the λ variables.
    pub fn objective_for(&self, w: &Weights) -> Result<Vec<(usize, Rational)>> {
        let vars = self.graph.variables();
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (var, c) in w {
            let k = vars
                .iter()
                .position(|v| v == var)
                .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
            if c.is_zero() {
                continue;
            }
            for &j in &self.proj_support[k] {
                *acc.entry(j).or_insert_with(Rational::zero) += c;
            }
        }
        Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    /// `π(λ)` in `Graph::variables` order.
    pub fn project(&self, lambda: &[Rational]) -> Vec<Rational> {
        self.proj_support
            .iter()
            .map(|s| s.iter().map(|&j| lambda[j].clone()).sum())
            .collect()
    }

    /// Phase-1 basis of the formulation's constraints, reusable across
    /// objectives.
    pub fn feasible_basis(&self) -> Result<Option<FeasibleBasis>> {
        FeasibleBasis::find(&self.lp)
    }

    /// `None` when the formulation is infeasible or unbounded in `w`.
    pub fn maximize_with(&self, fb: &FeasibleBasis, w: &Weights) -> Result<Option<LpMap>> {
        let obj = self.objective_for(w)?;
        match fb.maximize(&self.lp, &obj)?.0 {
            LpOutcome::Optimal { value, point } => {
                let x = self.project(&point);
                Ok(Some(LpMap {
                    value,
                    lambda: point,
                    x,
                }))
            }
            _ => Ok(None),
        }
    }

    pub fn maximize(&self, w: &Weights) -> Result<Option<LpMap>> {
        match self.feasible_basis()? {
            Some(fb) => self.maximize_with(&fb, w),
            None => Ok(None),
        }
    }

    /// JSON description of the λ variables, the projection and accounting,
    /// meant to sit beside the LP file.
    pub fn sidecar_json(&self) -> String {
        let projection = self
            .projection
            .outputs
            .iter()
            .zip(&self.projection.forms)
            .map(|(o, f)| SidecarRow {
                output: o.to_string(),
                sum_of: f.terms.iter().map(|t| t.0.clone()).collect(),
            })
            .collect();
        let bags = self
            .prepared
            .nodes
            .iter()
            .map(|n| {
                (
                    n.name.as_str(),
                    n.vars.iter().map(ToString::to_string).collect(),
                )
            })
            .collect();
        let s = Sidecar {
            variables: self
                .graph
                .variables()
                .iter()
                .map(ToString::to_string)
                .collect(),
            bags,
            lambdas: &self.lambdas,
            projection,
            accounting: &self.accounting,
        };
        serde_json::to_string_pretty(&s).expect("sidecar json")
    }
}

/// The extension-space point of `X`: `λ_{t,φ} = 1` exactly when `φ` is the
/// restriction of `X`'s assignment (vertices by membership, edge nodes by
/// products) to `B_t`.
pub fn lift_vertex(ef: &ExtendedFormulation, x: &[&str]) -> Result<Vec<Rational>> {
    let v = CorVertex::from_labels(&ef.graph, x)?;
    let mut point = vec![Rational::zero(); ef.lp.num_variables()];
    let mut j = 0;
    for node in &ef.prepared.nodes {
        let mut want = 0u64;
        for (p, var) in node.vars.iter().enumerate() {
            if v.value(&ef.graph, var).expect("bag variable of G") {
                want |= 1 << p;
            }
        }
        let i = node
            .assignments
            .binary_search(&want)
            .expect("restriction of a global assignment is consistent");
        point[j + i] = Rational::one();
        j += node.assignments.len();
    }
    Ok(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_complete, make_path};
    use crate::polytope::cor_vertices;
    use crate::treewidth::{heuristic_decomposition, Heuristic};

    fn ef_for(g: &Graph) -> ExtendedFormulation {
        let td = heuristic_decomposition(&g.constraint_graph().graph, Heuristic::MinFill).unwrap();
        build_ef(g, &td).unwrap()
    }

    fn single_bag(g: &Graph) -> TreeDecomposition {
        let cg = g.constraint_graph();
        TreeDecomposition {
            nodes: vec!["t0".into()],
            tree_edges: vec![],
            bags: [("t0".to_string(), cg.graph.labels().to_vec())].into(),
        }
    }

    #[test]
    fn k2_single_bag() {
        let k2 = make_complete(2).unwrap();
        let ef = build_ef(&k2, &single_bag(&k2)).unwrap();
        assert_eq!(
            (
                ef.accounting.lambda,
                ef.accounting.equalities,
                ef.accounting.inequalities
            ),
            (4, 1, 4)
        );
        // bag order: e(v1|v2), v1, v2
        let phis: Vec<&str> = ef.lambdas.iter().map(|l| l.assignment.as_str()).collect();
        assert_eq!(phis, ["000", "010", "001", "111"]);
        let origin = lift_vertex(&ef, &[]).unwrap();
        assert_eq!(ef.project(&origin), vec![int(0); 3]);
        let both = lift_vertex(&ef, &["v1", "v2"]).unwrap();
        assert_eq!(both[3], int(1));
        assert_eq!(ef.project(&both), vec![int(1); 3]);
    }

    #[test]
    fn single_vertex() {
        let g = Graph::new(["a"], Vec::<(&str, &str)>::new()).unwrap();
        let ef = ef_for(&g);
        assert_eq!(ef.accounting.lambda, 2);
    }

    #[test]
    fn p3_counts_and_lift() {
        let p3 = make_path(3).unwrap();
        let ef = ef_for(&p3);
        let bound: usize = ef.prepared.nodes.iter().map(|n| 1 << n.vars.len()).sum();
        let consistent: usize = ef.prepared.nodes.iter().map(|n| n.assignments.len()).sum();
        assert_eq!(ef.accounting.lambda, consistent);
        assert!(consistent <= bound);
        assert!(ef.accounting.within_budget);
        let l = lift_vertex(&ef, &["v1", "v3"]).unwrap();
        assert!(ef.lp.is_feasible_point(&l));
        let x = ef.project(&l);
        let vars = p3.variables();
        for (var, val) in vars.iter().zip(&x) {
            if let VariableId::Edge(..) = var {
                assert_eq!(*val, int(0));
            }
        }
    }

    #[test]
    fn lifts_project_onto_cor() {
        let k3 = make_complete(3).unwrap();
        let ef = ef_for(&k3);
        for v in cor_vertices(&k3).unwrap() {
            let l = lift_vertex(&ef, &v.subset(&k3)).unwrap();
            assert!(ef.lp.is_feasible_point(&l));
            let want: Vec<Rational> = v
                .coordinates(&k3)
                .into_iter()
                .map(|b| int(b as i64))
                .collect();
            assert_eq!(ef.project(&l), want);
        }
    }

    #[test]
    fn invalid_decomposition_named() {
        let k3 = make_complete(3).unwrap();
        let td = heuristic_decomposition(&k3, Heuristic::MinFill).unwrap();
        match build_ef(&k3, &td) {
            Err(Error::InvalidDecomposition(msg)) => assert!(msg.contains("coverage"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sidecar_mentions_every_lambda() {
        let ef = ef_for(&make_path(3).unwrap());
        let v: serde_json::Value = serde_json::from_str(&ef.sidecar_json()).unwrap();
        assert_eq!(v["lambdas"].as_array().unwrap().len(), ef.accounting.lambda);
        assert_eq!(v["accounting"]["inequalities"], ef.accounting.lambda);
    }
}
