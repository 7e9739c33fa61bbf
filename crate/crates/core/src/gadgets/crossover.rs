//! The crossover gadget as a clause table, and its translation into a graph
//! plus face equations, one replacement rule per clause shape.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::polytope::{Equation, FaceQuery, FaceSystem};

/// The nine round variables of the gadget.
pub const ROLES: [&str; 9] = [
    "b", "t", "l", "r", "alpha", "beta", "gamma", "delta", "center",
];

/// Face vertices per boundary pattern of the replaced gadget, as measured by
/// exhaustive enumeration. Kept as a regression constant.
pub const COMPLETIONS_PER_PATTERN: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Literal {
    pub var: String,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: &str) -> Self {
        Literal {
            var: var.to_string(),
            positive: true,
        }
    }

    pub fn neg(var: &str) -> Self {
        Literal {
            var: var.to_string(),
            positive: false,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.var)
        } else {
            write!(f, "¬{}", self.var)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause(pub Vec<Literal>);

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(" ∨ "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossoverGadget {
    pub variables: Vec<String>,
    pub clauses: Vec<Clause>,
    pub note: &'static str,
}

/// The fixed clause table of the crossover gadget. Dashed (blue) edges of the
/// drawing are positive literals, dotted (red) ones negated.
pub fn crossover_clause_table() -> CrossoverGadget {
    use Literal as L;
    let c = |lits: &[Literal]| Clause(lits.to_vec());
    let clauses = vec![
        // periphery, three literals
        c(&[L::pos("t"), L::pos("l"), L::pos("gamma")]),
        c(&[L::neg("b"), L::pos("l"), L::pos("delta")]),
        c(&[L::pos("t"), L::neg("r"), L::pos("beta")]),
        c(&[L::neg("b"), L::neg("r"), L::pos("alpha")]),
        // periphery, two literals
        c(&[L::neg("l"), L::neg("gamma")]),
        c(&[L::neg("l"), L::neg("delta")]),
        c(&[L::pos("r"), L::neg("beta")]),
        c(&[L::pos("r"), L::neg("alpha")]),
        c(&[L::pos("b"), L::neg("alpha")]),
        c(&[L::pos("b"), L::neg("delta")]),
        c(&[L::neg("t"), L::neg("beta")]),
        c(&[L::neg("t"), L::neg("gamma")]),
        // interior
        c(&[L::pos("beta"), L::pos("gamma"), L::neg("center")]),
        c(&[L::pos("alpha"), L::pos("delta"), L::pos("center")]),
        c(&[L::neg("alpha"), L::neg("delta")]),
        c(&[L::neg("beta"), L::neg("gamma")]),
        c(&[L::neg("delta"), L::neg("gamma")]),
        c(&[L::neg("alpha"), L::neg("beta")]),
    ];
    CrossoverGadget {
        variables: ROLES.iter().map(|s| s.to_string()).collect(),
        clauses,
        note: "transcribed by hand from the published crossover drawing; \
               checked by verify_crossover",
    }
}

impl CrossoverGadget {
    /// Evaluates every clause under `truth` (indexed like `variables`).
    pub fn satisfied_by(&self, truth: &BTreeMap<&str, bool>) -> bool {
        self.clauses
            .iter()
            .all(|c| c.0.iter().any(|l| truth[l.var.as_str()] == l.positive))
    }
}

/// A clause system turned into a graph and face equations.
#[derive(Clone, Debug)]
pub struct ReplacedGadget {
    pub graph: Graph,
    pub faces: FaceSystem,
    /// Original variable name → vertex label (identity for the variables).
    pub boundary: BTreeMap<String, String>,
}

struct Builder {
    vertices: Vec<String>,
    edges: BTreeSet<(String, String)>,
    faces: FaceSystem,
}

impl Builder {
    fn vertex(&mut self, l: String) -> String {
        self.vertices.push(l.clone());
        l
    }

    fn edge(&mut self, u: &str, v: &str) {
        let e = if u < v {
            (u.to_string(), v.to_string())
        } else {
            (v.to_string(), u.to_string())
        };
        self.edges.insert(e);
    }
}

/// Applies one replacement rule per clause. Auxiliary vertices are fresh per
/// clause: `cl{k}/{v}'` (primed) and `cl{k}/{v}~` (barred), prefixed by
/// `prefix`. Variables keep their names, also prefixed.
pub fn replace_clauses(g: &CrossoverGadget) -> Result<ReplacedGadget> {
    replace_clauses_prefixed(g, "")
}

pub fn replace_clauses_prefixed(g: &CrossoverGadget, prefix: &str) -> Result<ReplacedGadget> {
    let mut b = Builder {
        vertices: Vec::new(),
        edges: BTreeSet::new(),
        faces: FaceSystem::default(),
    };
    let mut boundary = BTreeMap::new();
    for v in &g.variables {
        let l = b.vertex(format!("{prefix}{v}"));
        boundary.insert(v.clone(), l);
    }
    for (k, clause) in g.clauses.iter().enumerate() {
        let unsupported = |reason: &str| Error::UnsupportedClause {
            clause: clause.to_string(),
            reason: reason.into(),
        };
        let vars: BTreeSet<&str> = clause.0.iter().map(|l| l.var.as_str()).collect();
        if vars.len() != clause.0.len() {
            return Err(unsupported("repeated variable"));
        }
        if let Some(l) = clause.0.iter().find(|l| !boundary.contains_key(&l.var)) {
            return Err(unsupported(&format!("unknown variable `{}`", l.var)));
        }
        let name = |l: &Literal| boundary[&l.var].clone();
        let aux = |v: &str, mark: char| format!("{prefix}cl{k}/{v}{mark}");
        match clause.0.as_slice() {
            [x, y] => match (x.positive, y.positive) {
                (false, false) => {
                    let (i, j) = (name(x), name(y));
                    b.edge(&i, &j);
                    b.faces.push(Equation::nonneg_edge(&i, &j));
                }
                (false, true) | (true, false) => {
                    let (ni, pj) = if x.positive { (y, x) } else { (x, y) };
                    let (i, j) = (name(ni), name(pj));
                    let jbar = b.vertex(aux(&pj.var, '~'));
                    b.edge(&i, &jbar);
                    b.edge(&jbar, &j);
                    b.faces.push(Equation::nonneg_edge(&i, &jbar));
                    b.faces.push(Equation::xor(&j, &jbar));
                }
                (true, true) => {
                    return Err(unsupported("no replacement rule for two positive literals"))
                }
            },
            [_, _, _] => {
                let mut primes = Vec::new();
                for l in &clause.0 {
                    let v = name(l);
                    let p = b.vertex(aux(&l.var, '\''));
                    if l.positive {
                        let bar = b.vertex(aux(&l.var, '~'));
                        b.edge(&v, &bar);
                        b.edge(&bar, &p);
                        b.faces.push(Equation::xor(&v, &bar));
                        b.faces.push(Equation::nonneg_edge(&bar, &p));
                    } else {
                        b.edge(&v, &p);
                        b.faces.push(Equation::nonneg_edge(&v, &p));
                    }
                    primes.push(p);
                }
                b.edge(&primes[0], &primes[1]);
                b.edge(&primes[0], &primes[2]);
                b.edge(&primes[1], &primes[2]);
                b.faces
                    .push(Equation::one_of_three(&primes[0], &primes[1], &primes[2]));
            }
            _ => return Err(unsupported("clauses must have two or three literals")),
        }
    }
    let graph = Graph::new(b.vertices, b.edges)?;
    Ok(ReplacedGadget {
        graph,
        faces: b.faces,
        boundary,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternCount {
    /// Values of `b`, `t`, `l`, `r`.
    pub b: bool,
    pub t: bool,
    pub l: bool,
    pub r: bool,
    pub count: usize,
    /// Counting stopped at the cap.
    pub saturated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossoverReport {
    pub vertices: usize,
    pub edges: usize,
    pub equations: usize,
    /// Every face vertex has `x_b = x_t` and `x_l = x_r`.
    pub boundary_forced: bool,
    /// All four `(x_b, x_l)` patterns occur.
    pub all_patterns: bool,
    /// Feasible counts for each of the 16 `(b, t, l, r)` patterns.
    pub patterns: Vec<PatternCount>,
    /// Counts for the four consistent patterns, in `(b, l)` order 00, 01, 10, 11.
    pub completions: Vec<usize>,
    pub expected_completions: usize,
    pub passed: bool,
}

/// Per-pattern counting stops here.
pub const PATTERN_COUNT_CAP: usize = 4096;

/// Enumerates the face of a replaced gadget pattern by pattern.
pub fn verify_gadget(rg: &ReplacedGadget) -> Result<CrossoverReport> {
    let roles = ["b", "t", "l", "r"].map(|r| rg.boundary.get(r).map(String::as_str));
    let [Some(b), Some(t), Some(l), Some(r)] = roles else {
        return Err(Error::InvalidParameter(
            "gadget lacks one of b, t, l, r".into(),
        ));
    };
    let mut patterns = Vec::new();
    for bits in 0u8..16 {
        let v = |k: u8| bits >> k & 1 == 1;
        let res = FaceQuery::default()
            .fix(b, v(0))
            .fix(t, v(1))
            .fix(l, v(2))
            .fix(r, v(3))
            .limit(PATTERN_COUNT_CAP)
            .run(&rg.graph, &rg.faces)?;
        patterns.push(PatternCount {
            b: v(0),
            t: v(1),
            l: v(2),
            r: v(3),
            count: res.vertices.len(),
            saturated: res.truncated,
        });
    }
    let boundary_forced = patterns
        .iter()
        .all(|p| p.count == 0 || (p.b == p.t && p.l == p.r));
    let completions: Vec<usize> = [(false, false), (false, true), (true, false), (true, true)]
        .iter()
        .map(|&(bv, lv)| {
            patterns
                .iter()
                .find(|p| p.b == bv && p.t == bv && p.l == lv && p.r == lv)
                .unwrap()
                .count
        })
        .collect();
    let all_patterns = completions.iter().all(|&c| c > 0);
    Ok(CrossoverReport {
        vertices: rg.graph.n(),
        edges: rg.graph.m(),
        equations: rg.faces.len(),
        boundary_forced,
        all_patterns,
        passed: boundary_forced && all_patterns,
        patterns,
        completions,
        expected_completions: COMPLETIONS_PER_PATTERN,
    })
}

/// Builds the replaced crossover gadget and checks it.
pub fn verify_crossover() -> Result<CrossoverReport> {
    verify_gadget(&replace_clauses(&crossover_clause_table())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VariableId;
    use crate::polytope::{equation_is_locally_valid, FaceTag};

    fn all_truths(vars: &[String]) -> impl Iterator<Item = BTreeMap<&str, bool>> + '_ {
        (0u32..1 << vars.len()).map(move |m| {
            vars.iter()
                .enumerate()
                .map(|(i, v)| (v.as_str(), m >> i & 1 == 1))
                .collect()
        })
    }

    #[test]
    fn table_shape() {
        let g = crossover_clause_table();
        assert_eq!(g.variables.len(), 9);
        assert_eq!(g.clauses.len(), 18);
        assert!(g.clauses.iter().all(|c| (2..=3).contains(&c.0.len())));
    }

    /// Direct SAT check of the table, independent of the graph encoding.
    #[test]
    fn table_forces_crossing() {
        let g = crossover_clause_table();
        let mut per = BTreeMap::new();
        for truth in all_truths(&g.variables) {
            if g.satisfied_by(&truth) {
                assert_eq!(truth["b"], truth["t"]);
                assert_eq!(truth["l"], truth["r"]);
                *per.entry((truth["b"], truth["l"])).or_insert(0) += 1;
            }
        }
        assert_eq!(per.len(), 4);
        assert!(per.values().all(|&c| c == 1));
    }

    #[test]
    fn replaced_gadget_counts() {
        let rg = replace_clauses(&crossover_clause_table()).unwrap();
        assert_eq!((rg.graph.n(), rg.graph.m(), rg.faces.len()), (44, 65, 53));
        for eq in &rg.faces.equations {
            assert!(equation_is_locally_valid(&rg.graph, eq).unwrap());
        }
    }

    #[test]
    fn crossover_verifies() {
        let r = verify_crossover().unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.completions, vec![COMPLETIONS_PER_PATTERN; 4]);
        assert!(r.patterns.iter().all(|p| !p.saturated));
    }

    #[test]
    fn emptied_faces_break_the_crossing() {
        let mut rg = replace_clauses(&crossover_clause_table()).unwrap();
        rg.faces = FaceSystem::default();
        let r = verify_gadget(&rg).unwrap();
        assert!(!r.boundary_forced);
        let p = r.patterns.iter().find(|p| p.b && !p.t).unwrap();
        assert!(p.count > 0);
    }

    #[test]
    fn single_clause_rules() {
        let gadget = |clause: Clause| CrossoverGadget {
            variables: vec!["i".into(), "j".into(), "k".into()],
            clauses: vec![clause],
            note: "",
        };
        let rg =
            replace_clauses(&gadget(Clause(vec![Literal::neg("i"), Literal::neg("j")]))).unwrap();
        assert!(rg.graph.has_edge("i", "j"));
        assert_eq!(rg.faces.equations, vec![Equation::nonneg_edge("i", "j")]);

        let rg =
            replace_clauses(&gadget(Clause(vec![Literal::neg("i"), Literal::pos("j")]))).unwrap();
        assert!(rg.graph.has_edge("i", "cl0/j~") && rg.graph.has_edge("cl0/j~", "j"));
        assert_eq!(
            rg.faces.equations,
            vec![
                Equation::nonneg_edge("i", "cl0/j~"),
                Equation::xor("j", "cl0/j~")
            ]
        );

        let rg = replace_clauses(&gadget(Clause(vec![
            Literal::neg("i"),
            Literal::neg("j"),
            Literal::pos("k"),
        ])))
        .unwrap();
        let tags: Vec<FaceTag> = rg.faces.equations.iter().map(|e| e.tag).collect();
        assert_eq!(
            tags.iter().filter(|t| **t == FaceTag::NonnegEdge).count(),
            3
        );
        assert_eq!(tags.iter().filter(|t| **t == FaceTag::Xor).count(), 1);
        let one = rg
            .faces
            .equations
            .iter()
            .find(|e| e.tag == FaceTag::OneOfThree)
            .unwrap();
        assert!(one.vars.contains(&VariableId::edge("cl0/i'", "cl0/k'")));
        assert_eq!((rg.graph.n(), rg.graph.m()), (7, 7));
    }

    /// Each replaced clause admits exactly the satisfying assignments of its
    /// variables.
    #[test]
    fn rules_simulate_clauses() {
        use crate::polytope::restrict_to_face;
        let lits = |mask: u8, n: usize| -> Clause {
            Clause(
                (0..n)
                    .map(|k| Literal {
                        var: ["i", "j", "k"][k].into(),
                        positive: mask >> k & 1 == 1,
                    })
                    .collect(),
            )
        };
        for (n, masks) in [(2usize, 0u8..3), (3, 0..8)] {
            for mask in masks {
                let g = CrossoverGadget {
                    variables: vec!["i".into(), "j".into(), "k".into()],
                    clauses: vec![lits(mask, n)],
                    note: "",
                };
                let rg = replace_clauses(&g).unwrap();
                let face = restrict_to_face(&rg.graph, &rg.faces).unwrap();
                let seen: BTreeSet<Vec<bool>> = face
                    .iter()
                    .map(|v| {
                        ["i", "j", "k"]
                            .iter()
                            .map(|x| v.members()[rg.graph.index_of(x).unwrap()])
                            .collect()
                    })
                    .collect();
                let want: BTreeSet<Vec<bool>> = all_truths(&g.variables)
                    .filter(|t| g.satisfied_by(t))
                    .map(|t| vec![t["i"], t["j"], t["k"]])
                    .collect();
                assert_eq!(seen, want, "{}", g.clauses[0]);
            }
        }
    }

    #[test]
    fn unsupported_shapes() {
        let g = CrossoverGadget {
            variables: vec!["i".into(), "j".into()],
            clauses: vec![Clause(vec![Literal::pos("i"), Literal::pos("j")])],
            note: "",
        };
        match replace_clauses(&g) {
            Err(Error::UnsupportedClause { clause, .. }) => assert_eq!(clause, "(i ∨ j)"),
            other => panic!("{other:?}"),
        }
        let mut g2 = g.clone();
        g2.clauses = vec![Clause(vec![Literal::neg("i")])];
        assert!(replace_clauses(&g2).is_err());
        g2.clauses = vec![Clause(vec![Literal::neg("i"), Literal::neg("i")])];
        assert!(replace_clauses(&g2).is_err());
        g2.clauses = vec![Clause(vec![Literal::neg("i"), Literal::neg("z")])];
        assert!(replace_clauses(&g2).is_err());
    }
}
