//! Tree decompositions: heuristic construction, validation and exact
//! treewidth for small graphs.

mod exact;
mod heuristic;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use exact::{
    exact_treewidth, exact_treewidth_with, ExactOptions, ExactTreewidth, DEFAULT_EXACT_LIMIT,
};
pub use heuristic::{
    decomposition_from_order, elimination_order, heuristic_decomposition, Heuristic,
};

/// A tree of bags over a graph's vertex labels.
///
/// Serialized as `{"nodes": [...], "tree_edges": [[a, b], ...], "bags": {node: [labels]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub nodes: Vec<String>,
    pub tree_edges: Vec<(String, String)>,
    pub bags: BTreeMap<String, Vec<String>>,
}

impl TreeDecomposition {
    /// Sorts nodes and bag contents and orients tree edges, so that equal
    /// decompositions compare equal.
    pub fn normalized(mut self) -> Self {
        self.nodes.sort();
        self.nodes.dedup();
        for bag in self.bags.values_mut() {
            bag.sort();
            bag.dedup();
        }
        for e in &mut self.tree_edges {
            if e.0 > e.1 {
                std::mem::swap(&mut e.0, &mut e.1);
            }
        }
        self.tree_edges.sort();
        self
    }

    /// `max |bag| - 1`, saturating at zero.
    pub fn width(&self) -> usize {
        self.bags
            .values()
            .map(|b| b.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn bag(&self, node: &str) -> &[String] {
        self.bags.get(node).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Adjacency lists of the tree, keyed by node.
    pub fn tree_adjacency(&self) -> BTreeMap<&str, Vec<&str>> {
        let mut adj: BTreeMap<&str, Vec<&str>> = self
            .nodes
            .iter()
            .map(|n| (n.as_str(), Vec::new()))
            .collect();
        for (a, b) in &self.tree_edges {
            if let Some(l) = adj.get_mut(a.as_str()) {
                l.push(b.as_str());
            }
            if let Some(l) = adj.get_mut(b.as_str()) {
                l.push(a.as_str());
            }
        }
        for l in adj.values_mut() {
            l.sort();
        }
        adj
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("decomposition json")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str::<Self>(text)?.normalized())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// The tree edges do not form a tree on the node set.
    NotATree { reason: String },
    /// A bag mentions a label that is not a graph vertex.
    UnknownVertex { node: String, label: String },
    /// Vertex coverage: the vertex is in no bag.
    UncoveredVertex { vertex: String },
    /// Edge coverage: no bag holds both endpoints.
    UncoveredEdge { u: String, v: String },
    /// Connectivity: the nodes whose bags contain the vertex are not a subtree.
    DisconnectedSubtree { vertex: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotATree { reason } => write!(f, "tree structure: {reason}"),
            Violation::UnknownVertex { node, label } => {
                write!(f, "bag of `{node}` contains unknown vertex `{label}`")
            }
            Violation::UncoveredVertex { vertex } => {
                write!(f, "vertex coverage: `{vertex}` is in no bag")
            }
            Violation::UncoveredEdge { u, v } => {
                write!(f, "edge coverage: no bag contains both `{u}` and `{v}`")
            }
            Violation::DisconnectedSubtree { vertex } => {
                write!(
                    f,
                    "connectivity: bags containing `{vertex}` do not induce a subtree"
                )
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidDecomposition(v.to_string())),
        }
    }
}

fn components<'a>(
    nodes: &[&'a str],
    adj: &BTreeMap<&'a str, Vec<&'a str>>,
    keep: &BTreeSet<&'a str>,
) -> usize {
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    let mut count = 0;
    for &start in nodes {
        if !keep.contains(start) || seen.contains(start) {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if keep.contains(y) && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
    }
    count
}

/// Checks the tree structure and the three decomposition conditions
/// separately. Invalid input yields a report, never an error.
pub fn validate_decomposition(g: &Graph, td: &TreeDecomposition) -> ValidityReport {
    let mut violations = Vec::new();

    let node_set: BTreeSet<&str> = td.nodes.iter().map(String::as_str).collect();
    if node_set.len() != td.nodes.len() {
        violations.push(Violation::NotATree {
            reason: "duplicate node names".into(),
        });
    }
    if node_set.is_empty() {
        violations.push(Violation::NotATree {
            reason: "no nodes".into(),
        });
    }
    let mut edge_set = BTreeSet::new();
    for (a, b) in &td.tree_edges {
        if !node_set.contains(a.as_str()) || !node_set.contains(b.as_str()) {
            violations.push(Violation::NotATree {
                reason: format!("tree edge `{a}`-`{b}` references an unknown node"),
            });
        } else if a == b {
            violations.push(Violation::NotATree {
                reason: format!("self-loop at `{a}`"),
            });
        } else if !edge_set.insert((a.min(b), a.max(b))) {
            violations.push(Violation::NotATree {
                reason: format!("duplicate tree edge `{a}`-`{b}`"),
            });
        }
    }
    for n in td.bags.keys() {
        if !node_set.contains(n.as_str()) {
            violations.push(Violation::NotATree {
                reason: format!("bag for unknown node `{n}`"),
            });
        }
    }
    let nodes: Vec<&str> = node_set.iter().copied().collect();
    let adj = td.tree_adjacency();
    if !nodes.is_empty() && violations.is_empty() {
        let all: BTreeSet<&str> = node_set.clone();
        if components(&nodes, &adj, &all) != 1 {
            violations.push(Violation::NotATree {
                reason: "tree edges are not connected".into(),
            });
        } else if edge_set.len() + 1 != nodes.len() {
            violations.push(Violation::NotATree {
                reason: "tree edges contain a cycle".into(),
            });
        }
    }

    let mut holders: HashMap<&str, BTreeSet<&str>> = HashMap::new();
    for (node, bag) in &td.bags {
        for l in bag {
            if g.index_of(l).is_none() {
                violations.push(Violation::UnknownVertex {
                    node: node.clone(),
                    label: l.clone(),
                });
            }
            holders.entry(l.as_str()).or_default().insert(node.as_str());
        }
    }
    for l in g.labels() {
        if !holders.contains_key(l.as_str()) {
            violations.push(Violation::UncoveredVertex { vertex: l.clone() });
        }
    }
    for (u, v) in g.edges() {
        let covered = match (holders.get(u), holders.get(v)) {
            (Some(a), Some(b)) => a.intersection(b).next().is_some(),
            _ => false,
        };
        if !covered {
            violations.push(Violation::UncoveredEdge {
                u: u.into(),
                v: v.into(),
            });
        }
    }
    for l in g.labels() {
        if let Some(h) = holders.get(l.as_str()) {
            let h: BTreeSet<&str> = h.iter().copied().filter(|n| adj.contains_key(n)).collect();
            if !h.is_empty() && components(&nodes, &adj, &h) != 1 {
                violations.push(Violation::DisconnectedSubtree { vertex: l.clone() });
            }
        }
    }
    ValidityReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_complete, make_path};

    fn td(nodes: &[&str], edges: &[(&str, &str)], bags: &[(&str, &[&str])]) -> TreeDecomposition {
        TreeDecomposition {
            nodes: nodes.iter().map(|s| s.to_string()).collect(),
            tree_edges: edges
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            bags: bags
                .iter()
                .map(|(n, b)| (n.to_string(), b.iter().map(|s| s.to_string()).collect()))
                .collect(),
        }
    }

    #[test]
    fn k2_single_bag_ok() {
        let k2 = make_complete(2).unwrap();
        let d = td(&["t"], &[], &[("t", &["v1", "v2"])]);
        assert!(validate_decomposition(&k2, &d).is_ok());
        assert_eq!(d.width(), 1);
    }

    #[test]
    fn k2_split_bags_miss_edge() {
        let k2 = make_complete(2).unwrap();
        let d = td(
            &["a", "b"],
            &[("a", "b")],
            &[("a", &["v1"]), ("b", &["v2"])],
        );
        let r = validate_decomposition(&k2, &d);
        assert_eq!(
            r.violations,
            vec![Violation::UncoveredEdge {
                u: "v1".into(),
                v: "v2".into()
            }]
        );
        // without the tree edge the node set is not a tree either
        let d = td(&["a", "b"], &[], &[("a", &["v1"]), ("b", &["v2"])]);
        let r = validate_decomposition(&k2, &d);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotATree { .. })));
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::UncoveredEdge { .. })));
    }

    #[test]
    fn path_two_bags_ok() {
        let p3 = make_path(3).unwrap();
        let d = td(
            &["a", "b"],
            &[("a", "b")],
            &[("a", &["v1", "v2"]), ("b", &["v2", "v3"])],
        );
        assert!(validate_decomposition(&p3, &d).is_ok());
    }

    #[test]
    fn reports_each_condition() {
        let p3 = make_path(3).unwrap();
        // v2 in a and c but not in b: connectivity; v3 missing; v2-v3 uncovered.
        let d = td(
            &["a", "b", "c"],
            &[("a", "b"), ("b", "c")],
            &[("a", &["v1", "v2"]), ("b", &["v1"]), ("c", &["v2", "zz"])],
        );
        let r = validate_decomposition(&p3, &d);
        assert!(r.violations.contains(&Violation::UncoveredVertex {
            vertex: "v3".into()
        }));
        assert!(r.violations.contains(&Violation::UncoveredEdge {
            u: "v2".into(),
            v: "v3".into()
        }));
        assert!(r.violations.contains(&Violation::DisconnectedSubtree {
            vertex: "v2".into()
        }));
        assert!(r.violations.contains(&Violation::UnknownVertex {
            node: "c".into(),
            label: "zz".into()
        }));
        assert!(r.into_result().is_err());
    }

    #[test]
    fn cycle_in_tree_edges() {
        let k3 = make_complete(3).unwrap();
        let all: &[&str] = &["v1", "v2", "v3"];
        let d = td(
            &["a", "b", "c"],
            &[("a", "b"), ("b", "c"), ("c", "a")],
            &[("a", all), ("b", all), ("c", all)],
        );
        let r = validate_decomposition(&k3, &d);
        assert_eq!(r.violations.len(), 1);
        assert!(matches!(r.violations[0], Violation::NotATree { .. }));
    }

    #[test]
    fn json_form() {
        let d = td(
            &["b", "a"],
            &[("b", "a")],
            &[("a", &["v2", "v1"]), ("b", &["v2", "v3"])],
        );
        let back = TreeDecomposition::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d.normalized());
        let v: serde_json::Value = serde_json::from_str(&back.to_json()).unwrap();
        assert!(v["nodes"].is_array() && v["tree_edges"].is_array() && v["bags"].is_object());
    }
}
