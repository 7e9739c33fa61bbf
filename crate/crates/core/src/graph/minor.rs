use std::collections::{BTreeMap, HashMap};

use super::{Graph, VariableId};
use crate::error::{Error, Result};

impl Graph {
    fn require_edge(&self, u: &str, v: &str) -> Result<(usize, usize)> {
        match (self.index_of(u), self.index_of(v)) {
            (Some(a), Some(b)) if self.has_edge_idx(a, b) => Ok((a, b)),
            _ => Err(Error::Precondition(format!("`{u}`-`{v}` is not an edge"))),
        }
    }

    pub fn delete_edge(&self, u: &str, v: &str) -> Result<Graph> {
        let (a, b) = self.require_edge(u, v)?;
        let key = (a.min(b), a.max(b));
        let edges = self
            .edges
            .iter()
            .filter(|&&e| e != key)
            .map(|&(x, y)| (self.labels[x].as_str(), self.labels[y].as_str()));
        Graph::new(self.labels.iter().cloned(), edges)
    }

    /// Contracts `uv`; the merged vertex is labelled `a+b` (endpoints in label
    /// order, primed if that label is taken).
    pub fn contract_edge(&self, u: &str, v: &str) -> Result<Graph> {
        self.contract_edge_named(u, v).map(|(g, _)| g)
    }

    /// [`Graph::contract_edge`] that also returns the merged vertex label.
    pub fn contract_edge_named(&self, u: &str, v: &str) -> Result<(Graph, String)> {
        let (a, b) = self.require_edge(u, v)?;
        let (a, b) = (a.min(b), a.max(b));
        let merged = self.fresh_label(format!("{}+{}", self.labels[a], self.labels[b]));
        let rename = |i: usize| -> String {
            if i == a || i == b {
                merged.clone()
            } else {
                self.labels[i].clone()
            }
        };
        let verts = self
            .labels
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != a && i != b)
            .map(|(_, l)| l.clone())
            .chain(std::iter::once(merged.clone()));
        let edges: Vec<(String, String)> = self
            .edges
            .iter()
            .filter(|&&e| e != (a, b))
            .map(|&(x, y)| (rename(x), rename(y)))
            .collect();
        Ok((Graph::new_dedup(verts, edges)?, merged))
    }

    pub fn remove_isolated(&self, v: &str) -> Result<Graph> {
        let i = self
            .index_of(v)
            .ok_or_else(|| Error::Precondition(format!("`{v}` is not a vertex")))?;
        if self.degree(i) != 0 {
            return Err(Error::Precondition(format!("`{v}` is not isolated")));
        }
        let verts = self.labels.iter().filter(|l| l.as_str() != v).cloned();
        Graph::new(verts, self.edges())
    }

    /// Replaces every edge `uv` by a path `u - s(u|v) - v`.
    pub fn subdivide_all(&self) -> Graph {
        let mut verts = self.labels.clone();
        let mut edges = Vec::with_capacity(2 * self.m());
        let mut taken: std::collections::HashSet<String> = verts.iter().cloned().collect();
        for (u, v) in self.edges() {
            let mut s = format!("s({u}|{v})");
            while taken.contains(&s) {
                s.push('\'');
            }
            taken.insert(s.clone());
            edges.push((u.to_string(), s.clone()));
            edges.push((s.clone(), v.to_string()));
            verts.push(s);
        }
        Graph::new(verts, edges).expect("subdivision of a simple graph is simple")
    }

    /// The constraint graph of the system `x_uv = x_u x_v`: one extra node per
    /// edge, adjacent to both endpoints.
    pub fn constraint_graph(&self) -> ConstraintGraph {
        let mut taken: std::collections::HashSet<String> = self.labels.iter().cloned().collect();
        let mut verts = self.labels.clone();
        let mut edges: Vec<(String, String)> = self
            .edges()
            .map(|(u, v)| (u.to_string(), v.to_string()))
            .collect();
        let mut var_of = HashMap::new();
        let mut node_of = BTreeMap::new();
        for l in &self.labels {
            var_of.insert(l.clone(), VariableId::vertex(l));
            node_of.insert(VariableId::vertex(l), l.clone());
        }
        for (u, v) in self.edges() {
            let mut e = format!("e({u}|{v})");
            while taken.contains(&e) {
                e.push('\'');
            }
            taken.insert(e.clone());
            edges.push((u.to_string(), e.clone()));
            edges.push((v.to_string(), e.clone()));
            verts.push(e.clone());
            var_of.insert(e.clone(), VariableId::edge(u, v));
            node_of.insert(VariableId::edge(u, v), e);
        }
        ConstraintGraph {
            graph: Graph::new(verts, edges).expect("constraint graph is simple"),
            var_of,
            node_of,
        }
    }
}

/// `G'`: the original graph plus an edge-node on a length-2 path per edge.
#[derive(Clone, Debug)]
pub struct ConstraintGraph {
    pub graph: Graph,
    var_of: HashMap<String, VariableId>,
    node_of: BTreeMap<VariableId, String>,
}

impl ConstraintGraph {
    /// The `R^{V ∪ E}` coordinate a node of `G'` stands for.
    pub fn variable_of(&self, node: &str) -> Option<&VariableId> {
        self.var_of.get(node)
    }

    pub fn node_of(&self, var: &VariableId) -> Option<&str> {
        self.node_of.get(var).map(String::as_str)
    }

    /// `(edge-node, u, v)` for every edge node.
    pub fn edge_nodes(&self) -> impl Iterator<Item = (&str, &str, &str)> + '_ {
        self.node_of.iter().filter_map(|(var, node)| match var {
            VariableId::Edge(u, v) => Some((node.as_str(), u.as_str(), v.as_str())),
            VariableId::Vertex(_) => None,
        })
    }
}
