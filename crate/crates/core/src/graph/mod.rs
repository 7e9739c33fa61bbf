//! Finite simple undirected graphs with string vertex labels.
//!
//! A [`Graph`] is immutable. Vertices are stored in lexicographic label
//! order, so vertex indices, subset bitmasks and every derived ordering are
//! reproducible across runs. Labels are non-empty, contain no whitespace and
//! never contain `--` (the separator used by [`VariableId`]'s text form).

mod families;
pub mod io;
mod minor;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use families::{
    make_complete, make_complete_bipartite, make_cycle, make_grid, make_path, petersen,
};
pub use minor::ConstraintGraph;

#[derive(Clone, Debug)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.edges == other.edges
    }
}

impl Eq for Graph {}

/// A coordinate of `R^{V ∪ E}`: either `x_v` or `x_{uv}`.
///
/// Edge ids always store the endpoints in label order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VariableId {
    Vertex(String),
    Edge(String, String),
}

impl VariableId {
    pub fn vertex(v: impl Into<String>) -> Self {
        VariableId::Vertex(v.into())
    }

    pub fn edge(u: impl Into<String>, v: impl Into<String>) -> Self {
        let (u, v) = (u.into(), v.into());
        if u <= v {
            VariableId::Edge(u, v)
        } else {
            VariableId::Edge(v, u)
        }
    }

    /// Vertex labels this variable touches.
    pub fn endpoints(&self) -> Vec<&str> {
        match self {
            VariableId::Vertex(v) => vec![v.as_str()],
            VariableId::Edge(u, v) => vec![u.as_str(), v.as_str()],
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.split_once("--") {
            Some((u, v)) if !u.is_empty() && !v.is_empty() && !v.contains("--") => {
                Ok(VariableId::edge(u, v))
            }
            Some(_) => Err(Error::UnknownVariable(s.to_string())),
            None if !s.is_empty() => Ok(VariableId::vertex(s)),
            None => Err(Error::UnknownVariable(s.to_string())),
        }
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VariableId::Vertex(v) => write!(f, "{v}"),
            VariableId::Edge(u, v) => write!(f, "{u}--{v}"),
        }
    }
}

impl Serialize for VariableId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for VariableId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        VariableId::parse(&s).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn check_label(label: &str) -> Result<()> {
    if label.is_empty() {
        return Err(Error::InvalidGraph("empty vertex label".into()));
    }
    if label.chars().any(char::is_whitespace) {
        return Err(Error::InvalidGraph(format!(
            "vertex label `{label}` contains whitespace"
        )));
    }
    if label.contains("--") {
        return Err(Error::InvalidGraph(format!(
            "vertex label `{label}` contains the reserved separator `--`"
        )));
    }
    Ok(())
}

impl Graph {
    /// Builds a graph, rejecting duplicate labels, self-loops, dangling
    /// endpoints and duplicate edges.
    pub fn new<V, E, A, B>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut labels: Vec<String> = vertices.into_iter().map(Into::into).collect();
        for l in &labels {
            check_label(l)?;
        }
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate vertex `{}`", w[0])));
        }
        let index: HashMap<String, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        let mut pairs = Vec::new();
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let ia = *index.get(a).ok_or_else(|| {
                Error::InvalidGraph(format!("edge endpoint `{a}` is not a vertex"))
            })?;
            let ib = *index.get(b).ok_or_else(|| {
                Error::InvalidGraph(format!("edge endpoint `{b}` is not a vertex"))
            })?;
            if ia == ib {
                return Err(Error::InvalidGraph(format!("self-loop at `{a}`")));
            }
            pairs.push((ia.min(ib), ia.max(ib)));
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge `{}`-`{}`",
                labels[w[0].0], labels[w[0].1]
            )));
        }
        Ok(Self::from_parts(labels, index, pairs))
    }

    /// Like [`Graph::new`] but silently merges parallel edges.
    pub(crate) fn new_dedup<V, E, A, B>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut seen = std::collections::BTreeSet::new();
        let mut kept = Vec::new();
        for (a, b) in edges {
            let (a, b) = (a.as_ref().to_string(), b.as_ref().to_string());
            let key = if a <= b {
                (a.clone(), b.clone())
            } else {
                (b.clone(), a.clone())
            };
            if seen.insert(key) {
                kept.push((a, b));
            }
        }
        Self::new(vertices, kept)
    }

    fn from_parts(
        labels: Vec<String>,
        index: HashMap<String, usize>,
        edges: Vec<(usize, usize)>,
    ) -> Self {
        let mut adj = vec![Vec::new(); labels.len()];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Graph {
            labels,
            index,
            edges,
            adj,
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Vertex labels in index (lexicographic) order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Edges as index pairs `(u, v)` with `u < v`, sorted.
    pub fn edge_indices(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.edges
            .iter()
            .map(|&(u, v)| (self.labels[u].as_str(), self.labels[v].as_str()))
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn has_edge(&self, u: &str, v: &str) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(a), Some(b)) => self.has_edge_idx(a, b),
            _ => false,
        }
    }

    pub fn has_edge_idx(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Position of edge `{a, b}` in [`Graph::edge_indices`].
    pub fn edge_position(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&(a.min(b), a.max(b))).ok()
    }

    /// All coordinates of `R^{V ∪ E}`: vertices in index order, then edges.
    pub fn variables(&self) -> Vec<VariableId> {
        let mut vars: Vec<VariableId> = self.labels.iter().map(VariableId::vertex).collect();
        vars.extend(self.edges().map(|(u, v)| VariableId::edge(u, v)));
        vars
    }

    /// Coordinate position of a variable in [`Graph::variables`].
    pub fn variable_position(&self, var: &VariableId) -> Option<usize> {
        match var {
            VariableId::Vertex(v) => self.index_of(v),
            VariableId::Edge(u, v) => {
                let (a, b) = (self.index_of(u)?, self.index_of(v)?);
                self.edge_position(a, b).map(|p| self.n() + p)
            }
        }
    }

    pub fn contains_variable(&self, var: &VariableId) -> bool {
        self.variable_position(var).is_some()
    }

    pub fn is_connected(&self) -> bool {
        if self.n() <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n()
    }

    /// Subgraph induced on the given labels.
    pub fn induced(&self, labels: &[&str]) -> Result<Graph> {
        let mut keep = vec![false; self.n()];
        for l in labels {
            let i = self
                .index_of(l)
                .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex `{l}`")))?;
            keep[i] = true;
        }
        let verts = self
            .labels
            .iter()
            .enumerate()
            .filter(|(i, _)| keep[*i])
            .map(|(_, l)| l.clone());
        let edges = self
            .edges
            .iter()
            .filter(|(u, v)| keep[*u] && keep[*v])
            .map(|&(u, v)| (self.labels[u].clone(), self.labels[v].clone()))
            .collect::<Vec<_>>();
        Graph::new(verts, edges)
    }

    /// Neighbourhood bitmasks; only meaningful for graphs with at most 64 vertices.
    pub(crate) fn adjacency_masks(&self) -> Vec<u64> {
        debug_assert!(self.n() <= 64);
        self.adj
            .iter()
            .map(|ns| ns.iter().fold(0u64, |m, &w| m | (1u64 << w)))
            .collect()
    }

    /// Returns a label derived from `base` that is not a vertex of this graph.
    pub(crate) fn fresh_label(&self, base: String) -> String {
        let mut l = base;
        while self.index.contains_key(&l) {
            l.push('\'');
        }
        l
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed() {
        assert!(matches!(
            Graph::new(["a", "a"], Vec::<(&str, &str)>::new()),
            Err(Error::InvalidGraph(_))
        ));
        assert!(Graph::new(["a"], [("a", "a")]).is_err());
        assert!(Graph::new(["a", "b"], [("a", "c")]).is_err());
        assert!(Graph::new(["a", "b"], [("a", "b"), ("b", "a")]).is_err());
        assert!(Graph::new(["a b"], Vec::<(&str, &str)>::new()).is_err());
        assert!(Graph::new(["a--b"], Vec::<(&str, &str)>::new()).is_err());
    }

    #[test]
    fn sorted_indexing() {
        let g = Graph::new(["c", "a", "b"], [("c", "a"), ("b", "a")]).unwrap();
        assert_eq!(g.labels(), ["a", "b", "c"]);
        assert_eq!(g.edge_indices(), [(0, 1), (0, 2)]);
        assert_eq!(
            g.variables(),
            vec![
                VariableId::vertex("a"),
                VariableId::vertex("b"),
                VariableId::vertex("c"),
                VariableId::edge("a", "b"),
                VariableId::edge("c", "a"),
            ]
        );
        assert_eq!(g.variable_position(&VariableId::edge("c", "a")), Some(4));
        assert_eq!(g.variable_position(&VariableId::edge("b", "c")), None);
    }

    #[test]
    fn variable_id_text_form() {
        let e = VariableId::edge("v", "u");
        assert_eq!(e.to_string(), "u--v");
        assert_eq!(VariableId::parse("u--v").unwrap(), e);
        assert_eq!(VariableId::parse("w").unwrap(), VariableId::vertex("w"));
        assert!(VariableId::parse("--v").is_err());
        assert!(VariableId::parse("").is_err());
    }
}
