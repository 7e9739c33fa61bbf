//! Graph file formats.
//!
//! Edge-list text:
//!
//! ```text
//! c optional comment
//! p edge <n> <m>
//! n <label>          (one per isolated vertex)
//! e <label> <label>  (one per edge)
//! ```
//!
//! JSON: `{"vertices": [...], "edges": [[u, v], ...]}`.

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.m());
    for i in 0..g.n() {
        if g.degree(i) == 0 {
            out.push_str(&format!("n {}\n", g.label(i)));
        }
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut verts = std::collections::BTreeSet::new();
    let mut edges = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line_no = no + 1;
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["c", ..] => {}
            ["p", "edge", n, m] => {
                if header.is_some() {
                    return Err(err("duplicate header".into()));
                }
                let n = n
                    .parse()
                    .map_err(|_| err(format!("bad vertex count `{n}`")))?;
                let m = m
                    .parse()
                    .map_err(|_| err(format!("bad edge count `{m}`")))?;
                header = Some((n, m));
            }
            ["n", v] => {
                verts.insert(v.to_string());
            }
            ["e", u, v] => {
                verts.insert(u.to_string());
                verts.insert(v.to_string());
                edges.push((u.to_string(), v.to_string()));
            }
            _ => return Err(err(format!("unrecognised line `{line}`"))),
        }
    }
    let (n, m) = header.ok_or(Error::Parse {
        line: 0,
        msg: "missing `p edge <n> <m>` header".into(),
    })?;
    let g = Graph::new(verts, edges)?;
    if g.n() != n || g.m() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!(
                "header declares {n} vertices and {m} edges, body has {} and {}",
                g.n(),
                g.m()
            ),
        });
    }
    Ok(g)
}

pub fn to_json(g: &Graph) -> String {
    let j = GraphJson {
        vertices: g.labels().to_vec(),
        edges: g
            .edges()
            .map(|(u, v)| (u.to_string(), v.to_string()))
            .collect(),
    };
    serde_json::to_string_pretty(&j).expect("graph json")
}

pub fn parse_json(text: &str) -> Result<Graph> {
    let j: GraphJson = serde_json::from_str(text)?;
    Graph::new(j.vertices, j.edges)
}

/// Picks the parser from the content: JSON if it starts with `{`.
pub fn parse_any(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_edge_list(text)
    }
}
