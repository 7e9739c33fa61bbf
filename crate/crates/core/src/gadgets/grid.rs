//! The grid with gadgets of height `h`, built from the `(h+1) × (h+1)` grid.
//!
//! Coordinates: `(x, y)` with `x` the column (0 = left) and `y` the row
//! (0 = bottom), both in `0..=h`. Labels use 1-based `[i,j]` with `i = y+1`
//! the row and `j = x+1` the column:
//!
//! * `r[i,j]`  grid vertex `(x, y)`;
//! * `r'[i,j]` midpoint between `r[i,j]` and `r[i,j+1]` (row direction);
//! * `c'[i,j]` midpoint between `r[i,j]` and `r[i+1,j]` (column direction).
//!
//! Construction: subdivide; drop `r[1,1]` and `r[h+1,h+1]`; drop the row
//! midpoints of row 1 and the column midpoints of column 1; cut the last
//! row-midpoint stub `r'[i,h] r[i,h+1]` and column-midpoint stub
//! `c'[h,j] r[h+1,j]` for interior `i`, `j`; join `r'[i,j-1]` to `c'[i-1,j]`
//! for `i, j >= 2` (the diagonals); replace every interior `r[i,j]` by a copy
//! of the replaced crossover gadget, prefixed `g[i,j]/`, with `b`, `t`, `l`,
//! `r` taking over the edges to the lower, upper, left and right midpoints.
//!
//! The value of a bottom vertex `r[1,j]` then travels up column `j` and the
//! value of a left vertex `r[i,1]` along row `i`; the diagonal at `[i,j]`
//! meets both.

use std::collections::BTreeMap;

use serde::Serialize;

use super::crossover::{crossover_clause_table, replace_clauses_prefixed};
use crate::error::{Error, Result};
use crate::graph::{make_complete_bipartite, Graph, VariableId};
use crate::polytope::{
    apply_affine, cor_vertices, vertices_to_points, AffineForm, AffineMap, CorPoint, Equation,
    FaceQuery, FaceSystem, FaceTag,
};

/// `verify_projection` enumerates the face exhaustively only up to here.
pub const EXHAUSTIVE_HEIGHT_LIMIT: usize = 3;

#[derive(Clone, Debug)]
pub struct GridWithGadgets {
    pub h: usize,
    pub graph: Graph,
    pub faces: FaceSystem,
    /// `r[1,j]` for `j = 2..=h+1`; maps to `a1..ah` of `K_{h,h}`.
    pub bottom: Vec<String>,
    /// `r[i,1]` for `i = 2..=h+1`; maps to `b1..bh`.
    pub left: Vec<String>,
    /// `(row midpoint, column midpoint, bottom index, left index)`, both
    /// indices 0-based into `bottom` / `left`.
    pub diagonals: Vec<(String, String, usize, usize)>,
    /// Label prefixes of the gadget copies.
    pub gadgets: Vec<String>,
    /// The solid edges, each carrying `x_u = x_uv = x_v`.
    pub solid: Vec<(String, String)>,
    pub target: Graph,
    pub projection: AffineMap<VariableId>,
}

fn r(x: usize, y: usize) -> String {
    format!("r[{},{}]", y + 1, x + 1)
}

fn rm(x: usize, y: usize) -> String {
    format!("r'[{},{}]", y + 1, x + 1)
}

fn cm(x: usize, y: usize) -> String {
    format!("c'[{},{}]", y + 1, x + 1)
}

pub fn build_grid_with_gadgets(h: usize) -> Result<GridWithGadgets> {
    if h < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid with gadgets needs height >= 2, got {h}"
        )));
    }
    let n = h;
    let interior = |x: usize, y: usize| (1..n).contains(&x) && (1..n).contains(&y);
    let present = |x: usize, y: usize| !((x, y) == (0, 0) || (x, y) == (n, n));

    let mut vertices: Vec<String> = Vec::new();
    let mut solid: Vec<(String, String)> = Vec::new();
    let mut other: Vec<(String, String)> = Vec::new();
    let mut faces = FaceSystem::default();
    let mut gadgets = Vec::new();
    let table = crossover_clause_table();

    // the label standing in for (x, y) on the side facing `role`
    let port = |x: usize, y: usize, role: &str| -> String {
        if interior(x, y) {
            format!("g[{},{}]/{role}", y + 1, x + 1)
        } else {
            r(x, y)
        }
    };
    for y in 0..=n {
        for x in 0..=n {
            if !present(x, y) {
                continue;
            }
            if interior(x, y) {
                let prefix = format!("g[{},{}]/", y + 1, x + 1);
                let rg = replace_clauses_prefixed(&table, &prefix)?;
                vertices.extend(rg.graph.labels().iter().cloned());
                other.extend(
                    rg.graph
                        .edges()
                        .map(|(a, b)| (a.to_string(), b.to_string())),
                );
                faces.extend(rg.faces.equations);
                gadgets.push(prefix);
            } else {
                vertices.push(r(x, y));
            }
        }
    }
    // row midpoints r'(x, y) between (x, y) and (x+1, y), rows 1..=n
    for y in 1..=n {
        for x in 0..n {
            let mid = rm(x, y);
            vertices.push(mid.clone());
            if present(x, y) {
                solid.push((port(x, y, "r"), mid.clone()));
            }
            let cut = x == n - 1 && (1..n).contains(&y);
            if present(x + 1, y) && !cut {
                solid.push((mid, port(x + 1, y, "l")));
            }
        }
    }
    // column midpoints c'(x, y) between (x, y) and (x, y+1), columns 1..=n
    for x in 1..=n {
        for y in 0..n {
            let mid = cm(x, y);
            vertices.push(mid.clone());
            if present(x, y) {
                solid.push((port(x, y, "t"), mid.clone()));
            }
            let cut = y == n - 1 && (1..n).contains(&x);
            if present(x, y + 1) && !cut {
                solid.push((mid, port(x, y + 1, "b")));
            }
        }
    }
    let mut diagonals = Vec::new();
    for y in 1..=n {
        for x in 1..=n {
            let (a, b) = (rm(x - 1, y), cm(x, y - 1));
            other.push((a.clone(), b.clone()));
            diagonals.push((a, b, x - 1, y - 1));
        }
    }
    for (u, v) in &solid {
        faces.extend(Equation::edge_eq_pair(u, v));
    }
    let graph = Graph::new(vertices, solid.iter().cloned().chain(other))?;
    let bottom: Vec<String> = (1..=n).map(|x| r(x, 0)).collect();
    let left: Vec<String> = (1..=n).map(|y| r(0, y)).collect();

    let target = make_complete_bipartite(h, h)?;
    let side = |k: usize, a: bool| format!("{}{}", if a { 'a' } else { 'b' }, k + 1);
    let mut source: BTreeMap<VariableId, VariableId> = BTreeMap::new();
    for k in 0..n {
        source.insert(
            VariableId::vertex(side(k, true)),
            VariableId::vertex(&bottom[k]),
        );
        source.insert(
            VariableId::vertex(side(k, false)),
            VariableId::vertex(&left[k]),
        );
    }
    for (a, b, i, j) in &diagonals {
        source.insert(
            VariableId::edge(side(*i, true), side(*j, false)),
            VariableId::edge(a, b),
        );
    }
    let outputs = target.variables();
    let forms = outputs
        .iter()
        .map(|v| AffineForm::single(source[v].clone()))
        .collect();
    let projection = AffineMap::new(outputs, forms)?;

    Ok(GridWithGadgets {
        h,
        graph,
        faces,
        bottom,
        left,
        diagonals,
        gadgets,
        solid,
        target,
        projection,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionReport {
    pub h: usize,
    pub vertices: usize,
    pub edges: usize,
    pub equations: usize,
    pub gadget_copies: usize,
    pub diagonal_edges: usize,
    /// Face vertices found by backtracking.
    pub face_vertices: usize,
    pub projected_points: usize,
    pub target_points: usize,
    pub set_equal: bool,
    /// Every diagonal coordinate is the product of its two boundary values.
    pub diagonals_are_products: bool,
    /// Every solid edge has `x_u = x_uv = x_v` at every face vertex.
    pub solid_edges_constant: bool,
    /// Face vertices per boundary pattern of the `2h` boundary vertices.
    pub min_per_pattern: usize,
    pub max_per_pattern: usize,
    pub patterns: usize,
    pub passed: bool,
}

/// Enumerates the face (boundary vertices branched first), projects it and
/// compares against `COR(K_{h,h})`.
pub fn verify_projection(gw: &GridWithGadgets) -> Result<ProjectionReport> {
    verify_projection_limited(gw, EXHAUSTIVE_HEIGHT_LIMIT)
}

/// [`verify_projection`] with a caller-chosen height limit.
pub fn verify_projection_limited(gw: &GridWithGadgets, limit: usize) -> Result<ProjectionReport> {
    if gw.h > limit {
        return Err(Error::TooLarge {
            what: "grid height (exhaustive limit)",
            size: gw.h,
            limit,
        });
    }
    let priority: Vec<&str> = gw
        .bottom
        .iter()
        .chain(&gw.left)
        .map(String::as_str)
        .collect();
    let face = FaceQuery::new(&priority)
        .run(&gw.graph, &gw.faces)?
        .vertices;
    let g = &gw.graph;
    let idx = |l: &str| g.index_of(l).expect("grid label");

    let mut per_pattern: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
    let mut diagonals_are_products = true;
    let mut solid_edges_constant = true;
    for v in &face {
        let m = v.members();
        let key: Vec<bool> = priority.iter().map(|l| m[idx(l)]).collect();
        *per_pattern.entry(key).or_default() += 1;
        for (a, b, i, j) in &gw.diagonals {
            let prod = m[idx(&gw.bottom[*i])] && m[idx(&gw.left[*j])];
            diagonals_are_products &= (m[idx(a)] && m[idx(b)]) == prod;
        }
        for (a, b) in &gw.solid {
            solid_edges_constant &= m[idx(a)] == m[idx(b)];
        }
    }
    let points = vertices_to_points(g, &face);
    let image: Vec<CorPoint> = if points.is_empty() {
        Vec::new()
    } else {
        apply_affine(&gw.projection, &points)?
    };
    let target = vertices_to_points(&gw.target, &cor_vertices(&gw.target)?);
    let as_set =
        |ps: &[CorPoint]| -> std::collections::BTreeSet<Vec<(VariableId, crate::Rational)>> {
            ps.iter()
                .map(|p| p.to_map().into_iter().collect())
                .collect()
        };
    let set_equal = as_set(&image) == as_set(&target);
    let patterns = per_pattern.len();
    let min_per_pattern = per_pattern.values().copied().min().unwrap_or(0);
    let max_per_pattern = per_pattern.values().copied().max().unwrap_or(0);
    Ok(ProjectionReport {
        h: gw.h,
        vertices: g.n(),
        edges: g.m(),
        equations: gw.faces.len(),
        gadget_copies: gw.gadgets.len(),
        diagonal_edges: gw.diagonals.len(),
        face_vertices: face.len(),
        projected_points: image.len(),
        target_points: target.len(),
        passed: set_equal
            && diagonals_are_products
            && solid_edges_constant
            && patterns == 1 << (2 * gw.h),
        set_equal,
        diagonals_are_products,
        solid_edges_constant,
        min_per_pattern,
        max_per_pattern,
        patterns,
    })
}

impl GridWithGadgets {
    /// Bounds for this graph's `n` and height.
    pub fn lower_bound_report(&self) -> super::LowerBoundReport {
        super::lower_bound_report(self.graph.n(), Some(self.h))
    }

    /// Removes both equations of the solid edge `(u, v)`.
    pub fn without_edge_eq(&self, u: &str, v: &str) -> GridWithGadgets {
        let e = VariableId::edge(u, v);
        let mut out = self.clone();
        out.faces
            .equations
            .retain(|q| !(q.tag == FaceTag::EdgeEq && q.vars.contains(&e)));
        out
    }

    /// JSON descriptor of the boundary and the projection.
    pub fn descriptor_json(&self) -> String {
        #[derive(Serialize)]
        struct D<'a> {
            h: usize,
            bottom: &'a [String],
            left: &'a [String],
            diagonals: Vec<[String; 4]>,
            gadgets: &'a [String],
            projection: Vec<(String, String)>,
        }
        let d = D {
            h: self.h,
            bottom: &self.bottom,
            left: &self.left,
            diagonals: self
                .diagonals
                .iter()
                .map(|(a, b, i, j)| {
                    [
                        a.clone(),
                        b.clone(),
                        self.bottom[*i].clone(),
                        self.left[*j].clone(),
                    ]
                })
                .collect(),
            gadgets: &self.gadgets,
            projection: self
                .projection
                .outputs
                .iter()
                .zip(&self.projection.forms)
                .map(|(o, f)| (o.to_string(), f.terms[0].0.to_string()))
                .collect(),
        };
        serde_json::to_string_pretty(&d).expect("descriptor json")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::equation_is_locally_valid;
    use std::collections::BTreeSet;

    #[test]
    fn counts() {
        for (h, diag, copies) in [(2, 4, 1), (3, 9, 4), (4, 16, 9)] {
            let gw = build_grid_with_gadgets(h).unwrap();
            assert_eq!(gw.diagonals.len(), diag);
            assert_eq!(gw.gadgets.len(), copies);
            assert_eq!(gw.bottom.len(), h);
        }
        assert!(build_grid_with_gadgets(1).is_err());
    }

    #[test]
    fn gadget_copies_are_disjoint() {
        let gw = build_grid_with_gadgets(3).unwrap();
        let mut seen = BTreeSet::new();
        for p in &gw.gadgets {
            let own: Vec<&String> = gw
                .graph
                .labels()
                .iter()
                .filter(|l| l.starts_with(p.as_str()))
                .collect();
            assert_eq!(own.len(), 44);
            for l in own {
                assert!(seen.insert(l.clone()));
            }
        }
    }

    #[test]
    fn every_equation_is_valid_locally() {
        let gw = build_grid_with_gadgets(2).unwrap();
        gw.faces.validate(&gw.graph).unwrap();
        for eq in &gw.faces.equations {
            assert!(equation_is_locally_valid(&gw.graph, eq).unwrap());
        }
    }

    #[test]
    fn height_two_projects() {
        let r = verify_projection(&build_grid_with_gadgets(2).unwrap()).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.projected_points, 16);
        assert_eq!(r.face_vertices, 32);
    }

    #[test]
    fn cutting_a_column_breaks_projection() {
        let gw = build_grid_with_gadgets(2).unwrap();
        let (u, v) = gw
            .solid
            .iter()
            .find(|(a, b)| a == "r[1,2]" || b == "r[1,2]")
            .unwrap()
            .clone();
        let r = verify_projection(&gw.without_edge_eq(&u, &v)).unwrap();
        assert!(!r.set_equal);
        assert!(!r.passed);
    }

    #[test]
    fn own_lower_bound() {
        let gw = build_grid_with_gadgets(2).unwrap();
        let r = gw.lower_bound_report();
        assert_eq!((r.n, r.h), (gw.graph.n(), Some(2)));
    }

    #[test]
    fn height_limit() {
        let gw = build_grid_with_gadgets(4).unwrap();
        assert!(matches!(
            verify_projection(&gw),
            Err(Error::TooLarge { .. })
        ));
    }
}
