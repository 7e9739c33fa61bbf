//! Ground-truth machinery for `COR(G)`: vertex enumeration, affine hull
//! dimension, brute-force MAP, face restriction and affine images.
//!
//! Everything here is exact; there is no floating point in this module.

mod affine;
mod face;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num::{BigInt, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VariableId};
use crate::rational::{self, Rational};

pub use affine::{apply_affine, AffineForm, AffineMap, CompiledMap};
pub use face::{
    equation_is_locally_valid, restrict_to_face, restrict_to_face_with, Equation, FaceEnumeration,
    FaceQuery, FaceSystem, FaceTag,
};

/// Largest vertex count for exhaustive enumeration of `COR(G)` vertices.
pub const ENUMERATION_LIMIT: usize = 20;

/// Objective / weight vector over `V ∪ E`; missing variables weigh zero.
pub type Weights = BTreeMap<VariableId, Rational>;

/// A point of `R^{V ∪ E}` with its coordinate index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorPoint {
    vars: Arc<[VariableId]>,
    coords: Vec<Rational>,
}

impl CorPoint {
    pub fn new(vars: Vec<VariableId>, coords: Vec<Rational>) -> Result<Self> {
        if vars.len() != coords.len() {
            return Err(Error::MismatchedIndex(format!(
                "{} variables but {} coordinates",
                vars.len(),
                coords.len()
            )));
        }
        Ok(CorPoint {
            vars: vars.into(),
            coords,
        })
    }

    pub(crate) fn from_parts(vars: Arc<[VariableId]>, coords: Vec<Rational>) -> Self {
        CorPoint { vars, coords }
    }

    pub fn vars(&self) -> &[VariableId] {
        &self.vars
    }

    pub(crate) fn vars_arc(&self) -> &Arc<[VariableId]> {
        &self.vars
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn get(&self, var: &VariableId) -> Option<&Rational> {
        self.vars
            .iter()
            .position(|v| v == var)
            .map(|i| &self.coords[i])
    }

    /// Coordinates keyed by variable; handy for comparing point sets whose
    /// index orders differ.
    pub fn to_map(&self) -> BTreeMap<VariableId, Rational> {
        self.vars
            .iter()
            .cloned()
            .zip(self.coords.iter().cloned())
            .collect()
    }
}

/// A vertex `(χ(X), χ(E(X)))` of `COR(G)`, stored by the membership vector of
/// `X` over the graph's vertex indices.
///
/// The ordering is the subset-bitmask order (vertex index `i` is bit `i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CorVertex {
    members: Vec<bool>,
}

impl Ord for CorVertex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.members
            .len()
            .cmp(&other.members.len())
            .then_with(|| self.members.iter().rev().cmp(other.members.iter().rev()))
    }
}

impl PartialOrd for CorVertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl CorVertex {
    pub fn from_members(members: Vec<bool>) -> Self {
        CorVertex { members }
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        CorVertex {
            members: (0..n).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn from_labels(g: &Graph, labels: &[&str]) -> Result<Self> {
        let mut members = vec![false; g.n()];
        for l in labels {
            let i = g
                .index_of(l)
                .ok_or_else(|| Error::UnknownVariable(l.to_string()))?;
            members[i] = true;
        }
        Ok(CorVertex { members })
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn subset<'a>(&self, g: &'a Graph) -> Vec<&'a str> {
        (0..g.n())
            .filter(|&i| self.members[i])
            .map(|i| g.label(i))
            .collect()
    }

    /// 0/1 coordinates in [`Graph::variables`] order.
    pub fn coordinates(&self, g: &Graph) -> Vec<bool> {
        let mut c = self.members.clone();
        c.extend(
            g.edge_indices()
                .iter()
                .map(|&(u, v)| self.members[u] && self.members[v]),
        );
        c
    }

    pub fn value(&self, g: &Graph, var: &VariableId) -> Option<bool> {
        match var {
            VariableId::Vertex(v) => g.index_of(v).map(|i| self.members[i]),
            VariableId::Edge(u, v) => {
                let (a, b) = (g.index_of(u)?, g.index_of(v)?);
                g.has_edge_idx(a, b)
                    .then(|| self.members[a] && self.members[b])
            }
        }
    }

    pub fn to_point(&self, g: &Graph) -> CorPoint {
        self.to_point_with(g, g.variables().into())
    }

    fn to_point_with(&self, g: &Graph, vars: Arc<[VariableId]>) -> CorPoint {
        let coords = self
            .coordinates(g)
            .into_iter()
            .map(|b| rational::int(i64::from(b)))
            .collect();
        CorPoint { vars, coords }
    }
}

pub fn vertices_to_points(g: &Graph, vs: &[CorVertex]) -> Vec<CorPoint> {
    let vars: Arc<[VariableId]> = g.variables().into();
    vs.iter()
        .map(|v| v.to_point_with(g, vars.clone()))
        .collect()
}

fn check_enumerable(g: &Graph) -> Result<()> {
    if g.n() > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "vertex enumeration",
            size: g.n(),
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

/// All `2^n` vertices of `COR(G)` in subset-bitmask order.
pub fn cor_vertices(g: &Graph) -> Result<Vec<CorVertex>> {
    check_enumerable(g)?;
    Ok((0..1u64 << g.n())
        .map(|m| CorVertex::from_mask(g.n(), m))
        .collect())
}

/// Affine dimension of a point set (exact rank of the difference vectors).
pub fn dimension(points: &[CorPoint]) -> Result<usize> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidParameter("dimension of an empty point set".into()))?;
    if points.iter().any(|p| p.vars() != first.vars()) {
        return Err(Error::MismatchedIndex(
            "points carry different index sets".into(),
        ));
    }
    let rows: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| {
            p.coords
                .iter()
                .zip(&first.coords)
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect();
    Ok(rank(rows))
}

pub(crate) fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        let prow: Vec<Rational> = rows[r].iter().map(|x| x / &pivot).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for (x, y) in rows[i].iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        rows[r] = prow;
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Optimal value and the optimal subset with the smallest bitmask.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapSolution {
    #[serde(with = "rational")]
    pub value: Rational,
    pub subset: Vec<String>,
}

/// Vertex and edge weights as integer numerators over a common denominator.
pub(crate) struct ScaledWeights {
    pub vertex: Vec<BigInt>,
    pub edge: Vec<BigInt>,
    pub denom: BigInt,
}

pub(crate) fn scaled_weights(g: &Graph, w: &Weights) -> Result<ScaledWeights> {
    for var in w.keys() {
        if !g.contains_variable(var) {
            return Err(Error::UnknownVariable(var.to_string()));
        }
    }
    let denom = rational::denominator_lcm(w.values());
    let scale = |var: VariableId| -> BigInt {
        w.get(&var).map_or_else(BigInt::zero, |r| {
            (r * Rational::from_integer(denom.clone())).to_integer()
        })
    };
    let vertex = g
        .labels()
        .iter()
        .map(|l| scale(VariableId::vertex(l)))
        .collect();
    let edge = g
        .edges()
        .map(|(u, v)| scale(VariableId::edge(u, v)))
        .collect();
    Ok(ScaledWeights {
        vertex,
        edge,
        denom,
    })
}

/// Reads a weights file: a JSON object from variable ids (`"u"`, `"u--v"`) to
/// rationals given as `"p/q"` strings or integers. Missing variables weigh 0.
pub fn parse_weights(g: &Graph, text: &str) -> Result<Weights> {
    let raw: BTreeMap<String, serde_json::Value> = serde_json::from_str(text)?;
    let mut w = Weights::new();
    for (k, v) in raw {
        let var = VariableId::parse(&k)?;
        if !g.contains_variable(&var) {
            return Err(Error::UnknownVariable(k));
        }
        let r = rational::from_json(&v)
            .ok_or_else(|| Error::Json(format!("weight of `{k}` is not a rational: {v}")))?;
        w.insert(var, r);
    }
    Ok(w)
}

pub fn weights_to_json(w: &Weights) -> String {
    let m: BTreeMap<String, String> = w
        .iter()
        .map(|(k, v)| (k.to_string(), rational::to_pq(v)))
        .collect();
    serde_json::to_string_pretty(&m).expect("weights json")
}

pub fn objective_value(g: &Graph, w: &Weights, v: &CorVertex) -> Result<Rational> {
    let mut total = Rational::zero();
    for (var, c) in w {
        let x = v
            .value(g, var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
        if x {
            total += c;
        }
    }
    Ok(total)
}

/// Maximises `Σ_{v∈X} w_v + Σ_{uv∈E(X)} w_uv` over all subsets, walking them
/// in Gray-code order; ties go to the smallest bitmask.
pub fn map_brute_force(g: &Graph, w: &Weights) -> Result<MapSolution> {
    check_enumerable(g)?;
    let sw = scaled_weights(g, w)?;
    let n = g.n();
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, &(u, v)) in g.edge_indices().iter().enumerate() {
        incident[u].push((v, k));
        incident[v].push((u, k));
    }

    let small = sw
        .vertex
        .iter()
        .chain(&sw.edge)
        .all(|x| x.abs() < BigInt::from(1i64 << 40));
    let (best_mask, best_val) = if small {
        let vw: Vec<i128> = sw.vertex.iter().map(|x| x.to_i128().unwrap()).collect();
        let ew: Vec<i128> = sw.edge.iter().map(|x| x.to_i128().unwrap()).collect();
        let (m, v) = gray_walk(n, &incident, 0i128, |i| vw[i], |k| ew[k]);
        (m, BigInt::from(v))
    } else {
        gray_walk(
            n,
            &incident,
            BigInt::zero(),
            |i| sw.vertex[i].clone(),
            |k| sw.edge[k].clone(),
        )
    };
    let best = CorVertex::from_mask(n, best_mask);
    Ok(MapSolution {
        value: Rational::new(best_val, sw.denom),
        subset: best.subset(g).into_iter().map(String::from).collect(),
    })
}

fn gray_walk<T>(
    n: usize,
    incident: &[Vec<(usize, usize)>],
    zero: T,
    vw: impl Fn(usize) -> T,
    ew: impl Fn(usize) -> T,
) -> (u64, T)
where
    T: Clone + Ord + std::ops::AddAssign + std::ops::SubAssign,
{
    let mut mask = 0u64;
    let mut cur = zero;
    let mut best = (0u64, cur.clone());
    for step in 1..(1u64 << n) {
        let i = step.trailing_zeros() as usize;
        let mut delta = vw(i);
        for &(j, k) in &incident[i] {
            if mask >> j & 1 == 1 {
                delta += ew(k);
            }
        }
        if mask >> i & 1 == 1 {
            cur -= delta;
        } else {
            cur += delta;
        }
        mask ^= 1 << i;
        if cur > best.1 || (cur == best.1 && mask < best.0) {
            best = (mask, cur.clone());
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

/// `Σ coeff · x_var (<= | >=) rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearInequality {
    #[serde(with = "rational::terms")]
    pub terms: Vec<(VariableId, Rational)>,
    pub sense: Sense,
    #[serde(with = "rational")]
    pub rhs: Rational,
}

impl LinearInequality {
    pub fn holds_at(&self, g: &Graph, v: &CorVertex) -> Result<bool> {
        let mut lhs = Rational::zero();
        for (var, c) in &self.terms {
            if v.value(g, var)
                .ok_or_else(|| Error::UnknownVariable(var.to_string()))?
            {
                lhs += c;
            }
        }
        Ok(match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Ge => lhs >= self.rhs,
        })
    }
}

/// True iff every vertex of `COR(G)` satisfies the inequality.
pub fn check_valid_inequality(g: &Graph, ineq: &LinearInequality) -> Result<bool> {
    for (var, _) in &ineq.terms {
        if !g.contains_variable(var) {
            return Err(Error::UnknownVariable(var.to_string()));
        }
    }
    for v in cor_vertices(g)? {
        if !ineq.holds_at(g, &v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_complete, make_path};
    use crate::rational::int;

    #[test]
    fn weights_file() {
        let g = make_path(3).unwrap();
        let (a, b) = (g.label(0).to_string(), g.label(1).to_string());
        let text = format!(r#"{{"{a}": "2/1", "{a}--{b}": -1, "{b}": "1/2"}}"#);
        let w = parse_weights(&g, &text).unwrap();
        assert_eq!(w[&VariableId::edge(&b, &a)], int(-1));
        assert_eq!(parse_weights(&g, &weights_to_json(&w)).unwrap(), w);
        assert!(matches!(
            parse_weights(&g, r#"{"zz": 1}"#),
            Err(Error::UnknownVariable(_))
        ));
        let far = format!(r#"{{"{a}--{}": 1}}"#, g.label(2));
        assert!(parse_weights(&g, &far).is_err());
        assert!(parse_weights(&g, &format!(r#"{{"{a}": 0.5}}"#)).is_err());
    }

    fn w(pairs: &[(VariableId, i64)]) -> Weights {
        pairs.iter().map(|(v, x)| (v.clone(), int(*x))).collect()
    }

    #[test]
    fn k2_vertices_in_bitmask_order() {
        let g = make_complete(2).unwrap();
        let vs = cor_vertices(&g).unwrap();
        let coords: Vec<Vec<bool>> = vs.iter().map(|v| v.coordinates(&g)).collect();
        assert_eq!(
            coords,
            vec![
                vec![false, false, false],
                vec![true, false, false],
                vec![false, true, false],
                vec![true, true, true]
            ]
        );
        let mut sorted = vs.clone();
        sorted.sort();
        assert_eq!(sorted, vs);
    }

    #[test]
    fn vertex_counts() {
        assert_eq!(cor_vertices(&make_complete(3).unwrap()).unwrap().len(), 8);
        let single = make_path(1).unwrap();
        let vs = cor_vertices(&single).unwrap();
        assert_eq!(
            vs.iter()
                .map(|v| v.coordinates(&single))
                .collect::<Vec<_>>(),
            vec![vec![false], vec![true]]
        );
        let big = make_path(21).unwrap();
        assert!(matches!(cor_vertices(&big), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn dimension_examples() {
        let k2 = make_complete(2).unwrap();
        assert_eq!(
            dimension(&vertices_to_points(&k2, &cor_vertices(&k2).unwrap())).unwrap(),
            3
        );
        let k3 = make_complete(3).unwrap();
        assert_eq!(
            dimension(&vertices_to_points(&k3, &cor_vertices(&k3).unwrap())).unwrap(),
            6
        );
        let one = vertices_to_points(&k3, &cor_vertices(&k3).unwrap()[..1]);
        assert_eq!(dimension(&one).unwrap(), 0);
        assert!(dimension(&[]).is_err());
        let mut mixed = vertices_to_points(&k2, &cor_vertices(&k2).unwrap());
        mixed.push(one[0].clone());
        assert!(matches!(dimension(&mixed), Err(Error::MismatchedIndex(_))));
    }

    #[test]
    fn brute_force_map_examples() {
        let k2 = make_complete(2).unwrap();
        let s = map_brute_force(
            &k2,
            &w(&[
                (VariableId::vertex("v1"), 1),
                (VariableId::vertex("v2"), 1),
                (VariableId::edge("v1", "v2"), -3),
            ]),
        )
        .unwrap();
        assert_eq!(s.value, int(1));
        assert_eq!(s.subset, ["v1"]);

        let k3 = make_complete(3).unwrap();
        let all: Weights = k3.variables().into_iter().map(|v| (v, int(1))).collect();
        let s = map_brute_force(&k3, &all).unwrap();
        assert_eq!((s.value, s.subset.len()), (int(6), 3));

        let s = map_brute_force(&k3, &Weights::new()).unwrap();
        assert_eq!((s.value, s.subset), (int(0), Vec::<String>::new()));

        let bad = w(&[(VariableId::vertex("nope"), 1)]);
        assert_eq!(
            map_brute_force(&k3, &bad).unwrap_err(),
            Error::UnknownVariable("nope".into())
        );
    }

    #[test]
    fn brute_force_handles_fractions_and_big_weights() {
        let p = make_path(3).unwrap();
        let mut wt = w(&[(VariableId::vertex("v1"), 1), (VariableId::vertex("v3"), 1)]);
        wt.insert(VariableId::vertex("v2"), rational::ratio(-1, 3));
        let s = map_brute_force(&p, &wt).unwrap();
        assert_eq!(
            (s.value, s.subset),
            (int(2), vec!["v1".to_string(), "v3".to_string()])
        );
        let huge = Rational::from_integer(BigInt::from(1u64 << 62) * BigInt::from(1u64 << 62));
        let wt: Weights = [(VariableId::vertex("v2"), huge.clone())]
            .into_iter()
            .collect();
        assert_eq!(map_brute_force(&p, &wt).unwrap().value, huge);
    }

    #[test]
    fn inequality_checks() {
        let k2 = make_complete(2).unwrap();
        let (u, v, e) = (
            VariableId::vertex("v1"),
            VariableId::vertex("v2"),
            VariableId::edge("v1", "v2"),
        );
        let le = |terms: Vec<(VariableId, i64)>, rhs: i64| LinearInequality {
            terms: terms.into_iter().map(|(v, c)| (v, int(c))).collect(),
            sense: Sense::Le,
            rhs: int(rhs),
        };
        assert!(
            check_valid_inequality(&k2, &le(vec![(e.clone(), 1), (u.clone(), -1)], 0)).unwrap()
        );
        assert!(check_valid_inequality(
            &k2,
            &le(vec![(u.clone(), 1), (v.clone(), 1), (e.clone(), -2)], 1)
        )
        .unwrap());
        assert!(!check_valid_inequality(&k2, &le(vec![(u, 1), (v, 1)], 1)).unwrap());
        assert!(check_valid_inequality(&k2, &le(vec![(VariableId::vertex("zz"), 1)], 1)).is_err());
    }
}
