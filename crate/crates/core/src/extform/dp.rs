//! Max-sum over the tree decomposition. Each weight is charged at the
//! canonical node of its variable, so it is counted once.

use std::collections::HashMap;
use std::ops::Add;

use num::{BigInt, Signed, ToPrimitive, Zero};

use super::{restrict, Prepared};
use crate::error::Result;
use crate::graph::Graph;
use crate::polytope::{scaled_weights, CorVertex, MapSolution, Weights};
use crate::rational::Rational;
use crate::treewidth::TreeDecomposition;

struct Rooted {
    /// Nodes in an order where every child precedes its parent.
    post: Vec<usize>,
    parent: Vec<Option<usize>>,
    /// `(position in child, position in parent)` per non-root node.
    link: Vec<Vec<(usize, usize)>>,
}

fn root(p: &Prepared) -> Rooted {
    let k = p.nodes.len();
    let mut adj = vec![Vec::new(); k];
    for &(s, t) in &p.edges {
        adj[s].push(t);
        adj[t].push(s);
    }
    let mut parent = vec![None; k];
    let mut seen = vec![false; k];
    let mut pre = vec![0];
    seen[0] = true;
    let mut i = 0;
    while i < pre.len() {
        let x = pre[i];
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some(x);
                pre.push(y);
            }
        }
        i += 1;
    }
    let link = (0..k)
        .map(|c| parent[c].map(|q| p.intersection(c, q)).unwrap_or_default())
        .collect();
    pre.reverse();
    Rooted {
        post: pre,
        parent,
        link,
    }
}

/// Best total under the clamps, or `None` if the clamps admit nothing.
fn best<S>(p: &Prepared, r: &Rooted, local: &[Vec<S>], clamp: &[Option<bool>]) -> Option<S>
where
    S: Clone + Ord + Zero + Add<Output = S>,
{
    let k = p.nodes.len();
    let mut msg: Vec<HashMap<u64, S>> = vec![HashMap::new(); k];
    let mut children = vec![Vec::new(); k];
    for c in 0..k {
        if let Some(q) = r.parent[c] {
            children[q].push(c);
        }
    }
    let mut root_best = None;
    for &t in &r.post {
        let node = &p.nodes[t];
        let mut out: HashMap<u64, S> = HashMap::new();
        let mut top: Option<S> = None;
        'phi: for (i, &a) in node.assignments.iter().enumerate() {
            for &(pos, v) in &node.vertex_positions {
                if let Some(c) = clamp[v] {
                    if (a >> pos & 1 == 1) != c {
                        continue 'phi;
                    }
                }
            }
            let mut total = local[t][i].clone();
            for &c in &children[t] {
                let key = restrict(a, r.link[c].iter().map(|l| l.1));
                match msg[c].get(&key) {
                    Some(v) => total = total + v.clone(),
                    None => continue 'phi,
                }
            }
            match r.parent[t] {
                Some(_) => {
                    let key = restrict(a, r.link[t].iter().map(|l| l.0));
                    let e = out.entry(key).or_insert_with(|| total.clone());
                    if total > *e {
                        *e = total;
                    }
                }
                None => {
                    if top.as_ref().is_none_or(|b| total > *b) {
                        top = Some(total);
                    }
                }
            }
        }
        msg[t] = out;
        if r.parent[t].is_none() {
            root_best = top;
        }
    }
    root_best
}

fn solve<S>(p: &Prepared, n: usize, vw: &[S]) -> (S, u64)
where
    S: Clone + Ord + Zero + Add<Output = S>,
{
    let r = root(p);
    let mut local: Vec<Vec<S>> = p
        .nodes
        .iter()
        .map(|nd| vec![S::zero(); nd.assignments.len()])
        .collect();
    for (z, &(t, pos)) in p.canonical.iter().enumerate() {
        if vw[z].is_zero() {
            continue;
        }
        for (i, &a) in p.nodes[t].assignments.iter().enumerate() {
            if a >> pos & 1 == 1 {
                local[t][i] = local[t][i].clone() + vw[z].clone();
            }
        }
    }
    let mut clamp = vec![None; n];
    let opt = best(p, &r, &local, &clamp).expect("unclamped tree always has an assignment");
    // smallest bitmask among optima: settle the most significant vertex first
    for v in (0..n).rev() {
        clamp[v] = Some(false);
        if best(p, &r, &local, &clamp).as_ref() != Some(&opt) {
            clamp[v] = Some(true);
        }
    }
    let mask = clamp
        .iter()
        .enumerate()
        .filter(|(_, c)| **c == Some(true))
        .fold(0u64, |m, (i, _)| m | 1 << i);
    (opt, mask)
}

/// Exact MAP by dynamic programming over a decomposition of `G'`; ties go to
/// the optimal subset with the smallest bitmask, as in brute force.
pub fn map_dp(g: &Graph, td: &TreeDecomposition, w: &Weights) -> Result<MapSolution> {
    let p = Prepared::new(g, td)?;
    map_dp_prepared(g, &p, w)
}

pub(crate) fn map_dp_prepared(g: &Graph, p: &Prepared, w: &Weights) -> Result<MapSolution> {
    let sw = scaled_weights(g, w)?;
    let all: Vec<BigInt> = sw.vertex.iter().chain(&sw.edge).cloned().collect();
    let n = g.n();
    if n > 64 {
        return Err(crate::error::Error::TooLarge {
            what: "graph for tie-broken DP",
            size: n,
            limit: 64,
        });
    }
    let small = all.iter().all(|x| x.abs() < BigInt::from(1i64 << 40)) && all.len() < 1 << 20;
    let (value, mask) = if small {
        let vw: Vec<i128> = all.iter().map(|x| x.to_i128().unwrap()).collect();
        let (v, m) = solve(p, n, &vw);
        (BigInt::from(v), m)
    } else {
        solve(p, n, &all)
    };
    let x = CorVertex::from_mask(n, mask);
    Ok(MapSolution {
        value: Rational::new(value, sw.denom),
        subset: x.subset(g).into_iter().map(String::from).collect(),
    })
}
