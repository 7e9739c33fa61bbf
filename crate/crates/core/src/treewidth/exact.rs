//! Exact treewidth by branch-and-bound over elimination orderings.
//!
//! The search state is the set of already-eliminated vertices (the graph
//! left after eliminating a set does not depend on the order), memoised with
//! the best width-so-far seen for it. Pruning uses a min-fill/min-degree
//! upper bound and the max of three lower bounds on the remaining graph:
//! degeneracy, minor-min-width and a greedy clique. Correctness does not
//! depend on the bounds being tight.

use std::collections::HashMap;

use super::heuristic::{decomposition_from_order, elimination_order, Heuristic};
use super::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_EXACT_LIMIT: usize = 13;
const MASK_BITS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactOptions {
    /// Largest vertex count accepted; at most 64.
    pub limit: usize,
    /// Eliminate simplicial vertices without branching. This reduction is
    /// exact (a simplicial vertex of degree `d` can always go first at cost
    /// `d`); disabling it gives a plain search.
    pub simplicial_rule: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            limit: DEFAULT_EXACT_LIMIT,
            simplicial_rule: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExactTreewidth {
    pub width: usize,
    /// An optimal elimination order (labels).
    pub order: Vec<String>,
    /// Witness decomposition of width [`ExactTreewidth::width`].
    pub decomposition: TreeDecomposition,
    /// Search nodes expanded.
    pub expanded: u64,
}

pub fn exact_treewidth(g: &Graph) -> Result<ExactTreewidth> {
    exact_treewidth_with(g, ExactOptions::default())
}

pub fn exact_treewidth_with(g: &Graph, opts: ExactOptions) -> Result<ExactTreewidth> {
    let limit = opts.limit.min(MASK_BITS);
    if g.n() > limit {
        return Err(Error::TooLargeForExact { size: g.n(), limit });
    }
    if g.is_empty() {
        return Err(Error::InvalidParameter(
            "treewidth of the empty graph".into(),
        ));
    }
    let adj = g.adjacency_masks();
    let n = g.n();

    let mut best_order = Vec::new();
    let mut best = usize::MAX;
    for h in [Heuristic::MinFill, Heuristic::MinDegree] {
        let order = elimination_order(g, h);
        let w = order_width(&adj, &order);
        if w < best {
            best = w;
            best_order = order;
        }
    }

    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut search = Search {
        best,
        best_order,
        memo: HashMap::new(),
        simplicial_rule: opts.simplicial_rule,
        expanded: 0,
    };
    if lower_bound(&adj, all) < search.best {
        search.dfs(&adj, all, 0, &mut Vec::with_capacity(n));
    }

    let width = order_width(&adj, &search.best_order);
    debug_assert_eq!(width, search.best);
    let decomposition = decomposition_from_order(g, &search.best_order);
    debug_assert_eq!(decomposition.width(), width);
    Ok(ExactTreewidth {
        width,
        order: search
            .best_order
            .iter()
            .map(|&v| g.label(v).to_string())
            .collect(),
        decomposition,
        expanded: search.expanded,
    })
}

struct Search {
    best: usize,
    best_order: Vec<usize>,
    memo: HashMap<u64, usize>,
    simplicial_rule: bool,
    expanded: u64,
}

impl Search {
    fn dfs(&mut self, adj: &[u64], alive: u64, wsf: usize, order: &mut Vec<usize>) {
        let r = alive.count_ones() as usize;
        if r == 0 {
            if wsf < self.best {
                self.best = wsf;
                self.best_order = order.clone();
            }
            return;
        }
        // any completion costs at most r - 1
        let trivial = wsf.max(r - 1);
        if trivial < self.best {
            self.best = trivial;
            self.best_order = order.iter().copied().chain(bits(alive)).collect();
        }
        if r - 1 <= wsf {
            return;
        }
        if wsf.max(lower_bound(adj, alive)) >= self.best {
            return;
        }
        match self.memo.get(&alive) {
            Some(&seen) if seen <= wsf => return,
            _ => {
                self.memo.insert(alive, wsf);
            }
        }
        self.expanded += 1;

        if self.simplicial_rule {
            if let Some(v) = bits(alive).find(|&v| is_clique(adj, adj[v] & alive)) {
                let d = (adj[v] & alive).count_ones() as usize;
                let next = eliminated(adj, alive, v);
                order.push(v);
                self.dfs(&next, alive & !(1 << v), wsf.max(d), order);
                order.pop();
                return;
            }
        }

        let mut cands: Vec<(usize, usize)> = bits(alive)
            .map(|v| ((adj[v] & alive).count_ones() as usize, v))
            .collect();
        cands.sort_unstable();
        for (d, v) in cands {
            let w = wsf.max(d);
            if w >= self.best {
                continue;
            }
            let next = eliminated(adj, alive, v);
            order.push(v);
            self.dfs(&next, alive & !(1 << v), w, order);
            order.pop();
        }
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

fn is_clique(adj: &[u64], set: u64) -> bool {
    bits(set).all(|v| set & !(1 << v) & !adj[v] == 0)
}

/// Adjacency after eliminating `v`: its live neighbourhood becomes a clique.
fn eliminated(adj: &[u64], alive: u64, v: usize) -> Vec<u64> {
    let mut next = adj.to_vec();
    let ns = adj[v] & alive;
    for u in bits(ns) {
        next[u] |= ns & !(1 << u);
        next[u] &= !(1 << v);
    }
    next[v] = 0;
    next
}

fn order_width(adj: &[u64], order: &[usize]) -> usize {
    let mut cur = adj.to_vec();
    let mut alive = order.iter().fold(0u64, |m, &v| m | 1 << v);
    let mut w = 0;
    for &v in order {
        w = w.max((cur[v] & alive).count_ones() as usize);
        cur = eliminated(&cur, alive, v);
        alive &= !(1 << v);
    }
    w
}

fn lower_bound(adj: &[u64], alive: u64) -> usize {
    minor_min_width(adj, alive).max(greedy_clique(adj, alive).saturating_sub(1))
}

/// Repeatedly contracts a min-degree vertex into its min-degree neighbour;
/// the largest min-degree seen is a treewidth lower bound. It dominates the
/// degeneracy bound (which only deletes).
fn minor_min_width(adj: &[u64], mut alive: u64) -> usize {
    let mut g: Vec<u64> = adj.iter().map(|&a| a & alive).collect();
    let mut lb = 0;
    while alive.count_ones() > 1 {
        let v = bits(alive)
            .min_by_key(|&v| ((g[v] & alive).count_ones(), v))
            .unwrap();
        let ns = g[v] & alive;
        lb = lb.max(ns.count_ones() as usize);
        if ns == 0 {
            alive &= !(1 << v);
            continue;
        }
        let u = bits(ns)
            .min_by_key(|&u| ((g[u] & alive).count_ones(), u))
            .unwrap();
        let merged = (g[u] | ns) & !(1 << u) & !(1 << v);
        g[u] = merged;
        for w in bits(ns) {
            g[w] &= !(1 << v);
            if w != u {
                g[w] |= 1 << u;
            }
        }
        alive &= !(1 << v);
    }
    lb
}

fn greedy_clique(adj: &[u64], alive: u64) -> usize {
    let mut best = usize::from(alive != 0);
    for v in bits(alive) {
        let mut clique = 1u64 << v;
        let mut cand = adj[v] & alive;
        while cand != 0 {
            let u = bits(cand)
                .max_by_key(|&u| ((adj[u] & cand).count_ones(), usize::MAX - u))
                .unwrap();
            clique |= 1 << u;
            cand &= adj[u];
        }
        best = best.max(clique.count_ones() as usize);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::{make_complete, make_cycle, make_grid, make_path, petersen};
    use crate::treewidth::{heuristic_decomposition, validate_decomposition};

    /// Independent oracle: minimum over all n! elimination orders.
    fn brute_force_tw(g: &Graph) -> usize {
        let adj = g.adjacency_masks();
        let n = g.n();
        let mut best = usize::MAX;
        let mut order: Vec<usize> = (0..n).collect();
        permute(&mut order, 0, &mut |o| {
            best = best.min(order_width(&adj, o))
        });
        best
    }

    fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, f);
            v.swap(k, i);
        }
    }

    #[test]
    fn brute_force_oracle_values() {
        assert_eq!(brute_force_tw(&make_complete(4).unwrap()), 3);
        assert_eq!(brute_force_tw(&make_cycle(5).unwrap()), 2);
        assert_eq!(brute_force_tw(&make_grid(3).unwrap()), 3);
    }

    #[test]
    fn known_values() {
        assert_eq!(
            exact_treewidth(&make_complete(4).unwrap()).unwrap().width,
            3
        );
        assert_eq!(exact_treewidth(&make_cycle(5).unwrap()).unwrap().width, 2);
        assert_eq!(exact_treewidth(&make_grid(3).unwrap()).unwrap().width, 3);
        assert_eq!(exact_treewidth(&make_path(7).unwrap()).unwrap().width, 1);
        assert_eq!(exact_treewidth(&petersen()).unwrap().width, 4);
        let single = make_path(1).unwrap();
        assert_eq!(exact_treewidth(&single).unwrap().width, 0);
    }

    #[test]
    fn size_limit() {
        let g = make_path(14).unwrap();
        assert_eq!(
            exact_treewidth(&g).unwrap_err(),
            Error::TooLargeForExact {
                size: 14,
                limit: 13
            }
        );
        let opts = ExactOptions {
            limit: 20,
            ..Default::default()
        };
        assert_eq!(exact_treewidth_with(&g, opts).unwrap().width, 1);
    }

    #[test]
    fn matches_brute_force_on_small_classes() {
        let mut graphs: Vec<Graph> = (1..=6).flat_map(corpus::graph_classes).collect();
        graphs.extend(corpus::random_connected_samples(7, 12, 5));
        for g in &graphs {
            let oracle = brute_force_tw(g);
            for simplicial_rule in [true, false] {
                let opts = ExactOptions {
                    simplicial_rule,
                    ..Default::default()
                };
                let r = exact_treewidth_with(g, opts).unwrap();
                assert_eq!(r.width, oracle, "{:?}", g.edges().collect::<Vec<_>>());
                assert!(validate_decomposition(g, &r.decomposition).is_ok());
                assert_eq!(r.decomposition.width(), r.width);
                for h in [Heuristic::MinDegree, Heuristic::MinFill] {
                    assert!(r.width <= heuristic_decomposition(g, h).unwrap().width());
                }
            }
        }
    }
}
