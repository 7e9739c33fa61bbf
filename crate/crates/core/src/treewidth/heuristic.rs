use std::collections::{BTreeMap, BTreeSet};

use super::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Heuristic {
    MinDegree,
    #[default]
    MinFill,
}

impl std::str::FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min-degree" => Ok(Heuristic::MinDegree),
            "min-fill" => Ok(Heuristic::MinFill),
            _ => Err(Error::InvalidParameter(format!(
                "unknown heuristic `{s}` (expected min-degree or min-fill)"
            ))),
        }
    }
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let ns: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in ns.iter().enumerate() {
        for &b in &ns[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

fn eliminate(adj: &mut [BTreeSet<usize>], v: usize) -> Vec<usize> {
    let ns: Vec<usize> = std::mem::take(&mut adj[v]).into_iter().collect();
    for &a in &ns {
        adj[a].remove(&v);
        for &b in &ns {
            if a != b {
                adj[a].insert(b);
            }
        }
    }
    ns
}

fn adjacency(g: &Graph) -> Vec<BTreeSet<usize>> {
    (0..g.n())
        .map(|i| g.neighbors(i).iter().copied().collect())
        .collect()
}

/// Greedy elimination order; ties go to the smallest vertex index, i.e. the
/// lexicographically smallest label.
pub fn elimination_order(g: &Graph, heuristic: Heuristic) -> Vec<usize> {
    let mut adj = adjacency(g);
    let mut alive: BTreeSet<usize> = (0..g.n()).collect();
    let mut order = Vec::with_capacity(g.n());
    while !alive.is_empty() {
        let v = *alive
            .iter()
            .min_by_key(|&&v| match heuristic {
                Heuristic::MinDegree => (adj[v].len(), v),
                Heuristic::MinFill => (fill_in(&adj, v), v),
            })
            .expect("non-empty");
        eliminate(&mut adj, v);
        alive.remove(&v);
        order.push(v);
    }
    order
}

/// Builds the clique-bag decomposition of an elimination order, then merges
/// every bag contained in a neighbouring bag.
pub fn decomposition_from_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.n();
    assert_eq!(order.len(), n, "order must list every vertex once");
    let mut pos = vec![usize::MAX; n];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let mut adj = adjacency(g);
    // node k is the bag created when eliminating order[k]
    let mut bags: Vec<BTreeSet<usize>> = Vec::with_capacity(n);
    let mut tree: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (k, &v) in order.iter().enumerate() {
        let ns = eliminate(&mut adj, v);
        let mut bag: BTreeSet<usize> = ns.iter().copied().collect();
        bag.insert(v);
        bags.push(bag);
        let parent =
            ns.iter()
                .map(|&w| pos[w])
                .min()
                .or(if k + 1 < n { Some(k + 1) } else { None });
        if let Some(p) = parent {
            tree[k].insert(p);
            tree[p].insert(k);
        }
    }

    let mut alive = vec![true; n];
    loop {
        let mut merged = false;
        for t in 0..n {
            if !alive[t] {
                continue;
            }
            let target = tree[t]
                .iter()
                .copied()
                .find(|&s| bags[t].is_subset(&bags[s]));
            if let Some(s) = target {
                let others: Vec<usize> = tree[t].iter().copied().filter(|&x| x != s).collect();
                for x in others {
                    tree[x].remove(&t);
                    tree[x].insert(s);
                    tree[s].insert(x);
                }
                tree[s].remove(&t);
                tree[t].clear();
                alive[t] = false;
                merged = true;
            }
        }
        if !merged {
            break;
        }
    }

    let kept: Vec<usize> = (0..n).filter(|&t| alive[t]).collect();
    let digits = kept.len().max(1).to_string().len();
    let name: BTreeMap<usize, String> = kept
        .iter()
        .enumerate()
        .map(|(i, &t)| (t, format!("t{i:0digits$}")))
        .collect();
    let mut tree_edges = Vec::new();
    for &t in &kept {
        for &s in &tree[t] {
            if t < s {
                tree_edges.push((name[&t].clone(), name[&s].clone()));
            }
        }
    }
    let bags = kept
        .iter()
        .map(|&t| {
            (
                name[&t].clone(),
                bags[t].iter().map(|&v| g.label(v).to_string()).collect(),
            )
        })
        .collect();
    TreeDecomposition {
        nodes: kept.iter().map(|t| name[t].clone()).collect(),
        tree_edges,
        bags,
    }
    .normalized()
}

pub fn heuristic_decomposition(g: &Graph, heuristic: Heuristic) -> Result<TreeDecomposition> {
    if g.is_empty() {
        return Err(Error::InvalidParameter(
            "cannot decompose the empty graph".into(),
        ));
    }
    Ok(decomposition_from_order(
        g,
        &elimination_order(g, heuristic),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::{make_complete, make_cycle, make_grid, make_path, petersen};
    use crate::treewidth::validate_decomposition;

    const BOTH: [Heuristic; 2] = [Heuristic::MinDegree, Heuristic::MinFill];

    #[test]
    fn trees_have_width_one() {
        for n in 2..=8 {
            let p = make_path(n).unwrap();
            for h in BOTH {
                assert_eq!(heuristic_decomposition(&p, h).unwrap().width(), 1);
            }
        }
        let star = Graph::new(["c", "x", "y", "z"], [("c", "x"), ("c", "y"), ("c", "z")]).unwrap();
        assert_eq!(
            heuristic_decomposition(&star, Heuristic::MinFill)
                .unwrap()
                .width(),
            1
        );
    }

    #[test]
    fn complete_graph_single_bag() {
        let k5 = make_complete(5).unwrap();
        let td = heuristic_decomposition(&k5, Heuristic::MinDegree).unwrap();
        assert_eq!(td.width(), 4);
        assert_eq!(td.nodes.len(), 1);
    }

    #[test]
    fn grid3_min_fill_width_three() {
        let g = make_grid(3).unwrap();
        assert_eq!(
            heuristic_decomposition(&g, Heuristic::MinFill)
                .unwrap()
                .width(),
            3
        );
    }

    #[test]
    fn empty_rejected() {
        let g = Graph::new(Vec::<String>::new(), Vec::<(&str, &str)>::new()).unwrap();
        assert!(matches!(
            heuristic_decomposition(&g, Heuristic::MinFill),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn always_valid_and_deterministic() {
        let mut graphs: Vec<Graph> = (1..=5).flat_map(corpus::graph_classes).collect();
        graphs.extend([make_cycle(6).unwrap(), make_grid(3).unwrap(), petersen()]);
        graphs.extend(corpus::random_connected_samples(7, 20, 3));
        for g in &graphs {
            for h in BOTH {
                let td = heuristic_decomposition(g, h).unwrap();
                let r = validate_decomposition(g, &td);
                assert!(r.is_ok(), "{:?}", r.violations);
                assert_eq!(td, heuristic_decomposition(g, h).unwrap());
                let cg = g.constraint_graph().graph;
                let td = heuristic_decomposition(&cg, h).unwrap();
                assert!(validate_decomposition(&cg, &td).is_ok());
                assert!(td.nodes.len() <= cg.n());
            }
        }
    }

    #[test]
    fn no_redundant_bags() {
        let td = heuristic_decomposition(&petersen().constraint_graph().graph, Heuristic::MinFill)
            .unwrap();
        let adj = td.tree_adjacency();
        for (t, ns) in &adj {
            let bt: BTreeSet<&String> = td.bag(t).iter().collect();
            for s in ns {
                let bs: BTreeSet<&String> = td.bag(s).iter().collect();
                assert!(!bt.is_subset(&bs));
            }
        }
    }
}
