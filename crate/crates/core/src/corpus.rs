//! Test corpora: isomorphism-class representatives of small graphs and
//! seeded random connected graphs.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Largest order for which [`graph_classes`] enumerates exhaustively.
pub const CLASS_LIMIT: usize = 6;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut p = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            p.push((i, j));
        }
    }
    p
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn build(n: usize, pairs: &[(usize, usize)], mask: u32) -> Graph {
    let labels: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let edges: Vec<_> = pairs
        .iter()
        .enumerate()
        .filter(|(k, _)| mask >> k & 1 == 1)
        .map(|(_, &(i, j))| (labels[i].clone(), labels[j].clone()))
        .collect();
    Graph::new(labels, edges).expect("corpus graph")
}

/// One representative per isomorphism class of graphs on `n` vertices
/// (labels `v1..vn`), the representative being the class member with the
/// smallest edge bitmask.
pub fn graph_classes(n: usize) -> Vec<Graph> {
    assert!(
        (1..=CLASS_LIMIT).contains(&n),
        "graph_classes supports 1..={CLASS_LIMIT}"
    );
    let ps = pairs(n);
    let slot = |i: usize, j: usize| ps.iter().position(|&p| p == (i.min(j), i.max(j))).unwrap();
    let perms = permutations(n);
    let maps: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| ps.iter().map(|&(i, j)| slot(p[i], p[j])).collect())
        .collect();
    let total = 1u32 << ps.len();
    let mut seen = vec![false; total as usize];
    let mut reps = Vec::new();
    for mask in 0..total {
        if seen[mask as usize] {
            continue;
        }
        reps.push(build(n, &ps, mask));
        for map in &maps {
            let mut img = 0u32;
            for (k, &target) in map.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    img |= 1 << target;
                }
            }
            seen[img as usize] = true;
        }
    }
    reps
}

pub fn connected_classes(n: usize) -> Vec<Graph> {
    graph_classes(n)
        .into_iter()
        .filter(Graph::is_connected)
        .collect()
}

/// A seeded random connected graph on `v1..vn`: a random spanning tree plus
/// each remaining pair independently with probability `p`.
pub fn random_connected(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let ps = pairs(n);
    let mut chosen = BTreeSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        chosen.insert((u, v));
    }
    for &pr in &ps {
        if !chosen.contains(&pr) && rng.gen_bool(p) {
            chosen.insert(pr);
        }
    }
    let mask = ps
        .iter()
        .enumerate()
        .filter(|(_, pr)| chosen.contains(pr))
        .fold(0u32, |m, (k, _)| m | 1 << k);
    build(n, &ps, mask)
}

pub fn random_connected_samples(n: usize, count: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let p = [0.1, 0.3, 0.5, 0.7][i % 4];
            random_connected(n, p, &mut rng)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts_match_known_sequence() {
        // OEIS A000088 / A001349
        let all: Vec<usize> = (1..=5).map(|n| graph_classes(n).len()).collect();
        assert_eq!(all, [1, 2, 4, 11, 34]);
        let conn: Vec<usize> = (1..=5).map(|n| connected_classes(n).len()).collect();
        assert_eq!(conn, [1, 1, 2, 6, 21]);
    }

    #[test]
    fn random_samples_are_connected_and_reproducible() {
        let a = random_connected_samples(7, 20, 11);
        let b = random_connected_samples(7, 20, 11);
        assert_eq!(a, b);
        assert!(a.iter().all(|g| g.n() == 7 && g.is_connected()));
    }
}
