use super::Graph;
use crate::error::{Error, Result};

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidParameter(format!(
            "{name} must be at least 1"
        )));
    }
    Ok(())
}

/// The `h × h` grid `G_{h,h}`: vertex `(a,b)` is labelled `a,b` (1-based) and
/// `(a,b) ~ (a',b')` iff `|a-a'| + |b-b'| = 1`.
pub fn make_grid(h: usize) -> Result<Graph> {
    positive("grid height", h)?;
    let label = |a: usize, b: usize| format!("{a},{b}");
    let mut verts = Vec::with_capacity(h * h);
    let mut edges = Vec::new();
    for a in 1..=h {
        for b in 1..=h {
            verts.push(label(a, b));
            if a < h {
                edges.push((label(a, b), label(a + 1, b)));
            }
            if b < h {
                edges.push((label(a, b), label(a, b + 1)));
            }
        }
    }
    Graph::new(verts, edges)
}

/// `K_n` on `v1..vn`.
pub fn make_complete(n: usize) -> Result<Graph> {
    positive("n", n)?;
    let verts: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((verts[i].clone(), verts[j].clone()));
        }
    }
    Graph::new(verts, edges)
}

/// `K_{a,b}`; the sides are labelled `a1..aa` and `b1..bb`.
pub fn make_complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    positive("a", a)?;
    positive("b", b)?;
    let left: Vec<String> = (1..=a).map(|i| format!("a{i}")).collect();
    let right: Vec<String> = (1..=b).map(|j| format!("b{j}")).collect();
    let mut edges = Vec::with_capacity(a * b);
    for l in &left {
        for r in &right {
            edges.push((l.clone(), r.clone()));
        }
    }
    Graph::new(left.into_iter().chain(right), edges)
}

/// Path `v1 - v2 - ... - vn`.
pub fn make_path(n: usize) -> Result<Graph> {
    positive("n", n)?;
    let verts: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let edges: Vec<_> = verts
        .windows(2)
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect();
    Graph::new(verts, edges)
}

pub fn make_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(
            "a cycle needs at least 3 vertices".into(),
        ));
    }
    let verts: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let edges: Vec<_> = (0..n)
        .map(|i| (verts[i].clone(), verts[(i + 1) % n].clone()))
        .collect();
    Graph::new(verts, edges)
}

pub fn petersen() -> Graph {
    let outer: Vec<String> = (0..5).map(|i| format!("o{i}")).collect();
    let inner: Vec<String> = (0..5).map(|i| format!("i{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((outer[i].clone(), outer[(i + 1) % 5].clone()));
        edges.push((outer[i].clone(), inner[i].clone()));
        edges.push((inner[i].clone(), inner[(i + 2) % 5].clone()));
    }
    Graph::new(outer.into_iter().chain(inner), edges).expect("petersen graph is simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_counts() {
        for (h, n, m) in [(1, 1, 0), (2, 4, 4), (3, 9, 12), (5, 25, 40)] {
            let g = make_grid(h).unwrap();
            assert_eq!((g.n(), g.m()), (n, m), "h={h}");
            assert_eq!(g.m(), 2 * h * (h - 1));
        }
        let g2 = make_grid(2).unwrap();
        assert!((0..4).all(|i| g2.degree(i) == 2));
        assert!(g2.has_edge("1,1", "1,2") && !g2.has_edge("1,1", "2,2"));
        assert!(matches!(make_grid(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn complete_families() {
        assert_eq!(make_complete(3).unwrap().m(), 3);
        assert_eq!(make_complete(5).unwrap().m(), 10);
        let k22 = make_complete_bipartite(2, 2).unwrap();
        assert_eq!((k22.n(), k22.m()), (4, 4));
        let k11 = make_complete_bipartite(1, 1).unwrap();
        assert_eq!((k11.n(), k11.m()), (2, 1));
        assert!(make_complete(0).is_err());
        assert!(make_complete_bipartite(0, 2).is_err());
    }

    #[test]
    fn petersen_is_cubic() {
        let p = petersen();
        assert_eq!((p.n(), p.m()), (10, 15));
        assert!((0..10).all(|i| p.degree(i) == 3));
    }
}
