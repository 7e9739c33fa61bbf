use corpoly::corpus::{connected_classes, random_connected_samples};
use corpoly::treewidth::{
    exact_treewidth_with, heuristic_decomposition, validate_decomposition, ExactOptions, Heuristic,
};
use corpoly::Graph;

fn tw(g: &Graph, simplicial_rule: bool) -> usize {
    let r = exact_treewidth_with(
        g,
        ExactOptions {
            limit: 64,
            simplicial_rule,
        },
    )
    .unwrap();
    assert!(validate_decomposition(g, &r.decomposition).is_ok());
    assert_eq!(r.decomposition.width(), r.width);
    r.width
}

fn check(g: &Graph, plain: bool) {
    let cg = g.constraint_graph().graph;
    let (a, b) = (tw(g, true), tw(&cg, true));
    if plain {
        assert_eq!(tw(&cg, false), b);
    }
    let heur = heuristic_decomposition(&cg, Heuristic::MinFill)
        .unwrap()
        .width();
    assert!(heur >= b);
    match a {
        0 => assert_eq!(b, 0),
        1 => assert_eq!(b, 2, "{:?}", g.labels()),
        _ => assert_eq!(b, a, "{:?}", g.labels()),
    }
}

#[test]
fn constraint_graph_width_small() {
    for n in 2..=5 {
        for g in connected_classes(n) {
            check(&g, true);
        }
    }
}

#[test]
fn constraint_graph_width_sampled() {
    for n in [6, 7] {
        for g in random_connected_samples(n, 100, 17 + n as u64) {
            check(&g, true);
        }
    }
}
