use std::time::Instant;

use corpoly::gadgets::{
    build_grid_with_gadgets, verify_crossover, verify_projection, COMPLETIONS_PER_PATTERN,
};
use corpoly::polytope::equation_is_locally_valid;

#[test]
fn height_three_projects() {
    let t = Instant::now();
    let gw = build_grid_with_gadgets(3).unwrap();
    let r = verify_projection(&gw).unwrap();
    eprintln!(
        "h=3: {} vertices, {} face vertices, {:?}",
        r.vertices,
        r.face_vertices,
        t.elapsed()
    );
    assert!(r.passed, "{r:?}");
    assert_eq!(r.projected_points, 64);
    let per = COMPLETIONS_PER_PATTERN.pow(gw.gadgets.len() as u32);
    assert_eq!((r.min_per_pattern, r.max_per_pattern), (per, per));
}

#[test]
fn all_grid_equations_valid() {
    for h in 2..=4 {
        let gw = build_grid_with_gadgets(h).unwrap();
        for eq in &gw.faces.equations {
            assert!(equation_is_locally_valid(&gw.graph, eq).unwrap(), "{eq:?}");
        }
    }
}

#[test]
fn crossover_is_stable() {
    let a = verify_crossover().unwrap();
    let b = verify_crossover().unwrap();
    assert_eq!(a, b);
    assert_eq!(a.completions, vec![COMPLETIONS_PER_PATTERN; 4]);
}
