mod common;

use common::{bounded_instance, dense, dual, instance, vertex_oracle};
use corpoly::lp::{parse_lp_file, solve, to_lp_file, FeasibleBasis, LinearProgram, LpOutcome};
use corpoly::rational::{int, ratio};
use corpoly::Rational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn primal_equals_dual_and_vertex_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    while checked < 10 {
        let (a, b, c) = bounded_instance(&mut rng);
        let primal = solve(&dense(&a, &b, &c)).unwrap();
        let LpOutcome::Optimal { value, point } = &primal else {
            continue;
        };
        assert!(dense(&a, &b, &c).is_feasible_point(point));
        let d = solve(&dual(&a, &b, &c)).unwrap();
        assert_eq!(
            d.value().map(|v| -v.clone()),
            Some(value.clone()),
            "dual of {a:?} {b:?} {c:?}"
        );
        assert_eq!(vertex_oracle(&a, &b, &c).as_ref(), Some(value));
        checked += 1;
    }
}

/// Beale's example: cycles under the textbook largest-coefficient rule.
#[test]
fn beale_terminates() {
    let mut lp = LinearProgram::new();
    let x: Vec<usize> = (1..=7).map(|i| lp.add_variable(format!("x{i}"))).collect();
    lp.add_equality(
        "a",
        vec![
            (x[3], ratio(1, 4)),
            (x[4], int(-8)),
            (x[5], int(-1)),
            (x[6], int(9)),
            (x[0], int(1)),
        ],
        int(0),
    );
    lp.add_equality(
        "b",
        vec![
            (x[3], ratio(1, 2)),
            (x[4], int(-12)),
            (x[5], ratio(-1, 2)),
            (x[6], int(3)),
            (x[1], int(1)),
        ],
        int(0),
    );
    lp.add_equality("c", vec![(x[5], int(1)), (x[2], int(1))], int(1));
    lp.set_objective(vec![
        (x[3], ratio(3, 4)),
        (x[4], int(-20)),
        (x[5], ratio(1, 2)),
        (x[6], int(-6)),
    ]);
    let out = solve(&lp).unwrap();
    assert_eq!(out.value(), Some(&ratio(5, 4)));
    assert!(lp.is_feasible_point(out.point().unwrap()));
}

/// Kuhn's degenerate instance, also cycling under Dantzig's rule.
#[test]
fn kuhn_terminates() {
    let a = vec![
        vec![-2, -9, 1, 9, 1, 0, 0],
        vec![1, 1, -1, -2, 0, 1, 0],
        vec![2, 3, -1, -12, 0, 0, 1],
    ];
    let c = [2, 3, -1, -12, 0, 0, 0];
    let out = solve(&dense(&a, &[0, 0, 2], &c)).unwrap();
    assert_eq!(out.value(), vertex_oracle(&a, &[0, 0, 2], &c).as_ref());
    assert_eq!(out.value(), Some(&int(2)));
}

#[test]
fn basis_reuse_matches_fresh_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let (a, b, c) = instance(&mut rng);
        let lp = dense(&a, &b, &c);
        let Some(fb) = FeasibleBasis::find(&lp).unwrap() else {
            continue;
        };
        for _ in 0..3 {
            let obj: Vec<(usize, Rational)> = (0..c.len())
                .map(|j| (j, int(rng.gen_range(-3..=3))))
                .collect();
            let mut fresh = lp.clone();
            fresh.set_objective(obj.clone());
            assert_eq!(fb.maximize(&lp, &obj).unwrap().0, solve(&fresh).unwrap());
        }
    }
}

#[test]
fn file_roundtrip_keeps_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let (a, b, c) = instance(&mut rng);
        let lp = dense(&a, &b, &c);
        let back = parse_lp_file(&to_lp_file(&lp)).unwrap();
        assert_eq!(back.num_constraints(), lp.num_constraints());
        assert_eq!(solve(&back).unwrap().value(), solve(&lp).unwrap().value());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn optimal_points_are_exactly_feasible(
        a in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..=3),
        b in prop::collection::vec(-4i64..=4, 3),
        c in prop::collection::vec(-3i64..=3, 5),
    ) {
        let b = &b[..a.len()];
        let lp = dense(&a, b, &c);
        match solve(&lp).unwrap() {
            LpOutcome::Optimal { value, point } => {
                prop_assert!(lp.is_feasible_point(&point));
                prop_assert_eq!(lp.objective_at(&point), value.clone());
                if let Some(best) = vertex_oracle(&a, b, &c) {
                    prop_assert_eq!(best, value);
                }
            }
            LpOutcome::Infeasible => prop_assert!(vertex_oracle(&a, b, &c).is_none()),
            LpOutcome::Unbounded => {}
        }
    }
}
