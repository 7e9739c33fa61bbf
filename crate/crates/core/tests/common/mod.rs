//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::collections::BTreeSet;

use corpoly::lp::LinearProgram;
use corpoly::polytope::{AffineForm, AffineMap, CorPoint};
use corpoly::rational::int;
use corpoly::{Graph, Rational, VariableId};
use num::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type PointSet = BTreeSet<Vec<(VariableId, Rational)>>;

pub fn as_set(points: &[CorPoint]) -> PointSet {
    points
        .iter()
        .map(|p| p.to_map().into_iter().collect())
        .collect()
}

/// Identification used after contracting `uv` into `w`: `w` reads `x_u`, an
/// edge `wz` reads the smaller of `x_uz`, `x_vz` that exists in `g`.
pub fn contraction_map(g: &Graph, h: &Graph, u: &str, v: &str, w: &str) -> AffineMap<VariableId> {
    let back = |x: &str| -> Vec<String> {
        if x == w {
            vec![u.to_string(), v.to_string()]
        } else {
            vec![x.to_string()]
        }
    };
    let mut forms = Vec::new();
    for var in h.variables() {
        let src = match &var {
            VariableId::Vertex(x) => VariableId::vertex(back(x).swap_remove(0)),
            VariableId::Edge(a, b) => {
                let mut cands: Vec<VariableId> = back(a)
                    .iter()
                    .flat_map(|p| back(b).into_iter().map(move |q| (p.clone(), q)))
                    .filter(|(p, q)| g.has_edge(p, q))
                    .map(|(p, q)| VariableId::edge(p, q))
                    .collect();
                cands.sort();
                cands.swap_remove(0)
            }
        };
        forms.push(AffineForm::single(src));
    }
    AffineMap::new(h.variables(), forms).unwrap()
}

pub fn dense(a: &[Vec<i64>], b: &[i64], c: &[i64]) -> LinearProgram {
    let mut lp = LinearProgram::new();
    for j in 0..c.len() {
        lp.add_variable(format!("x{j}"));
    }
    for (i, row) in a.iter().enumerate() {
        let terms = row
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(j, v)| (j, int(*v)))
            .collect();
        lp.add_equality(format!("r{i}"), terms, int(b[i]));
    }
    lp.set_objective(
        c.iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(|(j, v)| (j, int(*v)))
            .collect(),
    );
    lp
}

/// Brute-force optimum: best basic feasible solution over all column subsets.
pub fn vertex_oracle(a: &[Vec<i64>], b: &[i64], c: &[i64]) -> Option<Rational> {
    let (m, n) = (a.len(), c.len());
    let mut best: Option<Rational> = None;
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != m {
            continue;
        }
        let cols: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        let mut mat: Vec<Vec<Rational>> = (0..m)
            .map(|i| {
                cols.iter()
                    .map(|&j| int(a[i][j]))
                    .chain([int(b[i])])
                    .collect()
            })
            .collect();
        let mut ok = true;
        for k in 0..m {
            let Some(p) = (k..m).find(|&r| !mat[r][k].is_zero()) else {
                ok = false;
                break;
            };
            mat.swap(k, p);
            let inv = mat[k][k].recip();
            for v in mat[k].iter_mut() {
                *v *= &inv;
            }
            for r in 0..m {
                if r != k && !mat[r][k].is_zero() {
                    let f = mat[r][k].clone();
                    for j in 0..=m {
                        let d = &f * &mat[k][j];
                        mat[r][j] -= d;
                    }
                }
            }
        }
        if !ok || mat.iter().any(|row| row[m].is_negative()) {
            continue;
        }
        let val: Rational = cols
            .iter()
            .enumerate()
            .map(|(k, &j)| int(c[j]) * &mat[k][m])
            .sum();
        if best.as_ref().is_none_or(|b| val > *b) {
            best = Some(val);
        }
    }
    best
}

/// max c·x, Ax=b, x>=0  has dual  min b·y, Aᵀy >= c.  In standard form with
/// y = p - q and surplus s:  max -b·p + b·q  s.t.  Aᵀp - Aᵀq - s = c.
pub fn dual(a: &[Vec<i64>], b: &[i64], c: &[i64]) -> LinearProgram {
    let (m, n) = (a.len(), c.len());
    let mut rows = Vec::new();
    for j in 0..n {
        let mut row = vec![0; 2 * m + n];
        for i in 0..m {
            row[i] = a[i][j];
            row[m + i] = -a[i][j];
        }
        row[2 * m + j] = -1;
        rows.push(row);
    }
    let obj: Vec<i64> = (0..2 * m + n)
        .map(|k| {
            if k < m {
                -b[k]
            } else if k < 2 * m {
                b[k - m]
            } else {
                0
            }
        })
        .collect();
    dense(&rows, c, &obj)
}

pub fn instance(rng: &mut ChaCha8Rng) -> (Vec<Vec<i64>>, Vec<i64>, Vec<i64>) {
    let (m, n) = (rng.gen_range(2..=3), rng.gen_range(4..=6));
    let a: Vec<Vec<i64>> = (0..m)
        .map(|_| (0..n).map(|_| rng.gen_range(0..=4)).collect())
        .collect();
    let x0: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
    let b = a
        .iter()
        .map(|row| row.iter().zip(&x0).map(|(p, q)| p * q).sum())
        .collect();
    let c = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
    (a, b, c)
}

/// Like [`instance`], with every column given a positive entry so the
/// feasible region is bounded.
pub fn bounded_instance(rng: &mut ChaCha8Rng) -> (Vec<Vec<i64>>, Vec<i64>, Vec<i64>) {
    let (mut a, _, c) = instance(rng);
    for j in 0..c.len() {
        if a.iter().all(|row| row[j] == 0) {
            a[0][j] = 1;
        }
    }
    let x0: Vec<i64> = (0..c.len()).map(|_| rng.gen_range(0..=2)).collect();
    let b = a
        .iter()
        .map(|row| row.iter().zip(&x0).map(|(p, q)| p * q).sum())
        .collect();
    (a, b, c)
}
