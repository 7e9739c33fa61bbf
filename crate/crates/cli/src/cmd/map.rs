use anyhow::{bail, Result};
use serde::Serialize;

use corpoly::extform::{build_ef, map_dp};
use corpoly::polytope::{map_brute_force, parse_weights, MapSolution};
use corpoly::rational::{is_binary, to_pq};
use corpoly::{Rational, VariableId};

use super::{decomposition, emit, load_graph, require_enumerable, show};
use crate::report::Io;
use crate::{Global, MapCmd, MapMethod};

#[derive(Serialize)]
struct MethodResult {
    method: &'static str,
    value: String,
    /// `None` when the LP optimum is not a 0/1 point.
    subset: Option<Vec<String>>,
}

#[derive(Serialize)]
struct Solved {
    results: Vec<MethodResult>,
    skipped: Vec<String>,
    agree: bool,
}

fn name(m: MapMethod) -> &'static str {
    match m {
        MapMethod::Dp => "dp",
        MapMethod::Bf => "bf",
        MapMethod::Lp => "lp",
    }
}

fn from_solution(method: &'static str, s: MapSolution) -> (Rational, MethodResult) {
    let r = MethodResult {
        method,
        value: to_pq(&s.value),
        subset: Some(s.subset),
    };
    (s.value, r)
}

pub fn run(cmd: MapCmd, global: &Global) -> Result<bool> {
    let MapCmd::Solve {
        graph,
        weights,
        method,
        cross_check,
        decomposition: dargs,
    } = cmd;
    let mut io = Io::default();
    let g = load_graph(&mut io, &graph)?;
    let w = parse_weights(&g, &io.read(&weights)?)?;

    let methods: Vec<MapMethod> = if cross_check {
        vec![MapMethod::Dp, MapMethod::Bf, MapMethod::Lp]
    } else {
        vec![method]
    };
    let mut skipped = Vec::new();
    let mut values = Vec::new();
    let mut results = Vec::new();
    for m in methods {
        let (value, res) = match m {
            MapMethod::Bf => {
                if let Err(e) = require_enumerable(&g, &global.limits) {
                    if cross_check {
                        skipped.push(format!("bf: {e}"));
                        continue;
                    }
                    return Err(e);
                }
                from_solution("bf", map_brute_force(&g, &w)?)
            }
            MapMethod::Dp => {
                let (td, _) = decomposition(&mut io, &g, &dargs, &global.limits)?;
                from_solution("dp", map_dp(&g, &td, &w)?)
            }
            MapMethod::Lp => {
                let (td, _) = decomposition(&mut io, &g, &dargs, &global.limits)?;
                let ef = build_ef(&g, &td)?;
                let Some(sol) = ef.maximize(&w)? else {
                    bail!("formulation LP reported infeasible");
                };
                let subset = sol.x.iter().all(is_binary).then(|| {
                    g.variables()
                        .iter()
                        .zip(&sol.x)
                        .filter_map(|(var, x)| match var {
                            VariableId::Vertex(v) if x.is_integer() && *x.numer() == 1.into() => {
                                Some(v.clone())
                            }
                            _ => None,
                        })
                        .collect()
                });
                let r = MethodResult {
                    method: name(m),
                    value: to_pq(&sol.value),
                    subset,
                };
                (sol.value, r)
            }
        };
        values.push(value);
        results.push(res);
    }
    // one --td file may be read twice; keep one digest per path
    io.inputs.dedup_by(|a, b| a.path == b.path);

    let agree = values.windows(2).all(|p| p[0] == p[1]);
    let mut summary = String::new();
    for r in &results {
        let subset = match &r.subset {
            Some(s) => format!("{{{}}}", s.join(", ")),
            None => "(fractional point)".into(),
        };
        summary += &format!("{}: value = {}, X = {subset}\n", r.method, show(&r.value));
    }
    if cross_check {
        let names: Vec<&str> = results.iter().map(|r| r.method).collect();
        summary += &format!("{}: {agree}\n", names.join(" == "));
        for s in &skipped {
            summary += &format!("skipped {s}\n");
        }
    }
    let solved = Solved {
        results,
        skipped,
        agree,
    };
    emit(global, &io, "map solve", None, agree, solved, &summary)
}
