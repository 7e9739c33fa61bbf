use anyhow::Result;
use serde::Serialize;

use corpoly::extform::{build_ef, verify_ef, Accounting, ExtendedFormulation};
use corpoly::lp::to_lp_file;
use corpoly::Graph;

use super::{decomposition, emit, load_graph, require_enumerable};
use crate::report::Io;
use crate::{DecompositionArgs, EfCmd, Global};

#[derive(Serialize)]
struct Built<'a> {
    n: usize,
    m: usize,
    decomposition: &'static str,
    width: usize,
    accounting: &'a Accounting,
}

fn build(
    io: &mut Io,
    graph: &std::path::Path,
    args: &DecompositionArgs,
    global: &Global,
) -> Result<(Graph, ExtendedFormulation, &'static str)> {
    let g = load_graph(io, graph)?;
    let (td, source) = decomposition(io, &g, args, &global.limits)?;
    let ef = build_ef(&g, &td)?;
    Ok((g, ef, source))
}

fn accounting_line(a: &Accounting) -> String {
    format!(
        "λ = {}, equalities = {}, inequalities = {}, width = {}, budget (n+m)·2^(w+1) = {} ({})\n",
        a.lambda,
        a.equalities,
        a.inequalities,
        a.width,
        a.budget,
        if a.within_budget {
            "within"
        } else {
            "EXCEEDED"
        }
    )
}

fn built<'a>(g: &Graph, ef: &'a ExtendedFormulation, source: &'static str) -> Built<'a> {
    Built {
        n: g.n(),
        m: g.m(),
        decomposition: source,
        width: ef.accounting.width,
        accounting: &ef.accounting,
    }
}

pub fn run(cmd: EfCmd, global: &Global) -> Result<bool> {
    let mut io = Io::default();
    match cmd {
        EfCmd::Build {
            graph,
            decomposition,
            td_out,
        } => {
            let (g, ef, source) = build(&mut io, &graph, &decomposition, global)?;
            if let Some(p) = td_out {
                io.write(&p, &(ef.decomposition.to_json() + "\n"))?;
            }
            let a = &ef.accounting;
            let summary = format!(
                "graph: n = {}, m = {}; decomposition: {source}\n{}",
                g.n(),
                g.m(),
                accounting_line(a)
            );
            emit(
                global,
                &io,
                "ef build",
                None,
                a.within_budget,
                built(&g, &ef, source),
                &summary,
            )
        }
        EfCmd::Verify {
            graph,
            decomposition,
            trials,
            seed,
        } => {
            let (g, ef, source) = build(&mut io, &graph, &decomposition, global)?;
            require_enumerable(&g, &global.limits)?;
            let report = verify_ef(&g, &ef, trials, seed)?;
            let passed = report.passed() && ef.accounting.within_budget;
            let mut summary = format!(
                "{}/{} matches (seed {seed}, decomposition {source})\n",
                report.matches, report.trials
            );
            if let Some(l) = &report.lift {
                summary += &format!(
                    "lifts: {} subsets, {} failures\n",
                    l.subsets,
                    l.failures.len()
                );
            }
            if report.outside_unit_box > 0 {
                summary += &format!("{} LP optima outside [0,1]\n", report.outside_unit_box);
            }
            summary += &accounting_line(&ef.accounting);
            summary += if passed { "PASS\n" } else { "FAIL\n" };
            emit(
                global,
                &io,
                "ef verify",
                Some(seed),
                passed,
                &report,
                &summary,
            )
        }
        EfCmd::ExportLp {
            graph,
            decomposition,
            output,
            sidecar,
        } => {
            let (g, ef, source) = build(&mut io, &graph, &decomposition, global)?;
            let sidecar = sidecar.unwrap_or_else(|| output.with_extension("projection.json"));
            io.write(&output, &to_lp_file(&ef.lp))?;
            io.write(&sidecar, &(ef.sidecar_json() + "\n"))?;
            let summary = format!(
                "wrote {} and {}\n{}",
                output.display(),
                sidecar.display(),
                accounting_line(&ef.accounting)
            );
            emit(
                global,
                &io,
                "ef export-lp",
                None,
                ef.accounting.within_budget,
                built(&g, &ef, source),
                &summary,
            )
        }
    }
}
