pub mod ef;
pub mod gadget;
pub mod graph;
pub mod map;

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use corpoly::graph::io::parse_any;
use corpoly::treewidth::{
    exact_treewidth_with, heuristic_decomposition, ExactOptions, Heuristic, TreeDecomposition,
};
use corpoly::{Error, Graph};

use crate::report::{Emit, Io, Report};
use crate::{exit, DecompositionArgs, DecompositionMethod, Global, Limits};

/// Bad arguments that clap cannot see (parameter counts, ranges).
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<Usage>() {
            return exit::USAGE;
        }
        if cause.is::<std::io::Error>() {
            return exit::IO;
        }
        if let Some(err) = cause.downcast_ref::<Error>() {
            return match err {
                Error::TooLarge { .. } | Error::TooLargeForExact { .. } => exit::LIMIT,
                Error::InvalidParameter(_) => exit::USAGE,
                _ => exit::INVALID_INPUT,
            };
        }
    }
    exit::SOLVER
}

pub fn load_graph(io: &mut Io, path: &Path) -> Result<Graph> {
    let text = io.read(path)?;
    parse_any(&text).with_context(|| format!("cannot parse graph {}", path.display()))
}

pub fn require_enumerable(g: &Graph, limits: &Limits) -> Result<()> {
    if g.n() > limits.enumeration {
        return Err(Error::TooLarge {
            what: "vertex enumeration",
            size: g.n(),
            limit: limits.enumeration,
        }
        .into());
    }
    Ok(())
}

/// A decomposition of the constraint graph `G'`, read or computed.
pub fn decomposition(
    io: &mut Io,
    g: &Graph,
    args: &DecompositionArgs,
    limits: &Limits,
) -> Result<(TreeDecomposition, &'static str)> {
    if let Some(p) = &args.td {
        let text = io.read(p)?;
        let td = TreeDecomposition::from_json(&text)
            .with_context(|| format!("cannot parse decomposition {}", p.display()))?;
        return Ok((td, "user"));
    }
    let cg = g.constraint_graph().graph;
    Ok(match args.decomposition {
        DecompositionMethod::MinFill => (
            heuristic_decomposition(&cg, Heuristic::MinFill)?,
            "min-fill",
        ),
        DecompositionMethod::MinDegree => (
            heuristic_decomposition(&cg, Heuristic::MinDegree)?,
            "min-degree",
        ),
        DecompositionMethod::Exact => {
            let opts = ExactOptions {
                limit: limits.exact_treewidth,
                ..ExactOptions::default()
            };
            (exact_treewidth_with(&cg, opts)?.decomposition, "exact")
        }
    })
}

pub fn param(params: &[usize], count: usize, usage: &str) -> Result<()> {
    if params.len() != count {
        bail!(Usage(format!(
            "expected {usage}, got {} parameter(s)",
            params.len()
        )));
    }
    Ok(())
}

/// Wraps `result` in the report envelope and emits it.
pub fn emit<T: Serialize>(
    global: &Global,
    io: &Io,
    command: &str,
    seed: Option<u64>,
    passed: bool,
    result: T,
    summary: &str,
) -> Result<bool> {
    let report = Report {
        tool: "corpoly",
        version: env!("CARGO_PKG_VERSION"),
        command,
        seed,
        limits: &global.limits,
        inputs: &io.inputs,
        outputs: &io.outputs,
        passed,
        result,
    };
    let e = Emit {
        json: global.json,
        report: global.report.clone(),
    };
    e.finish(&report, summary)?;
    Ok(passed)
}

/// `"p/q"` for humans: integers lose the `/1`.
pub fn show(pq: &str) -> &str {
    pq.strip_suffix("/1").unwrap_or(pq)
}
