use std::path::Path;

use anyhow::Result;

use corpoly::graph::io::{to_edge_list, to_json};
use corpoly::graph::{make_complete, make_complete_bipartite, make_cycle, make_grid, make_path};
use corpoly::Graph;

use super::{load_graph, param};
use crate::report::Io;
use crate::{Family, GraphCmd, GraphFormat};

fn generate(family: Family, p: &[usize]) -> Result<Graph> {
    Ok(match family {
        Family::Grid => {
            param(p, 1, "grid <h>")?;
            make_grid(p[0])?
        }
        Family::Complete => {
            param(p, 1, "complete <n>")?;
            make_complete(p[0])?
        }
        Family::CompleteBipartite => {
            param(p, 2, "complete-bipartite <a> <b>")?;
            make_complete_bipartite(p[0], p[1])?
        }
        Family::Path => {
            param(p, 1, "path <n>")?;
            make_path(p[0])?
        }
        Family::Cycle => {
            param(p, 1, "cycle <n>")?;
            make_cycle(p[0])?
        }
    })
}

fn render(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::EdgeList => to_edge_list(g),
        GraphFormat::Json => to_json(g) + "\n",
    }
}

fn write(io: &mut Io, text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => io.write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(cmd: GraphCmd) -> Result<bool> {
    let mut io = Io::default();
    match cmd {
        GraphCmd::Gen {
            family,
            params,
            format,
            output,
        } => {
            let g = generate(family, &params)?;
            write(&mut io, &render(&g, format), output.as_deref())?;
        }
        GraphCmd::Convert { input, to, output } => {
            let g = load_graph(&mut io, &input)?;
            write(&mut io, &render(&g, to), output.as_deref())?;
        }
    }
    Ok(true)
}
