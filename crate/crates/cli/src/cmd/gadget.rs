use anyhow::Result;

use corpoly::gadgets::{
    build_grid_with_gadgets, lower_bound_report, verify_crossover, verify_projection_limited,
};
use corpoly::graph::io::to_edge_list;

use super::{emit, show, Usage};
use crate::report::Io;
use crate::{GadgetCmd, Global};

pub fn run(cmd: GadgetCmd, global: &Global) -> Result<bool> {
    let mut io = Io::default();
    match cmd {
        GadgetCmd::VerifyCrossover => {
            let r = verify_crossover()?;
            let summary = format!(
                "{} vertices, {} edges, {} equations\nb = t and l = r on every face vertex: {}\npatterns realized: {}/4, completions per pattern: {:?}\n{}\n",
                r.vertices,
                r.edges,
                r.equations,
                r.boundary_forced,
                r.patterns.iter().filter(|p| p.count > 0).count(),
                r.completions,
                if r.passed { "PASS" } else { "FAIL" }
            );
            emit(
                global,
                &io,
                "gadget verify-crossover",
                None,
                r.passed,
                &r,
                &summary,
            )
        }
        GadgetCmd::BuildGrid { h, out_dir } => {
            let gw = build_grid_with_gadgets(h)?;
            std::fs::create_dir_all(&out_dir)?;
            io.write(
                &out_dir.join(format!("grid{h}.graph")),
                &to_edge_list(&gw.graph),
            )?;
            io.write(
                &out_dir.join(format!("grid{h}.faces.json")),
                &(gw.faces.to_json() + "\n"),
            )?;
            io.write(
                &out_dir.join(format!("grid{h}.descriptor.json")),
                &(gw.descriptor_json() + "\n"),
            )?;
            let counts = serde_json::json!({
                "h": h,
                "vertices": gw.graph.n(),
                "edges": gw.graph.m(),
                "equations": gw.faces.len(),
                "gadget_copies": gw.gadgets.len(),
                "diagonal_edges": gw.diagonals.len(),
            });
            let summary = format!(
                "h = {h}: {} vertices, {} edges, {} equations, {} gadget copies\nwrote {} files to {}\n",
                gw.graph.n(),
                gw.graph.m(),
                gw.faces.len(),
                gw.gadgets.len(),
                io.outputs.len(),
                out_dir.display()
            );
            emit(
                global,
                &io,
                "gadget build-grid",
                None,
                true,
                counts,
                &summary,
            )
        }
        GadgetCmd::VerifyGrid { h } => {
            let gw = build_grid_with_gadgets(h)?;
            let r = verify_projection_limited(&gw, global.limits.grid_height)?;
            let summary = format!(
                "h = {h}: {} face vertices, {} projected points, {} target points\nset equality: {}, diagonals are products: {}\n{}\n",
                r.face_vertices,
                r.projected_points,
                r.target_points,
                r.set_equal,
                r.diagonals_are_products,
                if r.passed { "PASS" } else { "FAIL" }
            );
            emit(
                global,
                &io,
                "gadget verify-grid",
                None,
                r.passed,
                &r,
                &summary,
            )
        }
        GadgetCmd::Report { n, h } => {
            if n == 0 {
                return Err(Usage("n must be positive".into()).into());
            }
            let r = lower_bound_report(n, Some(h));
            let gm = show(r.geometric_mean_exact.as_deref().unwrap_or_default());
            let summary = format!(
                "dimension bound: {}\ncited bound 1.5^{h} = {}\ngeometric-mean bound: {} ≈ {}\n",
                r.dimension_bound,
                show(r.cited_bound.as_deref().unwrap_or_default()),
                if gm.is_empty() { "irrational" } else { gm },
                r.geometric_mean_decimal.clone().unwrap_or_default()
            );
            emit(global, &io, "gadget report", None, true, &r, &summary)
        }
    }
}
