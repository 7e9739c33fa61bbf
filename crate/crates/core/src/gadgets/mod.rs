//! The crossover gadget, its graph replacement, the grid with gadgets and
//! the face of its correlation polytope that projects onto `COR(K_{h,h})`.

mod bounds;
mod crossover;
mod grid;

pub use bounds::{lower_bound_report, planarity_necessary_check, LowerBoundReport};
pub use crossover::{
    crossover_clause_table, replace_clauses, replace_clauses_prefixed, verify_crossover,
    verify_gadget, Clause, CrossoverGadget, CrossoverReport, Literal, PatternCount, ReplacedGadget,
    COMPLETIONS_PER_PATTERN, PATTERN_COUNT_CAP, ROLES,
};
pub use grid::{
    build_grid_with_gadgets, verify_projection, verify_projection_limited, GridWithGadgets,
    ProjectionReport, EXHAUSTIVE_HEIGHT_LIMIT,
};
