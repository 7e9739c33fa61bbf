//! Exact-arithmetic toolkit for the correlation polytope `COR(G)`:
//! tree-decomposition based extended formulations, exact MAP inference,
//! and the grid-with-gadgets face construction.

pub mod corpus;
pub mod error;
pub mod extform;
pub mod gadgets;
pub mod graph;
pub mod lp;
pub mod polytope;
pub mod rational;
pub mod treewidth;

pub use error::{Error, Result};
pub use graph::{Graph, VariableId};
pub use rational::Rational;
