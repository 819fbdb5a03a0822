//! Clique transversals of 4-chordal graphs with at most `floor(2(n-1)/7)`
//! vertices, computed by a zloty-accounted rule engine over nice tree
//! decompositions, plus exact oracles and extremal generators.

pub mod cli;
pub mod decomp;
pub mod engine;
pub mod fuzz;
pub mod generators;
pub mod graph;
pub mod oracle;

pub use engine::{bound, solve, solve_with_mode, Mode, TransversalResult};
pub use graph::{Clique, Graph};
