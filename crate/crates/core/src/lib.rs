//! Edge-colored complete and complete-bipartite graphs: monochromatic and
//! rainbow pattern detection, explicit lower-bound colorings, structural
//! certificates for rainbow-path-free colorings, exhaustive search for small
//! Ramsey-type numbers, and closed-form bound evaluation.

pub mod bits;
pub mod colored;
pub mod construct;
pub mod graph;
pub mod oracle;
pub mod search;
pub mod structure;
pub mod table;

pub use colored::{ColoredHost, Embedding, Shape};
pub use graph::{GraphError, SimpleGraph};
pub use search::{Budget, SearchOptions, SearchOutcome, SearchProblem, SearchStatus};
pub use table::KnownValuesTable;
