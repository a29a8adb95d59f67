//! Vertex orderings with small weak r-coloring number.
//!
//! Greedy heuristics build an ordering one vertex at a time; when the
//! partial ordering can no longer be completed within the target bound, an
//! exact turbocharging routine repairs it. The [`driver`] runs the anytime
//! loop that keeps lowering the target.

pub mod bounds;
pub mod driver;
pub mod error;
pub mod graph;
pub mod heuristics;
pub mod merge;
pub mod oracle;
pub mod order;
pub mod rl;
pub mod search;
pub mod turbo_ic;

pub use driver::{optimize, RunConfig, RunResult, RunStats, Turbo};
pub use error::{Error, Result};
pub use graph::{DistanceTable, Graph, Vertex, UNREACHABLE};
pub use heuristics::Heuristic;
pub use order::{evaluate_full_ordering, Evaluation, OrderState, Side};
pub use search::{Deadline, TurboOutcome};
