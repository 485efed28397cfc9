//! Difference sets, timestamps, unmerged and merged traces, and the frontier.

mod diffset;
mod frontier;
mod merged;
mod state;
mod timestamp;
mod trace2d;

pub use diffset::{diffset_sum, DiffSet};
pub use frontier::Frontier;
pub use merged::{elide_negatives, MergedTrace};
pub use state::{JoinValue, StateValue};
pub use timestamp::Timestamp2D;
pub use trace2d::DiffTrace2D;

/// Dataflow key: a vertex id, or a packed (vertex, automaton state) pair.
pub type Key = u32;
