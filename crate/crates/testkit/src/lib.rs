//! Reference oracles, random instance generators, and the hand-checked
//! running example used across the dcgraph test suites.
//!
//! Nothing here shares code with the engines beyond the graph type: the
//! oracles are textbook algorithms written directly against adjacency lists.

pub mod fixtures;
pub mod gen;
pub mod harness;
pub mod oracle;

pub use fixtures::*;
pub use gen::*;
pub use harness::*;
pub use oracle::*;
