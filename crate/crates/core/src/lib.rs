//! Differential maintenance of recursive graph queries.
//!
//! Queries are iterative frontier-expansion computations (shortest paths,
//! K-hop reachability, regular path queries, connected components,
//! PageRank). Engines keep each vertex's state per iteration and, after a
//! batch of edge updates, rerun only where the stored history says an
//! output may have changed.
//!
//! * [`engine::VdcEngine`] keeps full two-dimensional difference traces.
//! * [`engine::JodEngine`] keeps only the state collection, merged across
//!   versions, and rebuilds join inputs on demand. It can additionally
//!   drop stored differences under a [`dropping::DropPolicy`].
//! * [`baselines`] holds non-incremental reruns for comparison.

pub mod baselines;
pub mod diff;
pub mod dropping;
pub mod engine;
mod error;
pub mod graph;
pub mod hash;
pub mod query;

pub use error::{Error, Result};
