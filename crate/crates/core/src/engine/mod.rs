//! Maintenance drivers: the vanilla 2-D engine and the join-on-demand engine.

mod jod;
mod vdc;

pub use jod::{JodEngine, RowObserver};
pub use vdc::VdcEngine;

use crate::diff::{Key, StateValue};
use crate::error::Result;
use crate::graph::{Graph, UpdateBatch};
use std::ops::Sub;

/// Instrumentation, cumulative since engine creation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub aggregate_reruns: u64,
    pub join_reconstructions: u64,
    pub differences_written: u64,
    pub differences_retracted: u64,
    pub recomputations: u64,
    pub drops: u64,
}

impl Sub for Counters {
    type Output = Counters;

    fn sub(self, rhs: Counters) -> Counters {
        Counters {
            aggregate_reruns: self.aggregate_reruns - rhs.aggregate_reruns,
            join_reconstructions: self.join_reconstructions - rhs.join_reconstructions,
            differences_written: self.differences_written - rhs.differences_written,
            differences_retracted: self.differences_retracted - rhs.differences_retracted,
            recomputations: self.recomputations - rhs.recomputations,
            drops: self.drops - rhs.drops,
        }
    }
}

/// Byte costs of one stored difference: `vt` bytes identify the
/// (vertex, iteration) pair and `state` bytes hold the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryModel {
    pub vt_bytes: u64,
    pub state_bytes: u64,
}

impl Default for MemoryModel {
    fn default() -> Self {
        MemoryModel {
            vt_bytes: 8,
            state_bytes: 8,
        }
    }
}

/// Stored-difference counts per collection plus drop-store footprint.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MemoryReport {
    pub edge_entries: u64,
    pub join_entries: u64,
    pub state_entries: u64,
    pub store_bytes: u64,
}

impl MemoryReport {
    pub fn total_entries(&self) -> u64 {
        self.join_entries + self.state_entries
    }

    pub fn difference_bytes(&self, model: &MemoryModel) -> u64 {
        self.total_entries() * (model.vt_bytes + model.state_bytes)
    }

    pub fn total_bytes(&self, model: &MemoryModel) -> u64 {
        self.difference_bytes(model) + self.store_bytes
    }
}

/// A change to a converged state: `(key, state, +1)` for the new value and
/// `(key, state, -1)` for the retracted one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct StateChange {
    pub key: Key,
    pub state: StateValue,
    pub sign: i8,
}

pub(crate) fn diff_finals(before: &[StateValue], after: &[StateValue], keys: &[Key]) -> Vec<StateChange> {
    let mut out = Vec::new();
    for &k in keys {
        let old = before.get(k as usize);
        let new = after[k as usize];
        if old != Some(&new) {
            if let Some(&o) = old {
                out.push(StateChange {
                    key: k,
                    state: o,
                    sign: -1,
                });
            }
            out.push(StateChange {
                key: k,
                state: new,
                sign: 1,
            });
        }
    }
    out.sort();
    out
}

/// Common surface of the incremental engines, used by the harness.
pub trait Maintainer: Send {
    fn maintain(&mut self, graph: &Graph, batch: &UpdateBatch) -> Result<Vec<StateChange>>;
    fn final_states(&self) -> &[StateValue];
    fn counters(&self) -> Counters;
    fn memory(&self, model: &MemoryModel) -> MemoryReport;
    fn max_iteration(&self) -> u32;
}
