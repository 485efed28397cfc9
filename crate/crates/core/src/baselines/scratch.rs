use crate::diff::{Key, StateValue};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::query::QueryOperator;
use std::collections::BTreeSet;

/// Work done by one scratch run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScratchStats {
    /// Last iteration evaluated.
    pub iterations: u32,
    /// Aggregate evaluations over all iterations.
    pub evaluations: u64,
    /// Distinct keys whose state was pushed to their dependents.
    pub expanded: u64,
}

/// Runs the operator to completion on `graph` with a frontier of changed
/// keys, keeping no state between calls.
pub fn scratch_run(graph: &Graph, op: &QueryOperator) -> Result<(Vec<StateValue>, ScratchStats)> {
    op.validate(graph)?;
    let n = op.key_count(graph);
    let (cap, truncating) = op.iteration_cap(graph);
    let mut states: Vec<StateValue> = (0..n as Key).map(|k| op.init(graph, k)).collect();
    let mut stats = ScratchStats::default();
    let mut expanded = vec![false; n];

    let mut down = Vec::new();
    let mut candidates: BTreeSet<Key> = BTreeSet::new();
    if op.seed_varies() {
        candidates.extend(0..n as Key);
    }
    for k in 0..n as Key {
        if !op.is_inert(states[k as usize]) {
            expanded[k as usize] = true;
            op.dependents(graph, k, &mut down);
            candidates.extend(down.iter().copied());
        }
    }

    let mut links = Vec::new();
    let mut contributions = Vec::new();
    let mut i = 0u32;
    while !candidates.is_empty() {
        if i >= cap {
            if truncating {
                break;
            }
            return Err(Error::NonTermination { cap });
        }
        i += 1;
        let mut updates = Vec::new();
        for &v in &candidates {
            stats.evaluations += 1;
            op.dependencies(graph, v, &mut links);
            contributions.clear();
            contributions.extend(
                links
                    .iter()
                    .filter_map(|l| op.propagate(graph, l, states[l.from as usize])),
            );
            let new = op.combine(op.seed(graph, v, i), &mut contributions);
            if new != states[v as usize] {
                updates.push((v, new));
            }
        }
        candidates.clear();
        for (v, new) in updates {
            states[v as usize] = new;
            expanded[v as usize] = true;
            op.dependents(graph, v, &mut down);
            candidates.extend(down.iter().copied());
        }
        stats.iterations = i;
    }
    stats.expanded = expanded.iter().filter(|&&e| e).count() as u64;
    Ok((states, stats))
}
