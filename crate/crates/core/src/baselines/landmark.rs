use crate::diff::StateValue;
use crate::engine::{JodEngine, Maintainer, MemoryModel, MemoryReport};
use crate::error::{Error, Result};
use crate::graph::{Graph, UpdateBatch, VertexId};
use crate::query::{Direction, QueryOperator};
use std::collections::BTreeMap;

/// Picks the `count` vertices of highest total degree, smaller id first on ties.
pub fn landmark_select(graph: &Graph, count: usize) -> Result<Vec<VertexId>> {
    if count > graph.vertex_count() {
        return Err(Error::Selection(format!(
            "cannot select {count} landmarks from {} vertices",
            graph.vertex_count()
        )));
    }
    let mut all: Vec<VertexId> = graph.vertices().collect();
    all.sort_by_key(|&v| (std::cmp::Reverse(graph.total_degree(v)), v.0));
    all.truncate(count);
    Ok(all)
}

/// Shortest distances from and to one landmark, each side kept current by
/// its own join-on-demand engine.
pub struct LandmarkIndex {
    landmark: VertexId,
    forward: JodEngine,
    backward: JodEngine,
}

impl LandmarkIndex {
    pub fn build(graph: &Graph, landmark: VertexId) -> Result<Self> {
        Ok(LandmarkIndex {
            landmark,
            forward: JodEngine::initial_run(graph, QueryOperator::sssp(landmark, Direction::Forward))?,
            backward: JodEngine::initial_run(graph, QueryOperator::sssp(landmark, Direction::Backward))?,
        })
    }

    pub fn build_all(graph: &Graph, landmarks: &[VertexId]) -> Result<Vec<Self>> {
        landmarks.iter().map(|&l| LandmarkIndex::build(graph, l)).collect()
    }

    /// Brings both sides to the version of `graph`, which already has `batch` applied.
    pub fn maintain(&mut self, graph: &Graph, batch: &UpdateBatch) -> Result<()> {
        self.forward.maintain(graph, batch)?;
        self.backward.maintain(graph, batch)?;
        Ok(())
    }

    pub fn landmark(&self) -> VertexId {
        self.landmark
    }

    /// Distance from the landmark to `v`.
    pub fn from_landmark(&self, v: VertexId) -> Option<u64> {
        self.forward.final_states().get(v.index()).and_then(|s| s.as_dist())
    }

    /// Distance from `v` to the landmark.
    pub fn to_landmark(&self, v: VertexId) -> Option<u64> {
        self.backward.final_states().get(v.index()).and_then(|s| s.as_dist())
    }

    pub fn forward_distances(&self) -> &[StateValue] {
        self.forward.final_states()
    }

    pub fn backward_distances(&self) -> &[StateValue] {
        self.backward.final_states()
    }

    pub fn memory(&self, model: &MemoryModel) -> MemoryReport {
        let f = self.forward.memory(model);
        let b = self.backward.memory(model);
        MemoryReport {
            edge_entries: f.edge_entries + b.edge_entries,
            join_entries: f.join_entries + b.join_entries,
            state_entries: f.state_entries + b.state_entries,
            store_bytes: f.store_bytes + b.store_bytes,
        }
    }
}

/// Upper bound on dist(s, d) through the best landmark; `None` means no
/// landmark connects them.
fn upper_bound(indices: &[LandmarkIndex], s: VertexId, d: VertexId) -> Option<u64> {
    indices
        .iter()
        .filter_map(|ix| Some(ix.to_landmark(s)? + ix.from_landmark(d)?))
        .min()
}

/// Triangle-inequality lower bound on dist(v, d). Legs that are unreachable
/// give no information.
fn lower_bound(indices: &[LandmarkIndex], v: VertexId, d: VertexId) -> u64 {
    let mut best = 0;
    for ix in indices {
        if let (Some(a), Some(b)) = (ix.to_landmark(v), ix.to_landmark(d)) {
            best = best.max(a.saturating_sub(b));
        }
        if let (Some(a), Some(b)) = (ix.from_landmark(d), ix.from_landmark(v)) {
            best = best.max(a.saturating_sub(b));
        }
    }
    best
}

/// Lower and upper bounds on the distance from `s` to `d`.
pub fn landmark_bounds(indices: &[LandmarkIndex], s: VertexId, d: VertexId) -> (u64, StateValue) {
    let upper = upper_bound(indices, s, d).map_or(StateValue::Infinite, StateValue::Dist);
    (lower_bound(indices, s, d), upper)
}

/// Work done by one point-to-point search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Distinct vertices whose out-edges were relaxed.
    pub expanded: u64,
    /// Expansions skipped because the bounds ruled the vertex out.
    pub pruned: u64,
    pub rounds: u32,
}

/// Round-based label propagation from `s`, skipping the expansion of any
/// vertex whose tentative distance plus its lower bound to `d` exceeds the
/// upper bound for the pair. Pass no indices for the unpruned search.
pub fn scratch_landmark_spsp(
    graph: &Graph,
    indices: &[LandmarkIndex],
    s: VertexId,
    d: VertexId,
) -> Result<(StateValue, SearchStats)> {
    let n = graph.vertex_count();
    if s.index() >= n || d.index() >= n {
        return Err(Error::QueryCompile(format!("pair ({s}, {d}) outside the graph")));
    }
    let upper = upper_bound(indices, s, d);
    let mut dist: Vec<Option<u64>> = vec![None; n];
    let mut expanded = vec![false; n];
    let mut lower_cache: BTreeMap<u32, u64> = BTreeMap::new();
    let mut stats = SearchStats::default();
    dist[s.index()] = Some(0);
    let mut frontier = vec![s];
    while !frontier.is_empty() {
        if stats.rounds as usize > n {
            return Err(Error::NonTermination { cap: n as u32 });
        }
        stats.rounds += 1;
        let mut next = Vec::new();
        for v in frontier {
            let k = dist[v.index()].expect("frontier vertices are reached");
            if let Some(u) = upper {
                let lb = *lower_cache.entry(v.0).or_insert_with(|| lower_bound(indices, v, d));
                if k.saturating_add(lb) > u {
                    stats.pruned += 1;
                    continue;
                }
            }
            expanded[v.index()] = true;
            for e in graph.out_edges(v) {
                let cand = k + e.weight;
                let slot = &mut dist[e.vertex.index()];
                if slot.is_none_or(|old| cand < old) {
                    *slot = Some(cand);
                    next.push(e.vertex);
                }
            }
        }
        next.sort_unstable_by_key(|v| v.0);
        next.dedup();
        frontier = next;
    }
    stats.expanded = expanded.iter().filter(|&&e| e).count() as u64;
    Ok((dist[d.index()].map_or(StateValue::Infinite, StateValue::Dist), stats))
}
