use super::{diff_finals, Counters, Maintainer, MemoryModel, MemoryReport, StateChange};
use crate::diff::{Frontier, Key, MergedTrace, StateValue};
use crate::dropping::{DropConfig, DroppedStore, ResolvedPolicy};
use crate::error::{Error, Result};
use crate::graph::{Graph, UpdateBatch};
use crate::query::{Link, QueryOperator};
use std::collections::{HashMap, HashSet};

/// Callback invoked after each iteration row finishes during maintenance.
pub type RowObserver<'a> = dyn FnMut(u32, &MergedTrace) + 'a;

struct Drops {
    policy: ResolvedPolicy,
    store: DroppedStore,
}

/// What a key held at the row about to be rewritten.
#[derive(Clone, Copy)]
enum Prior {
    Absent,
    Unknown,
    Known(StateValue),
}

/// Join-on-demand engine over a merged, negative-elided state trace.
///
/// Join collections are never stored. Each aggregate rerun rebuilds the
/// contribution multiset from the dependencies' states one iteration earlier.
/// Rows are rewritten in place, in increasing iteration order, so while row
/// `i` is processed every row below it already holds the new version and
/// every row above it still holds the previous one. That split is what the
/// scheduling rules inspect.
pub struct JodEngine {
    op: QueryOperator,
    trace: MergedTrace,
    drops: Option<Drops>,
    version: u64,
    vertex_count: usize,
    key_count: usize,
    max_iteration: u32,
    finals: Vec<StateValue>,
    counters: Counters,
    reruns: Option<Vec<(Key, u32)>>,
    memo: HashMap<(Key, u32), StateValue>,
    // Deepest legal recomputation chain for the reads in progress.
    depth_limit: u32,
}

struct Schedule {
    frontier: Frontier,
    expanded: HashSet<Key>,
    cap: u32,
    truncating: bool,
    // Extent of the previous version. Drop records outside it can only be
    // Bloom false positives.
    old_keys: usize,
    old_rows: u32,
}

impl Schedule {
    fn push(&mut self, key: Key, iteration: u32, direct: bool) -> Result<()> {
        if iteration > self.cap {
            if direct && !self.truncating {
                return Err(Error::NonTermination { cap: self.cap });
            }
            return Ok(());
        }
        self.frontier.schedule(key, iteration);
        Ok(())
    }
}

impl JodEngine {
    fn empty(op: QueryOperator, drops: Option<Drops>) -> Self {
        JodEngine {
            op,
            trace: MergedTrace::new(),
            drops,
            version: 0,
            vertex_count: 0,
            key_count: 0,
            max_iteration: 0,
            finals: Vec::new(),
            counters: Counters::default(),
            reruns: None,
            memo: HashMap::new(),
            depth_limit: 0,
        }
    }

    /// Computes version 0 of `graph` from nothing.
    pub fn initial_run(graph: &Graph, op: QueryOperator) -> Result<Self> {
        Self::initial_run_observed(graph, op, None, &mut |_, _| {})
    }

    pub fn initial_run_with_drops(graph: &Graph, op: QueryOperator, drops: DropConfig) -> Result<Self> {
        Self::initial_run_observed(graph, op, Some(drops), &mut |_, _| {})
    }

    pub fn initial_run_observed(
        graph: &Graph,
        op: QueryOperator,
        drops: Option<DropConfig>,
        observer: &mut RowObserver<'_>,
    ) -> Result<Self> {
        op.validate(graph)?;
        let drops = drops.map(|cfg| Drops {
            policy: cfg.policy.resolve(graph),
            store: cfg.store.build(),
        });
        let mut engine = JodEngine::empty(op, drops);
        engine.version = graph.version();
        let reset: Vec<Key> = (0..engine.op.key_count(graph) as Key).collect();
        engine.run_version(graph, reset, Vec::new(), observer)?;
        Ok(engine)
    }

    /// Turns on logging of (key, iteration) aggregate executions.
    pub fn record_reruns(&mut self, on: bool) {
        self.reruns = on.then(Vec::new);
    }

    /// Executions logged since the last call.
    pub fn take_reruns(&mut self) -> Vec<(Key, u32)> {
        self.reruns.as_mut().map(std::mem::take).unwrap_or_default()
    }

    pub fn trace(&self) -> &MergedTrace {
        &self.trace
    }

    pub fn operator(&self) -> &QueryOperator {
        &self.op
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn dropped_store(&self) -> Option<&DroppedStore> {
        self.drops.as_ref().map(|d| &d.store)
    }

    pub fn maintain_observed(
        &mut self,
        graph: &Graph,
        batch: &UpdateBatch,
        observer: &mut RowObserver<'_>,
    ) -> Result<Vec<StateChange>> {
        if batch.version != self.version + 1 || graph.version() != batch.version {
            return Err(Error::Sequencing {
                expected: self.version + 1,
                found: batch.version,
            });
        }
        let before = self.finals.clone();
        let new_keys = self.op.key_count(graph);
        let reset: Vec<Key> = if self.op.depends_on_vertex_count() && graph.vertex_count() != self.vertex_count {
            (0..new_keys as Key).collect()
        } else {
            (self.key_count as Key..new_keys as Key).collect()
        };
        let mut links: Vec<(Key, Key)> = batch
            .entries
            .iter()
            .flat_map(|u| self.op.edge_links(graph, &u.edge))
            .collect();
        links.sort_unstable();
        links.dedup();
        self.version = batch.version;
        let touched = self.run_version(graph, reset, links, observer)?;
        Ok(diff_finals(&before, &self.finals, &touched))
    }

    /// The state of `key` at iteration `i`, recomputing dropped values.
    pub fn read_state(&mut self, graph: &Graph, key: Key, i: u32) -> Result<StateValue> {
        self.depth_limit = i;
        let s = self.read(graph, key, i, 0);
        self.memo.clear();
        s
    }

    fn run_version(
        &mut self,
        graph: &Graph,
        reset: Vec<Key>,
        links: Vec<(Key, Key)>,
        observer: &mut RowObserver<'_>,
    ) -> Result<Vec<Key>> {
        let (cap, truncating) = self.op.iteration_cap(graph);
        self.depth_limit = cap.max(self.max_iteration).saturating_add(1);
        let old_keys = self.key_count;
        self.key_count = self.op.key_count(graph);
        self.vertex_count = graph.vertex_count();
        self.trace.ensure_keys(self.key_count);
        let mut s = Schedule {
            frontier: Frontier::new(),
            expanded: HashSet::new(),
            cap,
            truncating,
            old_keys,
            old_rows: self.max_iteration,
        };
        for &k in &reset {
            s.push(k, 0, true)?;
            if self.op.seed_varies() {
                s.push(k, 1, true)?;
            }
        }
        for &(src, dst) in &links {
            if (dst as usize) >= old_keys {
                continue;
            }
            // A source that was inert everywhere contributed nothing before
            // the batch; if it changes now, the direct rule reaches dst.
            let active = if (src as usize) < old_keys {
                self.first_active_iteration(src)
            } else {
                None
            };
            if let Some(t) = active {
                s.push(dst, 0, false)?;
                s.push(dst, t + 1, false)?;
            }
        }

        let mut touched = Vec::new();
        let mut last_row = 0;
        let mut buf = Vec::new();
        while let Some((i, keys)) = s.frontier.drain_next() {
            for v in keys {
                if s.expanded.insert(v) {
                    touched.push(v);
                    self.expand_upper_bounds(graph, &mut s, v, i, &mut buf)?;
                }
                self.rerun(graph, &mut s, v, i)?;
            }
            last_row = i;
            observer(i, &self.trace);
        }
        self.max_iteration = self.max_iteration.max(last_row).max(1);

        self.finals.resize(self.key_count, StateValue::Infinite);
        touched.sort_unstable();
        for &v in &touched {
            self.finals[v as usize] = self.read(graph, v, self.max_iteration, 0)?;
        }
        self.memo.clear();
        Ok(touched)
    }

    /// First iteration at which `key`'s previous-version state may be non-inert.
    fn first_active_iteration(&self, key: Key) -> Option<u32> {
        let entries = self.trace.entries(key);
        let (_, init) = *entries.first()?;
        if !self.op.is_inert(init) {
            return Some(0);
        }
        let stored = entries.get(1).map(|e| e.0);
        let dropped = self.drops.as_ref().and_then(|d| {
            d.store
                .iterations_in(key, 1..=self.max_iteration)
                .first()
                .copied()
        });
        match (stored, dropped) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Schedules `v` wherever its previous-version state, or that of one of
    /// its dependencies one row earlier, changed above row `i`.
    fn expand_upper_bounds(
        &self,
        graph: &Graph,
        s: &mut Schedule,
        v: Key,
        i: u32,
        buf: &mut Vec<Link>,
    ) -> Result<()> {
        let hi = self.max_iteration;
        for &(it, _) in self.trace.entries_after(v, i) {
            s.push(v, it, false)?;
        }
        if let Some(d) = &self.drops {
            for it in d.store.iterations_in(v, i + 1..=hi) {
                s.push(v, it, false)?;
            }
        }
        self.op.dependencies(graph, v, buf);
        for link in buf.iter() {
            let w = link.from;
            let entries = self.trace.entries(w);
            let from = entries.partition_point(|e| e.0 < i);
            for &(e, st) in &entries[from..] {
                if e == 0 && self.op.is_inert(st) {
                    continue;
                }
                s.push(v, e + 1, false)?;
            }
            if let Some(d) = &self.drops {
                for e in d.store.iterations_in(w, i..=hi) {
                    s.push(v, e + 1, false)?;
                }
            }
        }
        Ok(())
    }

    fn rerun(&mut self, graph: &Graph, s: &mut Schedule, v: Key, i: u32) -> Result<()> {
        self.counters.aggregate_reruns += 1;
        if let Some(log) = self.reruns.as_mut() {
            log.push((v, i));
        }
        let new = if i == 0 {
            self.op.init(graph, v)
        } else {
            self.counters.join_reconstructions += 1;
            self.aggregate_at(graph, v, i, 0)?
        };

        let prev = if i == 0 {
            None
        } else {
            Some(self.read(graph, v, i - 1, 0)?)
        };
        // With no entry at row i the old state there equals the state one row
        // down, so only a genuine drop record leaves the prior unknown.
        let prior = if let Some(st) = self.trace.stored_at(v, i) {
            Prior::Known(st)
        } else if let Some(p) = prev {
            if (v as usize) < s.old_keys
                && i <= s.old_rows
                && self.drops.as_ref().is_some_and(|d| d.store.contains(v, i))
            {
                Prior::Unknown
            } else {
                Prior::Known(p)
            }
        } else {
            Prior::Absent
        };

        if prev == Some(new) {
            if self.trace.remove(v, i) {
                self.counters.differences_retracted += 1;
            }
            if let Some(d) = self.drops.as_mut() {
                d.store.forget(v, i);
            }
        } else if i > 0 && self.drop_decision(graph, v, i) {
            if self.trace.remove(v, i) {
                self.counters.differences_retracted += 1;
            }
            let d = self.drops.as_mut().expect("drop decision implies a store");
            d.store.record(v, i);
            self.counters.drops += 1;
        } else {
            if self.trace.set(v, i, new) {
                self.counters.differences_retracted += 1;
            }
            self.counters.differences_written += 1;
            if let Some(d) = self.drops.as_mut() {
                d.store.forget(v, i);
            }
        }

        let (changed, both_inert) = match prior {
            Prior::Absent => (true, self.op.is_inert(new)),
            Prior::Unknown => (true, false),
            Prior::Known(r) => (r != new, self.op.is_inert(r) && self.op.is_inert(new)),
        };
        if changed && !both_inert {
            let mut deps = Vec::new();
            self.op.dependents(graph, v, &mut deps);
            for u in deps {
                s.push(u, i + 1, true)?;
            }
        }
        Ok(())
    }

    fn drop_decision(&self, graph: &Graph, v: Key, i: u32) -> bool {
        let Some(d) = &self.drops else {
            return false;
        };
        let degree = d.policy.degree_kind().of(graph, self.op.vertex_of(v));
        d.policy.should_drop(v, degree, i, self.version)
    }

    /// Rebuilds `v`'s contribution multiset from row `i - 1` and aggregates.
    fn aggregate_at(&mut self, graph: &Graph, v: Key, i: u32, depth: u32) -> Result<StateValue> {
        let mut deps = Vec::new();
        self.op.dependencies(graph, v, &mut deps);
        let mut contributions = Vec::with_capacity(deps.len());
        for link in &deps {
            let st = self.read(graph, link.from, i - 1, depth)?;
            if let Some(c) = self.op.propagate(graph, link, st) {
                contributions.push(c);
            }
        }
        let seed = self.op.seed(graph, v, i);
        Ok(self.op.combine(seed, &mut contributions))
    }

    /// State of `key` at row `i`: the latest stored entry, unless a later
    /// drop record shadows it, in which case the dropped value is recomputed
    /// from the row below (recursively, memoized per batch).
    fn read(&mut self, graph: &Graph, key: Key, i: u32, depth: u32) -> Result<StateValue> {
        let (g, st) = self
            .trace
            .latest_at_or_before(key, i)
            .ok_or_else(|| Error::Internal(format!("key {key} has no state at or before {i}")))?;
        let Some(drops) = &self.drops else {
            return Ok(st);
        };
        let Some(d) = drops.store.latest_in(key, g + 1..=i) else {
            return Ok(st);
        };
        if let Some(&cached) = self.memo.get(&(key, d)) {
            return Ok(cached);
        }
        // Each level reads a strictly lower row, so a chain longer than the
        // highest readable row means the trace is corrupt.
        if depth > self.depth_limit {
            return Err(Error::Internal(format!(
                "recomputation of key {key} recursed {depth} levels"
            )));
        }
        self.counters.recomputations += 1;
        let value = self.aggregate_at(graph, key, d, depth + 1)?;
        self.memo.insert((key, d), value);
        Ok(value)
    }
}

impl Maintainer for JodEngine {
    fn maintain(&mut self, graph: &Graph, batch: &UpdateBatch) -> Result<Vec<StateChange>> {
        self.maintain_observed(graph, batch, &mut |_, _| {})
    }

    fn final_states(&self) -> &[StateValue] {
        &self.finals
    }

    fn counters(&self) -> Counters {
        self.counters
    }

    fn memory(&self, model: &MemoryModel) -> MemoryReport {
        MemoryReport {
            edge_entries: 0,
            join_entries: 0,
            state_entries: self.trace.entry_count() as u64,
            store_bytes: self
                .drops
                .as_ref()
                .map_or(0, |d| d.store.memory_footprint(model.vt_bytes)),
        }
    }

    fn max_iteration(&self) -> u32 {
        self.max_iteration
    }
}
