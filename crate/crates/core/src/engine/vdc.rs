use super::{diff_finals, Counters, Maintainer, MemoryModel, MemoryReport, StateChange};
use crate::diff::{DiffSet, DiffTrace2D, JoinValue, Key, StateValue, Timestamp2D};
use crate::error::{Error, Result};
use crate::graph::{Graph, UpdateBatch};
use crate::query::{Link, QueryOperator};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Vanilla differential engine keeping full, unmerged 2-D traces of both the
/// Join collection J and the state collection D.
///
/// Each operator output at ⟨k, i⟩ is recorded as the difference between the
/// recomputed content and everything recorded strictly before ⟨k, i⟩.
/// Operators rerun where an input has a difference in the current version
/// (direct rule) and at the least upper bounds of current-version input
/// differences with older versions' differences at the same iteration.
pub struct VdcEngine {
    op: QueryOperator,
    j: DiffTrace2D<JoinValue>,
    d: DiffTrace2D<StateValue>,
    edge_entries: u64,
    first_version: u64,
    version: u64,
    vertex_count: usize,
    key_count: usize,
    max_iteration: u32,
    finals: Vec<StateValue>,
    counters: Counters,
    reruns: Option<Vec<(Key, u32)>>,
    writes: Vec<(Key, u32)>,
}

impl VdcEngine {
    /// Computes the first version column of `graph`.
    pub fn initial_run(graph: &Graph, op: QueryOperator) -> Result<Self> {
        op.validate(graph)?;
        let mut engine = VdcEngine {
            op,
            j: DiffTrace2D::new(),
            d: DiffTrace2D::new(),
            edge_entries: graph.edge_count() as u64,
            first_version: graph.version(),
            version: graph.version(),
            vertex_count: 0,
            key_count: 0,
            max_iteration: 0,
            finals: Vec::new(),
            counters: Counters::default(),
            reruns: None,
            writes: Vec::new(),
        };
        let reset: Vec<Key> = (0..engine.op.key_count(graph) as Key).collect();
        engine.run_version(graph, reset, Vec::new())?;
        Ok(engine)
    }

    pub fn record_reruns(&mut self, on: bool) {
        self.reruns = on.then(Vec::new);
    }

    /// Aggregate executions (key, iteration) logged since the last call.
    pub fn take_reruns(&mut self) -> Vec<(Key, u32)> {
        self.reruns.as_mut().map(std::mem::take).unwrap_or_default()
    }

    /// Aggregate executions that wrote a non-empty state difference,
    /// logged alongside [`Self::take_reruns`].
    pub fn take_writing_reruns(&mut self) -> Vec<(Key, u32)> {
        std::mem::take(&mut self.writes)
    }

    pub fn join_trace(&self) -> &DiffTrace2D<JoinValue> {
        &self.j
    }

    pub fn state_trace(&self) -> &DiffTrace2D<StateValue> {
        &self.d
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    /// Sorted dump of both traces, collections named `J` and `D`.
    pub fn dump(&self, key_name: impl Fn(Key) -> String) -> Vec<String> {
        let mut lines = self.j.dump("J", &key_name);
        lines.extend(self.d.dump("D", &key_name));
        lines.sort();
        lines
    }

    /// Content of D for `key` at t; always a single state once recorded.
    fn state_at(&self, key: Key, t: Timestamp2D) -> Result<StateValue> {
        let content = self.d.reassemble(key, t);
        let mut it = content.iter();
        match (it.next(), it.next()) {
            (Some(&(s, 1)), None) => Ok(s),
            _ => Err(Error::Internal(format!(
                "D content of key {key} at {t} is {content:?}, expected one state"
            ))),
        }
    }

    fn join_content(&self, graph: &Graph, v: Key, t: Timestamp2D, buf: &mut Vec<Link>) -> Result<DiffSet<JoinValue>> {
        let mut items = vec![JoinValue::Seed(self.op.seed(graph, v, t.iteration))];
        if t.iteration > 0 {
            self.op.dependencies(graph, v, buf);
            let below = Timestamp2D::new(t.version, t.iteration - 1);
            for link in buf.iter() {
                let st = self.state_at(link.from, below)?;
                if let Some(c) = self.op.propagate(graph, link, st) {
                    items.push(JoinValue::Contribution(c));
                }
            }
        }
        Ok(DiffSet::from_values(items))
    }

    fn count_write<T: Ord + Clone>(&mut self, delta: &DiffSet<T>) {
        self.counters.differences_written += delta.len() as u64;
        self.counters.differences_retracted += delta.iter().filter(|e| e.1 < 0).count() as u64;
    }

    fn run_version(&mut self, graph: &Graph, reset: Vec<Key>, links: Vec<(Key, Key)>) -> Result<Vec<Key>> {
        let k = self.version;
        let has_history = k > self.first_version;
        let (cap, truncating) = self.op.iteration_cap(graph);
        self.key_count = self.op.key_count(graph);
        self.vertex_count = graph.vertex_count();

        // upstream keys of each downstream key through edges of this batch,
        // which include deleted edges absent from the new graph
        let mut batch_deps: HashMap<Key, Vec<Key>> = HashMap::new();
        let mut join_direct: BTreeMap<u32, BTreeSet<Key>> = BTreeMap::new();
        for &(src, dst) in &links {
            batch_deps.entry(dst).or_default().push(src);
            join_direct.entry(0).or_default().insert(dst);
        }
        for &v in &reset {
            join_direct.entry(0).or_default().insert(v);
            if self.op.seed_varies() && cap >= 1 {
                join_direct.entry(1).or_default().insert(v);
            }
        }

        let mut f_join: HashMap<Key, u32> = HashMap::new();
        let mut f_min: HashMap<Key, u32> = HashMap::new();
        let mut touched: BTreeSet<Key> = BTreeSet::new();
        let mut buf = Vec::new();
        let mut last_active = 0;
        let mut i = 0u32;
        loop {
            let t = Timestamp2D::new(k, i);
            let mut join_keys = join_direct.remove(&i).unwrap_or_default();
            for &v in &join_keys {
                f_join.entry(v).or_insert(i);
            }
            if has_history && i > 0 {
                for (&v, &f) in &f_join {
                    if f >= i || join_keys.contains(&v) {
                        continue;
                    }
                    self.op.dependencies(graph, v, &mut buf);
                    let extra = batch_deps.get(&v).map_or(&[][..], Vec::as_slice);
                    let triggered = buf
                        .iter()
                        .map(|l| l.from)
                        .chain(extra.iter().copied())
                        .any(|w| self.d.has_diff_before_version(w, i - 1, k));
                    if triggered {
                        join_keys.insert(v);
                    }
                }
            }

            let mut min_keys: BTreeSet<Key> = BTreeSet::new();
            for &v in &join_keys {
                self.counters.join_reconstructions += 1;
                let content = self.join_content(graph, v, t, &mut buf)?;
                let delta = self.j.record_delta(v, t, &content);
                self.count_write(&delta);
                if !delta.is_empty() {
                    min_keys.insert(v);
                    f_min.entry(v).or_insert(i);
                }
            }
            if has_history {
                for (&v, &f) in &f_min {
                    if f < i && self.j.has_diff_before_version(v, i, k) {
                        min_keys.insert(v);
                    }
                }
            }

            for &v in &min_keys {
                self.counters.aggregate_reruns += 1;
                if let Some(log) = self.reruns.as_mut() {
                    log.push((v, i));
                }
                let content = self.j.reassemble(v, t);
                if content.iter().any(|e| e.1 < 0) {
                    return Err(Error::Internal(format!(
                        "J content of key {v} at {t} has negative multiplicity"
                    )));
                }
                let value = self.op.aggregate_join(&content.expand())?;
                let delta = self.d.record_delta(v, t, &DiffSet::singleton(value, 1));
                self.count_write(&delta);
                if !delta.is_empty() {
                    if self.reruns.is_some() {
                        self.writes.push((v, i));
                    }
                    touched.insert(v);
                    let mut down = Vec::new();
                    self.op.dependents(graph, v, &mut down);
                    join_direct.entry(i + 1).or_default().extend(down);
                }
            }
            if !join_keys.is_empty() || !min_keys.is_empty() {
                last_active = i;
            }

            let pending = join_direct.get(&(i + 1)).is_some_and(|s| !s.is_empty());
            if i >= cap {
                if pending && !truncating {
                    return Err(Error::NonTermination { cap });
                }
                break;
            }
            let old_rows_ahead = has_history
                && (i < self.d.row_count()
                    || i + 1 < self.j.row_count());
            if !pending && !old_rows_ahead {
                break;
            }
            i += 1;
        }
        self.max_iteration = self.max_iteration.max(last_active).max(1);

        self.finals.resize(self.key_count, StateValue::Infinite);
        let end = Timestamp2D::new(k, u32::MAX);
        for &v in &touched {
            self.finals[v as usize] = self.state_at(v, end)?;
        }
        Ok(touched.into_iter().collect())
    }
}

impl Maintainer for VdcEngine {
    fn maintain(&mut self, graph: &Graph, batch: &UpdateBatch) -> Result<Vec<StateChange>> {
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
        self.edge_entries += batch.entries.len() as u64;
        self.version = batch.version;
        let touched = self.run_version(graph, reset, links)?;
        Ok(diff_finals(&before, &self.finals, &touched))
    }

    fn final_states(&self) -> &[StateValue] {
        &self.finals
    }

    fn counters(&self) -> Counters {
        self.counters
    }

    fn memory(&self, _model: &MemoryModel) -> MemoryReport {
        MemoryReport {
            edge_entries: self.edge_entries,
            join_entries: self.j.entry_count() as u64,
            state_entries: self.d.entry_count() as u64,
            store_bytes: 0,
        }
    }

    fn max_iteration(&self) -> u32 {
        self.max_iteration
    }
}
