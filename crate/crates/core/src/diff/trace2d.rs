use super::{diffset_sum, DiffSet, Key, Timestamp2D};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Display;

/// Unmerged difference trace of one collection over 2-D timestamps.
///
/// Per key, entries are ordered by (iteration, version) so that reassembly at
/// ⟨k, i⟩ scans a prefix. A row index remembers which keys ever held a
/// difference at a given iteration.
#[derive(Debug, Clone)]
pub struct DiffTrace2D<T> {
    per_key: HashMap<Key, BTreeMap<(u32, u64), DiffSet<T>>>,
    rows: Vec<HashSet<Key>>,
}

impl<T> Default for DiffTrace2D<T> {
    fn default() -> Self {
        DiffTrace2D {
            per_key: HashMap::new(),
            rows: Vec::new(),
        }
    }
}

impl<T: Ord + Clone> DiffTrace2D<T> {
    pub fn new() -> Self {
        DiffTrace2D::default()
    }

    /// Σ_{s ≤ t} δ^key_s.
    pub fn reassemble(&self, key: Key, t: Timestamp2D) -> DiffSet<T> {
        self.sum_matching(key, t, |s| s <= t)
    }

    /// Σ_{s < t} δ^key_s, the prior content used when recording a delta at t.
    pub fn reassemble_before(&self, key: Key, t: Timestamp2D) -> DiffSet<T> {
        self.sum_matching(key, t, |s| s < t)
    }

    fn sum_matching(
        &self,
        key: Key,
        t: Timestamp2D,
        keep: impl Fn(Timestamp2D) -> bool,
    ) -> DiffSet<T> {
        let Some(map) = self.per_key.get(&key) else {
            return DiffSet::new();
        };
        diffset_sum(
            map.range(..=(t.iteration, u64::MAX))
                .filter(|(&(i, k), _)| keep(Timestamp2D::new(k, i)))
                .map(|(_, d)| d),
        )
    }

    /// Stores δ = `content` − (content strictly before t) at t and returns δ.
    /// An empty δ leaves the trace unchanged.
    pub fn record_delta(&mut self, key: Key, t: Timestamp2D, content: &DiffSet<T>) -> DiffSet<T> {
        let delta = content.minus(&self.reassemble_before(key, t));
        let map = self.per_key.entry(key).or_default();
        if delta.is_empty() {
            map.remove(&(t.iteration, t.version));
        } else {
            map.insert((t.iteration, t.version), delta.clone());
            let row = t.iteration as usize;
            if self.rows.len() <= row {
                self.rows.resize_with(row + 1, HashSet::new);
            }
            self.rows[row].insert(key);
        }
        delta
    }

    pub fn diff_at(&self, key: Key, t: Timestamp2D) -> Option<&DiffSet<T>> {
        self.per_key.get(&key)?.get(&(t.iteration, t.version))
    }

    /// True if `key` has a difference at iteration `i` from a version below `version`.
    pub fn has_diff_before_version(&self, key: Key, i: u32, version: u64) -> bool {
        self.per_key
            .get(&key)
            .is_some_and(|m| m.range((i, 0)..(i, version)).next().is_some())
    }

    /// Keys that have (or once had) a difference at iteration `i`.
    pub fn keys_at_row(&self, i: u32) -> impl Iterator<Item = Key> + '_ {
        self.rows.get(i as usize).into_iter().flatten().copied()
    }

    pub fn row_count(&self) -> u32 {
        self.rows.len() as u32
    }

    /// Number of stored (value, multiplicity) entries.
    pub fn entry_count(&self) -> usize {
        self.per_key
            .values()
            .flat_map(|m| m.values())
            .map(DiffSet::len)
            .sum()
    }

    /// All stored differences as (key, timestamp, set).
    pub fn iter(&self) -> impl Iterator<Item = (Key, Timestamp2D, &DiffSet<T>)> {
        self.per_key.iter().flat_map(|(&key, m)| {
            m.iter()
                .map(move |(&(i, k), d)| (key, Timestamp2D::new(k, i), d))
        })
    }

    /// Sums every version's difference at each iteration into one column,
    /// keyed by the newest version present. Reassembly at ⟨newest, i⟩ is
    /// unchanged by construction.
    pub fn merge_columns(&mut self) {
        for map in self.per_key.values_mut() {
            let mut merged: BTreeMap<(u32, u64), DiffSet<T>> = BTreeMap::new();
            let mut current: Option<(u32, u64, DiffSet<T>)> = None;
            for ((i, k), d) in std::mem::take(map) {
                match current.as_mut() {
                    Some((ci, ck, acc)) if *ci == i => {
                        acc.add_assign(&d);
                        *ck = (*ck).max(k);
                    }
                    _ => {
                        if let Some((ci, ck, acc)) = current.take() {
                            if !acc.is_empty() {
                                merged.insert((ci, ck), acc);
                            }
                        }
                        current = Some((i, k, d));
                    }
                }
            }
            if let Some((ci, ck, acc)) = current {
                if !acc.is_empty() {
                    merged.insert((ci, ck), acc);
                }
            }
            *map = merged;
        }
    }
}

impl<T: Ord + Clone + Display> DiffTrace2D<T> {
    /// Text dump: one `collection version iteration sign key state multiplicity`
    /// line per entry, sorted lexicographically.
    pub fn dump(&self, collection: &str, key_name: impl Fn(Key) -> String) -> Vec<String> {
        let mut lines: Vec<String> = self
            .iter()
            .flat_map(|(key, t, d)| {
                let name = key_name(key);
                d.iter()
                    .map(|(v, m)| {
                        let sign = if *m > 0 { '+' } else { '-' };
                        format!(
                            "{collection} {} {} {sign} {name} {v} {}",
                            t.version,
                            t.iteration,
                            m.abs()
                        )
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        lines.sort();
        lines
    }
}
