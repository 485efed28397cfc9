use super::{Key, StateValue};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// One-dimensional trace with negatives elided: per key, a list of
/// (iteration, state) sorted by strictly increasing iteration. The state at
/// iteration i is the one stored at the largest iteration ≤ i.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MergedTrace {
    lists: Vec<Vec<(u32, StateValue)>>,
}

impl MergedTrace {
    pub fn new() -> Self {
        MergedTrace::default()
    }

    pub fn key_count(&self) -> usize {
        self.lists.len()
    }

    pub fn ensure_keys(&mut self, n: usize) {
        if self.lists.len() < n {
            self.lists.resize_with(n, Vec::new);
        }
    }

    pub fn entries(&self, key: Key) -> &[(u32, StateValue)] {
        self.lists.get(key as usize).map_or(&[], Vec::as_slice)
    }

    /// Latest stored (iteration, state) with iteration ≤ i.
    pub fn latest_at_or_before(&self, key: Key, i: u32) -> Option<(u32, StateValue)> {
        let list = self.entries(key);
        let n = list.partition_point(|e| e.0 <= i);
        n.checked_sub(1).map(|j| list[j])
    }

    pub fn lookup_state(&self, key: Key, i: u32) -> Option<StateValue> {
        self.latest_at_or_before(key, i).map(|e| e.1)
    }

    pub fn stored_at(&self, key: Key, i: u32) -> Option<StateValue> {
        let list = self.entries(key);
        list.binary_search_by_key(&i, |e| e.0).ok().map(|j| list[j].1)
    }

    /// Entries strictly after iteration i.
    pub fn entries_after(&self, key: Key, i: u32) -> &[(u32, StateValue)] {
        let list = self.entries(key);
        &list[list.partition_point(|e| e.0 <= i)..]
    }

    /// Stores `state` at iteration i, replacing any entry there. Returns true
    /// if an entry already existed.
    pub fn set(&mut self, key: Key, i: u32, state: StateValue) -> bool {
        self.ensure_keys(key as usize + 1);
        let list = &mut self.lists[key as usize];
        match list.binary_search_by_key(&i, |e| e.0) {
            Ok(j) => {
                list[j].1 = state;
                true
            }
            Err(j) => {
                list.insert(j, (i, state));
                false
            }
        }
    }

    /// Removes the entry at iteration i, returning whether one existed.
    pub fn remove(&mut self, key: Key, i: u32) -> bool {
        let Some(list) = self.lists.get_mut(key as usize) else {
            return false;
        };
        match list.binary_search_by_key(&i, |e| e.0) {
            Ok(j) => {
                list.remove(j);
                true
            }
            Err(_) => false,
        }
    }

    pub fn entry_count(&self) -> usize {
        self.lists.iter().map(Vec::len).sum()
    }

    /// All stored (key, state) pairs at exactly iteration i, by key.
    pub fn row(&self, i: u32) -> Vec<(Key, StateValue)> {
        (0..self.lists.len() as Key)
            .filter_map(|k| self.stored_at(k, i).map(|s| (k, s)))
            .collect()
    }

    pub fn max_stored_iteration(&self) -> Option<u32> {
        self.lists.iter().filter_map(|l| l.last().map(|e| e.0)).max()
    }

    pub fn from_lists(lists: Vec<Vec<(u32, StateValue)>>) -> Result<Self> {
        for (k, l) in lists.iter().enumerate() {
            if l.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::Internal(format!(
                    "iterations of key {k} are not strictly increasing"
                )));
            }
        }
        Ok(MergedTrace { lists })
    }
}

/// Collapses one key's merged (iteration, state, multiplicity) differences
/// into stored positive pairs. Retractions are implied by the next pair.
pub fn elide_negatives(diffs: &[(u32, StateValue, i64)]) -> Result<Vec<(u32, StateValue)>> {
    let mut rows: BTreeMap<u32, BTreeMap<StateValue, i64>> = BTreeMap::new();
    for &(i, s, m) in diffs {
        *rows.entry(i).or_default().entry(s).or_default() += m;
    }
    let mut out = Vec::new();
    for (i, states) in rows {
        let positives: Vec<StateValue> = states
            .into_iter()
            .filter(|&(_, m)| m > 0)
            .map(|(s, m)| {
                if m > 1 {
                    Err(Error::Internal(format!(
                        "state {s} has multiplicity {m} at iteration {i}"
                    )))
                } else {
                    Ok(s)
                }
            })
            .collect::<Result<_>>()?;
        match positives.as_slice() {
            [] => {}
            [s] => out.push((i, *s)),
            _ => {
                return Err(Error::Internal(format!(
                    "{} positive states at iteration {i}",
                    positives.len()
                )))
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use StateValue::{Dist, Infinite};

    #[test]
    fn elision_keeps_positive_pairs() {
        let stored =
            elide_negatives(&[(1, Dist(100), 1), (3, Dist(100), -1), (3, Dist(50), 1)]).unwrap();
        assert_eq!(stored, vec![(1, Dist(100)), (3, Dist(50))]);
    }

    #[test]
    fn all_positive_input_is_unchanged() {
        let input = [(0, Infinite, 1), (1, Dist(30), 1)];
        let stored = elide_negatives(&input).unwrap();
        assert_eq!(stored, vec![(0, Infinite), (1, Dist(30))]);
    }

    #[test]
    fn two_positive_states_is_an_error() {
        assert!(elide_negatives(&[(2, Dist(1), 1), (2, Dist(4), 1)]).is_err());
    }

    #[test]
    fn lookup_takes_latest_at_or_before() {
        let mut t = MergedTrace::new();
        t.set(1, 0, Infinite);
        t.set(1, 1, Dist(30));
        assert_eq!(t.lookup_state(1, 3), Some(Dist(30)));
        assert_eq!(t.lookup_state(1, 0), Some(Infinite));
        assert_eq!(t.lookup_state(0, 3), None);
        assert_eq!(t.lookup_state(7, 3), None);
    }

    #[test]
    fn set_and_remove_keep_order() {
        let mut t = MergedTrace::new();
        t.set(0, 5, Dist(1));
        t.set(0, 2, Dist(3));
        t.set(0, 9, Dist(0));
        assert!(t.set(0, 5, Dist(2)));
        assert_eq!(t.entries(0), &[(2, Dist(3)), (5, Dist(2)), (9, Dist(0))]);
        assert!(t.remove(0, 5));
        assert!(!t.remove(0, 5));
        assert_eq!(t.entries_after(0, 2), &[(9, Dist(0))]);
        assert_eq!(t.entry_count(), 2);
    }
}
