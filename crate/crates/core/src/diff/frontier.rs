use super::Key;
use std::collections::HashSet;

/// Work list of (key, iteration) pairs: one hash set per iteration, drained
/// lowest iteration first. Scheduling the same pair twice is a no-op.
#[derive(Debug, Clone, Default)]
pub struct Frontier {
    sets: Vec<HashSet<Key>>,
    cursor: usize,
    pending: usize,
}

impl Frontier {
    pub fn new() -> Self {
        Frontier::default()
    }

    /// Adds (key, iteration); returns false if it was already scheduled.
    ///
    /// Iterations below the last drained one cannot be scheduled.
    pub fn schedule(&mut self, key: Key, iteration: u32) -> bool {
        let i = iteration as usize;
        assert!(
            i >= self.cursor,
            "scheduling iteration {i} after draining {}",
            self.cursor
        );
        if self.sets.len() <= i {
            self.sets.resize_with(i + 1, HashSet::new);
        }
        let added = self.sets[i].insert(key);
        self.pending += added as usize;
        added
    }

    pub fn is_scheduled(&self, key: Key, iteration: u32) -> bool {
        self.sets
            .get(iteration as usize)
            .is_some_and(|s| s.contains(&key))
    }

    /// Removes and returns the lowest nonempty iteration's keys, sorted.
    /// `None` signals that no work is left.
    pub fn drain_next(&mut self) -> Option<(u32, Vec<Key>)> {
        for i in self.cursor..self.sets.len() {
            if !self.sets[i].is_empty() {
                let set = std::mem::take(&mut self.sets[i]);
                self.cursor = i;
                self.pending -= set.len();
                let mut keys: Vec<Key> = set.into_iter().collect();
                keys.sort_unstable();
                return Some((i as u32, keys));
            }
        }
        None
    }

    pub fn is_empty(&self) -> bool {
        self.pending == 0
    }

    pub fn len(&self) -> usize {
        self.pending
    }
}
