use crate::diff::Key;
use crate::hash::splitmix64;
use std::collections::HashMap;
use std::ops::RangeInclusive;

/// Exact record of dropped (key, iteration) pairs: per key, a sorted list of
/// dropped iterations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DroppedVtDet {
    map: HashMap<Key, Vec<u32>>,
    count: usize,
}

impl DroppedVtDet {
    pub fn new() -> Self {
        DroppedVtDet::default()
    }

    pub fn record(&mut self, key: Key, iteration: u32) {
        debug_assert!(iteration >= 1, "iteration-0 states are never dropped");
        let list = self.map.entry(key).or_default();
        if let Err(pos) = list.binary_search(&iteration) {
            list.insert(pos, iteration);
            self.count += 1;
        }
    }

    pub fn contains(&self, key: Key, iteration: u32) -> bool {
        self.map
            .get(&key)
            .is_some_and(|l| l.binary_search(&iteration).is_ok())
    }

    /// Removes a record once the pair is stored again.
    pub fn forget(&mut self, key: Key, iteration: u32) {
        if let Some(list) = self.map.get_mut(&key) {
            if let Ok(pos) = list.binary_search(&iteration) {
                list.remove(pos);
                self.count -= 1;
                if list.is_empty() {
                    self.map.remove(&key);
                }
            }
        }
    }

    /// Largest dropped iteration of `key` inside `range`.
    pub fn latest_in(&self, key: Key, range: RangeInclusive<u32>) -> Option<u32> {
        let list = self.map.get(&key)?;
        let end = list.partition_point(|&i| i <= *range.end());
        end.checked_sub(1)
            .map(|j| list[j])
            .filter(|&i| i >= *range.start())
    }

    pub fn iterations_in(&self, key: Key, range: RangeInclusive<u32>) -> Vec<u32> {
        let Some(list) = self.map.get(&key) else {
            return Vec::new();
        };
        let lo = list.partition_point(|&i| i < *range.start());
        let hi = list.partition_point(|&i| i <= *range.end());
        list[lo..hi].to_vec()
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn memory_footprint(&self, vt_bytes: u64) -> u64 {
        self.count as u64 * vt_bytes
    }
}

/// Sizing of a Bloom-filter store.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BloomConfig {
    pub bits_per_entry: f64,
    pub hashes: u32,
    pub expected_entries: u64,
}

impl Default for BloomConfig {
    fn default() -> Self {
        BloomConfig {
            bits_per_entry: 10.0,
            hashes: 7,
            expected_entries: 1024,
        }
    }
}

impl BloomConfig {
    pub fn for_entries(expected_entries: u64) -> Self {
        BloomConfig {
            expected_entries,
            ..BloomConfig::default()
        }
    }

    pub fn bit_count(&self) -> u64 {
        ((self.bits_per_entry * self.expected_entries as f64).ceil() as u64).max(64)
    }
}

const ITERATION_BITS: u32 = 24;
const HASH_SEED_A: u64 = 0x243F_6A88_85A3_08D3;
const HASH_SEED_B: u64 = 0x1319_8A2E_0370_7344;

/// Probabilistic record of dropped pairs with no false negatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DroppedVtBloom {
    bits: Vec<u64>,
    m: u64,
    hashes: u32,
    inserted: u64,
}

impl DroppedVtBloom {
    pub fn new(config: BloomConfig) -> Self {
        let m = config.bit_count();
        DroppedVtBloom {
            bits: vec![0; m.div_ceil(64) as usize],
            m,
            hashes: config.hashes.max(1),
            inserted: 0,
        }
    }

    pub fn with_bits(m: u64, hashes: u32) -> Self {
        let m = m.max(1);
        DroppedVtBloom {
            bits: vec![0; m.div_ceil(64) as usize],
            m,
            hashes: hashes.max(1),
            inserted: 0,
        }
    }

    /// Packs the pair into one 64-bit key: key bits above 24 iteration bits.
    pub fn pack(key: Key, iteration: u32) -> u64 {
        assert!(iteration < 1 << ITERATION_BITS, "iteration {iteration} too large");
        ((key as u64) << ITERATION_BITS) | iteration as u64
    }

    fn positions(&self, key: Key, iteration: u32) -> impl Iterator<Item = u64> {
        let packed = Self::pack(key, iteration);
        let h1 = splitmix64(packed ^ HASH_SEED_A);
        let h2 = splitmix64(packed ^ HASH_SEED_B) | 1;
        let m = self.m;
        (0..self.hashes as u64).map(move |i| h1.wrapping_add(i.wrapping_mul(h2)) % m)
    }

    pub fn record(&mut self, key: Key, iteration: u32) {
        let pos: Vec<u64> = self.positions(key, iteration).collect();
        for p in pos {
            self.bits[(p / 64) as usize] |= 1 << (p % 64);
        }
        self.inserted += 1;
    }

    pub fn contains(&self, key: Key, iteration: u32) -> bool {
        self.positions(key, iteration)
            .all(|p| self.bits[(p / 64) as usize] & (1 << (p % 64)) != 0)
    }

    /// Probes `range` from the top down and returns the first positive.
    pub fn latest_in(&self, key: Key, range: RangeInclusive<u32>) -> Option<u32> {
        range.rev().find(|&i| self.contains(key, i))
    }

    pub fn iterations_in(&self, key: Key, range: RangeInclusive<u32>) -> Vec<u32> {
        range.filter(|&i| self.contains(key, i)).collect()
    }

    pub fn bit_count(&self) -> u64 {
        self.m
    }

    pub fn inserted(&self) -> u64 {
        self.inserted
    }

    pub fn memory_footprint(&self) -> u64 {
        self.m.div_ceil(8)
    }
}

/// Either store kind behind one interface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DroppedStore {
    Det(DroppedVtDet),
    Bloom(DroppedVtBloom),
}

impl DroppedStore {
    pub fn record(&mut self, key: Key, iteration: u32) {
        match self {
            DroppedStore::Det(s) => s.record(key, iteration),
            DroppedStore::Bloom(s) => s.record(key, iteration),
        }
    }

    pub fn contains(&self, key: Key, iteration: u32) -> bool {
        match self {
            DroppedStore::Det(s) => s.contains(key, iteration),
            DroppedStore::Bloom(s) => s.contains(key, iteration),
        }
    }

    /// Only the exact store can forget; Bloom positives are permanent.
    pub fn forget(&mut self, key: Key, iteration: u32) {
        if let DroppedStore::Det(s) = self {
            s.forget(key, iteration);
        }
    }

    pub fn latest_in(&self, key: Key, range: RangeInclusive<u32>) -> Option<u32> {
        if range.is_empty() {
            return None;
        }
        match self {
            DroppedStore::Det(s) => s.latest_in(key, range),
            DroppedStore::Bloom(s) => s.latest_in(key, range),
        }
    }

    pub fn iterations_in(&self, key: Key, range: RangeInclusive<u32>) -> Vec<u32> {
        if range.is_empty() {
            return Vec::new();
        }
        match self {
            DroppedStore::Det(s) => s.iterations_in(key, range),
            DroppedStore::Bloom(s) => s.iterations_in(key, range),
        }
    }

    pub fn memory_footprint(&self, vt_bytes: u64) -> u64 {
        match self {
            DroppedStore::Det(s) => s.memory_footprint(vt_bytes),
            DroppedStore::Bloom(s) => s.memory_footprint(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_membership_is_exact() {
        let mut d = DroppedVtDet::new();
        d.record(1, 1);
        assert!(d.contains(1, 1));
        assert!(!d.contains(1, 2));
        assert_eq!(d.latest_in(1, 0..=4), Some(1));
        assert_eq!(d.latest_in(1, 2..=4), None);
        d.forget(1, 1);
        assert!(d.is_empty());
        assert_eq!(d.latest_in(1, 0..=4), None);
    }

    #[test]
    fn det_range_queries() {
        let mut d = DroppedVtDet::new();
        for i in [2, 5, 9] {
            d.record(4, i);
        }
        d.record(4, 5);
        assert_eq!(d.len(), 3);
        assert_eq!(d.iterations_in(4, 3..=9), vec![5, 9]);
        assert_eq!(d.latest_in(4, 1..=8), Some(5));
        assert_eq!(d.memory_footprint(8), 24);
    }

    #[test]
    fn empty_bloom_reports_nothing() {
        let b = DroppedVtBloom::with_bits(1024, 7);
        assert!((0..100).all(|k| !b.contains(k, 1)));
        assert_eq!(b.memory_footprint(), 128);
    }

    #[test]
    fn bloom_has_no_false_negatives() {
        let mut b = DroppedVtBloom::new(BloomConfig::for_entries(2000));
        for k in 0..2000u32 {
            b.record(k, 1 + k % 13);
        }
        assert!((0..2000u32).all(|k| b.contains(k, 1 + k % 13)));
        assert_eq!(b.inserted(), 2000);
    }

    #[test]
    fn packing_keeps_fields_apart() {
        assert_eq!(DroppedVtBloom::pack(1, 0), 1 << 24);
        assert_ne!(DroppedVtBloom::pack(1, 2), DroppedVtBloom::pack(2, 1));
    }

    #[test]
    fn store_ranges_handle_empty() {
        let s = DroppedStore::Det(DroppedVtDet::new());
        #[allow(clippy::reversed_empty_ranges)]
        let r = 3..=2;
        assert_eq!(s.latest_in(0, r), None);
    }
}
