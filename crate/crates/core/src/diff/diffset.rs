use std::fmt;

/// A multiset with signed multiplicities, kept sorted with zero entries
/// removed. Used both for difference sets and for reassembled contents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiffSet<T> {
    entries: Vec<(T, i64)>,
}

impl<T> Default for DiffSet<T> {
    fn default() -> Self {
        DiffSet {
            entries: Vec::new(),
        }
    }
}

impl<T: Ord + Clone> DiffSet<T> {
    pub fn new() -> Self {
        DiffSet::default()
    }

    /// Builds a normalized set from arbitrary (value, multiplicity) pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (T, i64)>) -> Self {
        let mut v: Vec<(T, i64)> = pairs.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(T, i64)> = Vec::with_capacity(v.len());
        for (x, m) in v {
            match out.last_mut() {
                Some(last) if last.0 == x => last.1 += m,
                _ => out.push((x, m)),
            }
        }
        out.retain(|e| e.1 != 0);
        DiffSet { entries: out }
    }

    /// A content multiset where every value has multiplicity one per occurrence.
    pub fn from_values(values: impl IntoIterator<Item = T>) -> Self {
        DiffSet::from_pairs(values.into_iter().map(|v| (v, 1)))
    }

    pub fn singleton(value: T, multiplicity: i64) -> Self {
        DiffSet::from_pairs([(value, multiplicity)])
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct stored entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(T, i64)> {
        self.entries.iter()
    }

    pub fn multiplicity(&self, value: &T) -> i64 {
        self.entries
            .binary_search_by(|e| e.0.cmp(value))
            .map_or(0, |i| self.entries[i].1)
    }

    /// In-place `self += other`.
    pub fn add_assign(&mut self, other: &DiffSet<T>) {
        if other.is_empty() {
            return;
        }
        let mut merged = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    std::cmp::Ordering::Less => merged.push(a.next().unwrap().clone()),
                    std::cmp::Ordering::Greater => merged.push(b.next().unwrap().clone()),
                    std::cmp::Ordering::Equal => {
                        let m = x.1 + y.1;
                        let v = x.0.clone();
                        a.next();
                        b.next();
                        if m != 0 {
                            merged.push((v, m));
                        }
                    }
                },
                (Some(_), None) => merged.push(a.next().unwrap().clone()),
                (None, Some(_)) => merged.push(b.next().unwrap().clone()),
                (None, None) => break,
            }
        }
        self.entries = merged;
    }

    pub fn negated(&self) -> DiffSet<T> {
        DiffSet {
            entries: self.entries.iter().map(|(v, m)| (v.clone(), -m)).collect(),
        }
    }

    /// `self - other`.
    pub fn minus(&self, other: &DiffSet<T>) -> DiffSet<T> {
        let mut out = self.clone();
        out.add_assign(&other.negated());
        out
    }

    /// Expands multiplicities into a value list; meaningful for contents
    /// (all multiplicities positive).
    pub fn expand(&self) -> Vec<T> {
        let mut out = Vec::new();
        for (v, m) in &self.entries {
            for _ in 0..(*m).max(0) {
                out.push(v.clone());
            }
        }
        out
    }

    pub fn positive_values(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().filter(|e| e.1 > 0).map(|e| &e.0)
    }
}

/// Sum of any number of difference sets.
pub fn diffset_sum<'a, T: Ord + Clone + 'a>(sets: impl IntoIterator<Item = &'a DiffSet<T>>) -> DiffSet<T> {
    let mut acc = DiffSet::new();
    for s in sets {
        acc.add_assign(s);
    }
    acc
}

impl<T: fmt::Display> fmt::Display for DiffSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, m)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let sign = if *m > 0 { '+' } else { '-' };
            if m.abs() == 1 {
                write!(f, "{sign}{v}")?;
            } else {
                write!(f, "{sign}{v}x{}", m.abs())?;
            }
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::StateValue::{self, Dist};

    type Keyed = DiffSet<(char, StateValue)>;

    #[test]
    fn retraction_cancels() {
        let a: Keyed = DiffSet::singleton(('d', Dist(20)), 1);
        let b: Keyed = DiffSet::from_pairs([(('d', Dist(20)), -1), (('d', Dist(100)), 1)]);
        assert_eq!(diffset_sum([&a, &b]), DiffSet::singleton(('d', Dist(100)), 1));
    }

    #[test]
    fn empty_is_identity() {
        let a: Keyed = DiffSet::from_pairs([(('b', Dist(30)), 1), (('e', Dist(10)), -2)]);
        assert_eq!(diffset_sum([&a, &DiffSet::new()]), a);
    }

    #[test]
    fn multiplicities_add() {
        let a: Keyed = DiffSet::singleton(('c', Dist(40)), 2);
        let b: Keyed = DiffSet::singleton(('c', Dist(40)), -1);
        let s = diffset_sum([&a, &b]);
        assert_eq!(s.multiplicity(&('c', Dist(40))), 1);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn from_pairs_normalizes() {
        let s = DiffSet::from_pairs([(3, 1), (1, 2), (3, -1), (2, 0)]);
        assert_eq!(s.iter().cloned().collect::<Vec<_>>(), vec![(1, 2)]);
    }
}
