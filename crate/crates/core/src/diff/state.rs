use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

/// Per-key state shared by every query kind.
///
/// `Infinite` is an explicit tag rather than a sentinel, so `Infinite + w`
/// stays `Infinite`. Ranks compare by bit pattern for equality and by IEEE
/// total order for ordering, which keeps `Eq`, `Ord` and `Hash` consistent.
#[derive(Debug, Clone, Copy)]
pub enum StateValue {
    Infinite,
    Dist(u64),
    Hop(u32),
    Component(u32),
    Rank(f64),
}

impl StateValue {
    fn sort_key(&self) -> (u8, u64) {
        match *self {
            StateValue::Dist(d) => (0, d),
            StateValue::Hop(h) => (1, h as u64),
            StateValue::Component(c) => (2, c as u64),
            StateValue::Rank(r) => {
                let b = r.to_bits();
                let ordered = if b >> 63 == 1 { !b } else { b | (1 << 63) };
                (3, ordered)
            }
            StateValue::Infinite => (u8::MAX, 0),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, StateValue::Infinite)
    }

    /// `self + w` for distances; infinity absorbs.
    pub fn plus_weight(self, w: u64) -> StateValue {
        match self {
            StateValue::Dist(d) => StateValue::Dist(d.saturating_add(w)),
            other => other,
        }
    }

    pub fn as_dist(&self) -> Option<u64> {
        match *self {
            StateValue::Dist(d) => Some(d),
            _ => None,
        }
    }

    pub fn as_hop(&self) -> Option<u32> {
        match *self {
            StateValue::Hop(h) => Some(h),
            _ => None,
        }
    }

    pub fn as_rank(&self) -> Option<f64> {
        match *self {
            StateValue::Rank(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_component(&self) -> Option<u32> {
        match *self {
            StateValue::Component(c) => Some(c),
            _ => None,
        }
    }
}

impl PartialEq for StateValue {
    fn eq(&self, other: &Self) -> bool {
        self.sort_key() == other.sort_key()
    }
}

impl Eq for StateValue {}

impl PartialOrd for StateValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for StateValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl Hash for StateValue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.sort_key().hash(state);
    }
}

impl fmt::Display for StateValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateValue::Infinite => f.write_str("inf"),
            StateValue::Dist(d) => write!(f, "{d}"),
            StateValue::Hop(h) => write!(f, "{h}"),
            StateValue::Component(c) => write!(f, "{c}"),
            StateValue::Rank(r) => write!(f, "{r:?}"),
        }
    }
}

/// An element of a Join collection: the per-key seed or one neighbor's
/// contribution. Aggregation needs to tell the two apart for PageRank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JoinValue {
    Seed(StateValue),
    Contribution(StateValue),
}

impl JoinValue {
    pub fn value(&self) -> StateValue {
        match *self {
            JoinValue::Seed(s) | JoinValue::Contribution(s) => s,
        }
    }
}

impl fmt::Display for JoinValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value().fmt(f)
    }
}
