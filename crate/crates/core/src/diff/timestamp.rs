use std::cmp::Ordering;
use std::fmt;

/// A ⟨graph version, iteration⟩ pair under the product partial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Timestamp2D {
    pub version: u64,
    pub iteration: u32,
}

impl Timestamp2D {
    pub fn new(version: u64, iteration: u32) -> Self {
        Timestamp2D { version, iteration }
    }

    /// Least upper bound: component-wise maximum.
    pub fn lub(self, other: Timestamp2D) -> Timestamp2D {
        Timestamp2D {
            version: self.version.max(other.version),
            iteration: self.iteration.max(other.iteration),
        }
    }
}

impl PartialOrd for Timestamp2D {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let v = self.version.cmp(&other.version);
        let i = self.iteration.cmp(&other.iteration);
        match (v, i) {
            (Ordering::Equal, o) | (o, Ordering::Equal) => Some(o),
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for Timestamp2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.version, self.iteration)
    }
}
