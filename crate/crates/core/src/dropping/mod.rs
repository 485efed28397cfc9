//! Partial dropping of stored states: which ones to drop, and how dropped
//! (key, iteration) pairs are remembered.

mod policy;
mod store;

pub use policy::{percentile, DegreeKind, DropMode, DropPolicy, ResolvedPolicy};
pub use store::{BloomConfig, DroppedStore, DroppedVtBloom, DroppedVtDet};

/// Which store remembers dropped pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StoreKind {
    Det,
    Bloom(BloomConfig),
}

impl StoreKind {
    pub fn build(self) -> DroppedStore {
        match self {
            StoreKind::Det => DroppedStore::Det(DroppedVtDet::new()),
            StoreKind::Bloom(cfg) => DroppedStore::Bloom(DroppedVtBloom::new(cfg)),
        }
    }
}

/// Everything the join-on-demand engine needs to drop states.
#[derive(Debug, Clone, PartialEq)]
pub struct DropConfig {
    pub policy: DropPolicy,
    pub store: StoreKind,
}
