//! Non-differential baselines: a frontier rerun on the whole current graph,
//! and the same search pruned by landmark distance bounds.

mod landmark;
mod scratch;

pub use landmark::{landmark_bounds, landmark_select, scratch_landmark_spsp, LandmarkIndex, SearchStats};
pub use scratch::{scratch_run, ScratchStats};
