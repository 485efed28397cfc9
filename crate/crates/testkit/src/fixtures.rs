//! The five-vertex running example: its graph, the two scripted updates,
//! and the hand-derived shortest-path traces.

use dcgraph::diff::Key;
use dcgraph::graph::{Edge, EdgeUpdate, Graph, UpdateBatch};

pub const A: u32 = 0;
pub const B: u32 = 1;
pub const C: u32 = 2;
pub const D: u32 = 3;
pub const E: u32 = 4;

pub fn example_name(key: Key) -> String {
    ["a", "b", "c", "d", "e"]
        .get(key as usize)
        .map_or_else(|| key.to_string(), |s| s.to_string())
}

/// Edge-list text of the version-0 graph.
pub const EXAMPLE_EDGE_LIST: &str = "\
a b 30
b c 10
c d 10
a d 20
d e 10
a e 10
d c 20
";

pub fn example_edges() -> Vec<Edge> {
    vec![
        Edge::new(A, B, 30),
        Edge::new(B, C, 10),
        Edge::new(C, D, 10),
        Edge::new(A, D, 20),
        Edge::new(D, E, 10),
        Edge::new(A, E, 10),
        Edge::new(D, C, 20),
    ]
}

pub fn example_graph() -> Graph {
    Graph::from_edges(5, &example_edges())
}

/// Batch 1 raises a->d from 20 to 100; batch 2 raises b->c from 10 to 100.
pub fn example_batches() -> Vec<UpdateBatch> {
    vec![
        UpdateBatch::new(
            1,
            vec![EdgeUpdate::delete(Edge::new(A, D, 20)), EdgeUpdate::insert(Edge::new(A, D, 100))],
        ),
        UpdateBatch::new(
            2,
            vec![EdgeUpdate::delete(Edge::new(B, C, 10)), EdgeUpdate::insert(Edge::new(B, C, 100))],
        ),
    ]
}

/// Update-stream text equivalent to [`example_batches`].
pub const EXAMPLE_UPDATE_STREAM: &str = "\
- a d 20
+ a d 100

- b c 10
+ b c 100
";

/// Converged distances from a after each version.
pub const EXAMPLE_DISTANCES: [[u64; 5]; 3] = [[0, 30, 40, 20, 10], [0, 30, 40, 50, 10], [0, 30, 120, 100, 10]];

/// Every J and D difference of the shortest-path run from a over versions
/// 0..=2, transcribed by hand as `collection version iteration sign key
/// state multiplicity`. The D entry at version 0, iteration 1 for d reads
/// 20, the weight of a->d.
pub const EXAMPLE_TRACE: &[&str] = &[
    // version 0
    "J 0 0 + a 0 1",
    "J 0 0 + b inf 1",
    "J 0 0 + c inf 1",
    "J 0 0 + d inf 1",
    "J 0 0 + e inf 1",
    "J 0 1 + b 30 1",
    "J 0 1 + d 20 1",
    "J 0 1 + e 10 1",
    "J 0 2 + c 40 2",
    "J 0 2 + e 30 1",
    "J 0 3 + d 50 1",
    "D 0 0 + a 0 1",
    "D 0 0 + b inf 1",
    "D 0 0 + c inf 1",
    "D 0 0 + d inf 1",
    "D 0 0 + e inf 1",
    "D 0 1 - b inf 1",
    "D 0 1 + b 30 1",
    "D 0 1 - d inf 1",
    "D 0 1 + d 20 1",
    "D 0 1 - e inf 1",
    "D 0 1 + e 10 1",
    "D 0 2 - c inf 1",
    "D 0 2 + c 40 1",
    // version 1: a->d becomes 100
    "J 1 1 - d 20 1",
    "J 1 1 + d 100 1",
    "J 1 2 - c 40 1",
    "J 1 2 + c 120 1",
    "J 1 2 - e 30 1",
    "J 1 2 + e 110 1",
    "J 1 4 - c 120 1",
    "J 1 4 + c 70 1",
    "J 1 4 - e 110 1",
    "J 1 4 + e 60 1",
    "D 1 1 - d 20 1",
    "D 1 1 + d 100 1",
    "D 1 3 - d 100 1",
    "D 1 3 + d 50 1",
    // version 2: b->c becomes 100
    "J 2 2 - c 40 1",
    "J 2 2 + c 130 1",
    "J 2 3 - d 50 1",
    "J 2 3 + d 130 1",
    "J 2 4 - c 70 1",
    "J 2 4 + c 120 1",
    "J 2 4 - e 60 1",
    "J 2 4 + e 110 1",
    "D 2 2 - c 40 1",
    "D 2 2 + c 120 1",
    "D 2 3 - d 50 1",
    "D 2 3 + d 100 1",
];

/// Lines of [`EXAMPLE_TRACE`] up to and including `version`, sorted.
pub fn example_trace_through(version: u64) -> Vec<String> {
    let mut lines: Vec<String> = EXAMPLE_TRACE
        .iter()
        .filter(|l| l.split(' ').nth(1).and_then(|v| v.parse::<u64>().ok()).unwrap() <= version)
        .map(|l| l.to_string())
        .collect();
    lines.sort();
    lines
}

/// Distinct (key, timestamp, value) entries per collection in a trace dump.
pub fn tally(lines: &[String]) -> (usize, usize) {
    let j = lines.iter().filter(|l| l.starts_with("J ")).count();
    let d = lines.iter().filter(|l| l.starts_with("D ")).count();
    (j, d)
}
