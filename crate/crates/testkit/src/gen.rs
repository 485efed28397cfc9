use dcgraph::graph::{Edge, EdgeUpdate, Graph, UpdateBatch, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size and attribute ranges of a random graph.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub vertices: u32,
    pub edges: usize,
    /// Weights are drawn from 1..=max_weight.
    pub max_weight: u64,
    /// Labels are drawn from 0..labels; 1 means unlabeled.
    pub labels: u32,
}

impl Shape {
    pub fn new(vertices: u32, edges: usize) -> Self {
        Shape {
            vertices,
            edges,
            max_weight: 10,
            labels: 1,
        }
    }

    pub fn labels(mut self, labels: u32) -> Self {
        self.labels = labels;
        self
    }

    pub fn max_weight(mut self, w: u64) -> Self {
        self.max_weight = w;
        self
    }
}

pub fn random_edge(rng: &mut impl Rng, vertices: u32, shape: &Shape) -> Edge {
    Edge {
        src: VertexId(rng.gen_range(0..vertices)),
        dst: VertexId(rng.gen_range(0..vertices)),
        label: rng.gen_range(0..shape.labels.max(1)),
        weight: rng.gen_range(1..=shape.max_weight.max(1)),
    }
}

pub fn random_graph(rng: &mut impl Rng, shape: &Shape) -> Graph {
    let edges: Vec<Edge> = (0..shape.edges)
        .map(|_| random_edge(rng, shape.vertices.max(1), shape))
        .collect();
    Graph::from_edges(shape.vertices as usize, &edges)
}

/// A random update stream for `graph`. Each batch holds one to three
/// entries. A `deletion_fraction` share of batches delete present edges;
/// the rest insert edges or change an edge's weight. Insertions may name
/// up to `growth` vertices beyond the current range.
pub fn random_batches(
    rng: &mut impl Rng,
    graph: &Graph,
    shape: &Shape,
    count: usize,
    deletion_fraction: f64,
    growth: u32,
) -> Vec<UpdateBatch> {
    let mut work = graph.clone();
    let mut out = Vec::with_capacity(count);
    for b in 0..count {
        let version = graph.version() + 1 + b as u64;
        let mut entries = Vec::new();
        let size = rng.gen_range(1..=3);
        let deleting = rng.gen_bool(deletion_fraction.clamp(0.0, 1.0));
        let mut scratch = work.clone();
        for _ in 0..size {
            let present: Vec<Edge> = scratch.edges().collect();
            if deleting && !present.is_empty() {
                let e = *present.choose(rng).unwrap();
                scratch.remove_edge(&e).unwrap();
                entries.push(EdgeUpdate::delete(e));
            } else if !present.is_empty() && rng.gen_bool(0.25) {
                // weight change: one deletion followed by one insertion
                let e = *present.choose(rng).unwrap();
                let mut changed = e;
                changed.weight = rng.gen_range(1..=shape.max_weight.max(1));
                scratch.remove_edge(&e).unwrap();
                scratch.insert_edge(changed);
                entries.push(EdgeUpdate::delete(e));
                entries.push(EdgeUpdate::insert(changed));
            } else {
                let range = scratch.vertex_count() as u32 + if rng.gen_bool(0.1) { growth } else { 0 };
                let e = random_edge(rng, range.max(1), shape);
                scratch.insert_edge(e);
                entries.push(EdgeUpdate::insert(e));
            }
        }
        let batch = UpdateBatch::new(version, entries);
        work.apply_batch(&batch).unwrap();
        out.push(batch);
    }
    out
}

/// Two vertex-disjoint random components: vertices below `split` and the
/// rest. Edges never cross the split.
pub fn two_component_graph(rng: &mut impl Rng, split: u32, total: u32, edges_each: usize) -> Graph {
    let shape = Shape::new(total, 0);
    let mut edges = Vec::new();
    for (lo, hi) in [(0, split), (split, total)] {
        for _ in 0..edges_each {
            edges.push(Edge {
                src: VertexId(rng.gen_range(lo..hi)),
                dst: VertexId(rng.gen_range(lo..hi)),
                label: 0,
                weight: rng.gen_range(1..=shape.max_weight),
            });
        }
    }
    Graph::from_edges(total as usize, &edges)
}
