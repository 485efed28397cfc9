//! Dynamic multigraph with mirrored adjacency lists and batch updates.

mod io;
mod workload;

pub use io::{load_edge_list, parse_edge_list, parse_update_stream, write_update_stream, EdgeList};
pub use workload::{
    assign_random_weights, insertion_batches, make_deletion_workload, split_for_dynamism,
};

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;

/// Dense internal vertex identifier. Never renumbered once assigned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
    pub label: u32,
    pub weight: u64,
}

impl Edge {
    pub fn new(src: u32, dst: u32, weight: u64) -> Self {
        Edge {
            src: VertexId(src),
            dst: VertexId(dst),
            label: 0,
            weight,
        }
    }

    pub fn labeled(src: u32, dst: u32, label: u32) -> Self {
        Edge {
            src: VertexId(src),
            dst: VertexId(dst),
            label,
            weight: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeUpdate {
    pub edge: Edge,
    pub sign: Sign,
}

impl EdgeUpdate {
    pub fn insert(edge: Edge) -> Self {
        EdgeUpdate {
            edge,
            sign: Sign::Plus,
        }
    }

    pub fn delete(edge: Edge) -> Self {
        EdgeUpdate {
            edge,
            sign: Sign::Minus,
        }
    }
}

/// The edge changes that turn version `version - 1` into `version`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UpdateBatch {
    pub version: u64,
    pub entries: Vec<EdgeUpdate>,
}

impl UpdateBatch {
    pub fn new(version: u64, entries: Vec<EdgeUpdate>) -> Self {
        UpdateBatch { version, entries }
    }

    /// A batch undoing this one, stamped with the given version.
    pub fn inverse(&self, version: u64) -> UpdateBatch {
        let entries = self
            .entries
            .iter()
            .rev()
            .map(|u| EdgeUpdate {
                edge: u.edge,
                sign: u.sign.flip(),
            })
            .collect();
        UpdateBatch { version, entries }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One adjacency-list slot: the opposite endpoint plus edge attributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdjEntry {
    pub vertex: VertexId,
    pub label: u32,
    pub weight: u64,
}

/// Forward and backward adjacency lists kept sorted, so that the index is a
/// canonical function of the edge multiset.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    version: u64,
    forward: Vec<Vec<AdjEntry>>,
    backward: Vec<Vec<AdjEntry>>,
    edge_count: usize,
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        Graph {
            version: 0,
            forward: vec![Vec::new(); n],
            backward: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a version-0 graph with at least `n` vertices.
    pub fn from_edges(n: usize, edges: &[Edge]) -> Self {
        let mut g = Graph::with_vertices(n);
        for e in edges {
            g.insert_edge(*e);
        }
        g
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn vertex_count(&self) -> usize {
        self.forward.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.forward.len() as u32).map(VertexId)
    }

    pub fn out_edges(&self, v: VertexId) -> &[AdjEntry] {
        self.forward.get(v.index()).map_or(&[], |l| l.as_slice())
    }

    pub fn in_edges(&self, v: VertexId) -> &[AdjEntry] {
        self.backward.get(v.index()).map_or(&[], |l| l.as_slice())
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_edges(v).len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_edges(v).len()
    }

    pub fn total_degree(&self, v: VertexId) -> usize {
        self.out_degree(v) + self.in_degree(v)
    }

    /// All edges in (src, dst, label, weight) order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.forward.iter().enumerate().flat_map(|(s, list)| {
            list.iter().map(move |a| Edge {
                src: VertexId(s as u32),
                dst: a.vertex,
                label: a.label,
                weight: a.weight,
            })
        })
    }

    /// The `index`-th edge in [`Graph::edges`] order.
    pub fn edge_at(&self, mut index: usize) -> Option<Edge> {
        for (s, list) in self.forward.iter().enumerate() {
            if index < list.len() {
                let a = list[index];
                return Some(Edge {
                    src: VertexId(s as u32),
                    dst: a.vertex,
                    label: a.label,
                    weight: a.weight,
                });
            }
            index -= list.len();
        }
        None
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        let probe = AdjEntry {
            vertex: e.dst,
            label: e.label,
            weight: e.weight,
        };
        self.out_edges(e.src).binary_search(&probe).is_ok()
    }

    fn ensure_vertex(&mut self, v: VertexId) {
        if v.index() >= self.forward.len() {
            self.forward.resize(v.index() + 1, Vec::new());
            self.backward.resize(v.index() + 1, Vec::new());
        }
    }

    /// Inserts one copy of `e`, growing the vertex range if needed.
    pub fn insert_edge(&mut self, e: Edge) {
        self.ensure_vertex(e.src);
        self.ensure_vertex(e.dst);
        let fwd = AdjEntry {
            vertex: e.dst,
            label: e.label,
            weight: e.weight,
        };
        let bwd = AdjEntry {
            vertex: e.src,
            label: e.label,
            weight: e.weight,
        };
        let list = &mut self.forward[e.src.index()];
        let pos = list.partition_point(|x| *x <= fwd);
        list.insert(pos, fwd);
        let list = &mut self.backward[e.dst.index()];
        let pos = list.partition_point(|x| *x <= bwd);
        list.insert(pos, bwd);
        self.edge_count += 1;
    }

    /// Removes one copy of `e`.
    pub fn remove_edge(&mut self, e: &Edge) -> Result<()> {
        let fwd = AdjEntry {
            vertex: e.dst,
            label: e.label,
            weight: e.weight,
        };
        let bwd = AdjEntry {
            vertex: e.src,
            label: e.label,
            weight: e.weight,
        };
        let missing = || {
            Error::Update(format!(
                "edge {}->{} (label {}, weight {}) is not present",
                e.src, e.dst, e.label, e.weight
            ))
        };
        let fpos = self
            .forward
            .get(e.src.index())
            .and_then(|l| l.binary_search(&fwd).ok())
            .ok_or_else(missing)?;
        let bpos = self
            .backward
            .get(e.dst.index())
            .and_then(|l| l.binary_search(&bwd).ok())
            .ok_or_else(|| Error::Internal("forward and backward lists disagree".into()))?;
        self.forward[e.src.index()].remove(fpos);
        self.backward[e.dst.index()].remove(bpos);
        self.edge_count -= 1;
        Ok(())
    }

    /// Applies `batch` atomically and advances the version.
    pub fn apply_batch(&mut self, batch: &UpdateBatch) -> Result<()> {
        if batch.version != self.version + 1 {
            return Err(Error::Sequencing {
                expected: self.version + 1,
                found: batch.version,
            });
        }
        let vertices_before = self.vertex_count();
        for (i, u) in batch.entries.iter().enumerate() {
            let outcome = match u.sign {
                Sign::Plus => {
                    self.insert_edge(u.edge);
                    Ok(())
                }
                Sign::Minus => self.remove_edge(&u.edge),
            };
            if let Err(err) = outcome {
                // roll back the prefix that did apply
                for done in batch.entries[..i].iter().rev() {
                    match done.sign {
                        Sign::Plus => self.remove_edge(&done.edge)?,
                        Sign::Minus => self.insert_edge(done.edge),
                    }
                }
                self.forward.truncate(vertices_before);
                self.backward.truncate(vertices_before);
                return Err(match err {
                    Error::Update(msg) => Error::Update(format!("entry {i}: {msg}")),
                    other => other,
                });
            }
        }
        self.version = batch.version;
        Ok(())
    }

    /// Vertex-level degree check used by tests and debug assertions.
    pub fn check_consistency(&self) -> Result<()> {
        let outs: usize = self.forward.iter().map(Vec::len).sum();
        let ins: usize = self.backward.iter().map(Vec::len).sum();
        if outs != self.edge_count || ins != self.edge_count {
            return Err(Error::Internal(format!(
                "degree sums {outs}/{ins} differ from edge count {}",
                self.edge_count
            )));
        }
        let mut mirror: HashMap<Edge, i64> = HashMap::new();
        for e in self.edges() {
            *mirror.entry(e).or_default() += 1;
        }
        for (d, list) in self.backward.iter().enumerate() {
            for a in list {
                let e = Edge {
                    src: a.vertex,
                    dst: VertexId(d as u32),
                    label: a.label,
                    weight: a.weight,
                };
                *mirror.entry(e).or_default() -= 1;
            }
        }
        if mirror.values().any(|&c| c != 0) {
            return Err(Error::Internal("forward and backward lists disagree".into()));
        }
        Ok(())
    }
}

/// Dense first-seen-order mapping from external tokens to small integers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interner {
    codes: HashMap<String, u32>,
    names: Vec<String>,
}

impl Interner {
    pub fn new() -> Self {
        Interner::default()
    }

    pub fn intern(&mut self, token: &str) -> u32 {
        if let Some(&c) = self.codes.get(token) {
            return c;
        }
        let c = self.names.len() as u32;
        self.codes.insert(token.to_string(), c);
        self.names.push(token.to_string());
        c
    }

    pub fn get(&self, token: &str) -> Option<u32> {
        self.codes.get(token).copied()
    }

    pub fn name(&self, code: u32) -> Option<&str> {
        self.names.get(code as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}
