//! Iterative frontier-expansion computations: seeds, propagation along
//! edges, aggregation, and iteration caps for each supported query kind.

mod automaton;
mod parse;

pub use automaton::LabelAutomaton;
pub use parse::parse_query_file;

use crate::diff::{JoinValue, Key, StateValue};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexId};
use std::sync::Arc;

pub const DEFAULT_PAGERANK_ITERATIONS: u32 = 10;
pub const DEFAULT_DAMPING: f64 = 0.85;

/// A registered query as read from a query file or generated.
#[derive(Debug, Clone, PartialEq)]
pub enum QuerySpec {
    Spsp { source: VertexId, target: VertexId },
    KHop { source: VertexId, k_max: u32 },
    Rpq { source: VertexId, automaton: LabelAutomaton },
    Wcc,
    PageRank { iterations: u32, damping: f64 },
}

impl QuerySpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            QuerySpec::Spsp { .. } => "spsp",
            QuerySpec::KHop { .. } => "khop",
            QuerySpec::Rpq { .. } => "rpq",
            QuerySpec::Wcc => "wcc",
            QuerySpec::PageRank { .. } => "pagerank",
        }
    }

    pub fn operator(&self) -> QueryOperator {
        match self {
            QuerySpec::Spsp { source, .. } => QueryOperator::spsp(*source),
            QuerySpec::KHop { source, k_max } => QueryOperator::khop(*source, *k_max),
            QuerySpec::Rpq { source, automaton } => QueryOperator::rpq(*source, automaton.clone()),
            QuerySpec::Wcc => QueryOperator::wcc(),
            QuerySpec::PageRank {
                iterations,
                damping,
            } => QueryOperator::pagerank(*iterations, *damping),
        }
    }
}

/// Edge orientation followed by shortest-path propagation. `Backward`
/// computes distances *to* the source over reversed edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone)]
enum Kind {
    Sssp {
        source: VertexId,
        direction: Direction,
    },
    KHop {
        source: VertexId,
        k_max: u32,
    },
    Rpq {
        source: VertexId,
        automaton: Arc<LabelAutomaton>,
    },
    Wcc,
    PageRank {
        iterations: u32,
        damping: f64,
    },
}

/// One dependency of a key: the upstream key plus the edge attributes the
/// contribution depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Link {
    pub from: Key,
    pub vertex: VertexId,
    pub weight: u64,
}

/// A compiled, immutable query operator.
#[derive(Debug, Clone)]
pub struct QueryOperator {
    kind: Kind,
}

impl QueryOperator {
    pub fn spsp(source: VertexId) -> Self {
        QueryOperator::sssp(source, Direction::Forward)
    }

    pub fn sssp(source: VertexId, direction: Direction) -> Self {
        QueryOperator {
            kind: Kind::Sssp { source, direction },
        }
    }

    pub fn khop(source: VertexId, k_max: u32) -> Self {
        QueryOperator {
            kind: Kind::KHop { source, k_max },
        }
    }

    pub fn rpq(source: VertexId, automaton: LabelAutomaton) -> Self {
        QueryOperator {
            kind: Kind::Rpq {
                source,
                automaton: Arc::new(automaton),
            },
        }
    }

    pub fn wcc() -> Self {
        QueryOperator { kind: Kind::Wcc }
    }

    pub fn pagerank(iterations: u32, damping: f64) -> Self {
        QueryOperator {
            kind: Kind::PageRank {
                iterations,
                damping,
            },
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            Kind::Sssp { .. } => "spsp",
            Kind::KHop { .. } => "khop",
            Kind::Rpq { .. } => "rpq",
            Kind::Wcc => "wcc",
            Kind::PageRank { .. } => "pagerank",
        }
    }

    /// Checks the operator against a graph before registration.
    pub fn validate(&self, graph: &Graph) -> Result<()> {
        let n = graph.vertex_count();
        let source = match &self.kind {
            Kind::Sssp { source, .. } | Kind::KHop { source, .. } | Kind::Rpq { source, .. } => {
                Some(*source)
            }
            _ => None,
        };
        if let Some(s) = source {
            if s.index() >= n {
                return Err(Error::QueryCompile(format!(
                    "source vertex {s} is not in the graph ({n} vertices)"
                )));
            }
        }
        if let Kind::KHop { k_max, .. } = self.kind {
            if k_max == 0 {
                return Err(Error::QueryCompile("k_max must be at least 1".into()));
            }
        }
        if let Kind::PageRank { damping, .. } = self.kind {
            if n == 0 {
                return Err(Error::QueryCompile("pagerank needs a nonempty graph".into()));
            }
            if !(0.0..=1.0).contains(&damping) {
                return Err(Error::QueryCompile(format!("damping {damping} outside [0, 1]")));
            }
        }
        Ok(())
    }

    fn states_per_vertex(&self) -> usize {
        match &self.kind {
            Kind::Rpq { automaton, .. } => automaton.state_count() as usize,
            _ => 1,
        }
    }

    pub fn key_count(&self, graph: &Graph) -> usize {
        graph.vertex_count() * self.states_per_vertex()
    }

    pub fn vertex_of(&self, key: Key) -> VertexId {
        VertexId(key / self.states_per_vertex() as u32)
    }

    /// Iteration cap and whether reaching it simply ends the computation
    /// (`true`) or signals nontermination when more work is pending (`false`).
    pub fn iteration_cap(&self, graph: &Graph) -> (u32, bool) {
        match self.kind {
            Kind::KHop { k_max, .. } => (k_max, true),
            Kind::PageRank { iterations, .. } => (iterations, true),
            _ => ((self.key_count(graph) as u32).max(1), false),
        }
    }

    /// True if the seed term differs between iteration 0 and later iterations.
    pub fn seed_varies(&self) -> bool {
        matches!(self.kind, Kind::PageRank { .. })
    }

    /// True if a change in vertex count changes every seed.
    pub fn depends_on_vertex_count(&self) -> bool {
        matches!(self.kind, Kind::PageRank { .. })
    }

    /// The neighbor-independent part of a key's input at iteration i.
    pub fn seed(&self, graph: &Graph, key: Key, iteration: u32) -> StateValue {
        match &self.kind {
            Kind::Sssp { source, .. } => {
                if key == source.0 {
                    StateValue::Dist(0)
                } else {
                    StateValue::Infinite
                }
            }
            Kind::KHop { source, .. } => {
                if key == source.0 {
                    StateValue::Hop(0)
                } else {
                    StateValue::Infinite
                }
            }
            Kind::Rpq { source, automaton } => {
                let q = automaton.state_count();
                if key == source.0 * q + automaton.start() {
                    StateValue::Hop(0)
                } else {
                    StateValue::Infinite
                }
            }
            Kind::Wcc => StateValue::Component(key),
            Kind::PageRank { damping, .. } => {
                let n = graph.vertex_count() as f64;
                if iteration == 0 {
                    StateValue::Rank(1.0 / n)
                } else {
                    StateValue::Rank((1.0 - damping) / n)
                }
            }
        }
    }

    pub fn init(&self, graph: &Graph, key: Key) -> StateValue {
        self.seed(graph, key, 0)
    }

    /// Inert states contribute nothing downstream.
    pub fn is_inert(&self, state: StateValue) -> bool {
        state.is_infinite()
    }

    /// Upstream keys whose states feed `key`, one entry per edge.
    pub fn dependencies(&self, graph: &Graph, key: Key, out: &mut Vec<Link>) {
        out.clear();
        match &self.kind {
            Kind::Sssp { direction, .. } => {
                let v = VertexId(key);
                let adj = match direction {
                    Direction::Forward => graph.in_edges(v),
                    Direction::Backward => graph.out_edges(v),
                };
                out.extend(adj.iter().map(|a| Link {
                    from: a.vertex.0,
                    vertex: a.vertex,
                    weight: a.weight,
                }));
            }
            Kind::KHop { .. } | Kind::PageRank { .. } => {
                out.extend(graph.in_edges(VertexId(key)).iter().map(|a| Link {
                    from: a.vertex.0,
                    vertex: a.vertex,
                    weight: a.weight,
                }));
            }
            Kind::Wcc => {
                let v = VertexId(key);
                for a in graph.in_edges(v).iter().chain(graph.out_edges(v)) {
                    out.push(Link {
                        from: a.vertex.0,
                        vertex: a.vertex,
                        weight: a.weight,
                    });
                }
            }
            Kind::Rpq { automaton, .. } => {
                let qn = automaton.state_count();
                let (v, q) = (key / qn, key % qn);
                for a in graph.in_edges(VertexId(v)) {
                    for &p in automaton.prev(q, a.label) {
                        out.push(Link {
                            from: a.vertex.0 * qn + p,
                            vertex: a.vertex,
                            weight: a.weight,
                        });
                    }
                }
            }
        }
    }

    /// Downstream keys that read `key`'s state, one entry per edge.
    pub fn dependents(&self, graph: &Graph, key: Key, out: &mut Vec<Key>) {
        out.clear();
        match &self.kind {
            Kind::Sssp { direction, .. } => {
                let v = VertexId(key);
                let adj = match direction {
                    Direction::Forward => graph.out_edges(v),
                    Direction::Backward => graph.in_edges(v),
                };
                out.extend(adj.iter().map(|a| a.vertex.0));
            }
            Kind::KHop { .. } | Kind::PageRank { .. } => {
                out.extend(graph.out_edges(VertexId(key)).iter().map(|a| a.vertex.0));
            }
            Kind::Wcc => {
                let v = VertexId(key);
                for a in graph.out_edges(v).iter().chain(graph.in_edges(v)) {
                    out.push(a.vertex.0);
                }
            }
            Kind::Rpq { automaton, .. } => {
                let qn = automaton.state_count();
                let (u, q) = (key / qn, key % qn);
                for a in graph.out_edges(VertexId(u)) {
                    for &r in automaton.next(q, a.label) {
                        out.push(a.vertex.0 * qn + r);
                    }
                }
            }
        }
    }

    /// Dataflow links (upstream key, downstream key) whose contribution
    /// changes when `edge` is inserted or deleted. `graph` is the graph after
    /// the change.
    pub fn edge_links(&self, graph: &Graph, edge: &Edge) -> Vec<(Key, Key)> {
        let (s, d) = (edge.src.0, edge.dst.0);
        match &self.kind {
            Kind::Sssp {
                direction: Direction::Forward,
                ..
            }
            | Kind::KHop { .. } => vec![(s, d)],
            Kind::Sssp {
                direction: Direction::Backward,
                ..
            } => vec![(d, s)],
            Kind::Wcc => vec![(s, d), (d, s)],
            Kind::Rpq { automaton, .. } => {
                let qn = automaton.state_count();
                let mut links = Vec::new();
                for q in 0..qn {
                    for &r in automaton.next(q, edge.label) {
                        links.push((s * qn + q, d * qn + r));
                    }
                }
                links
            }
            Kind::PageRank { .. } => {
                // the source's out-degree changed, so every out-neighbor's share moves
                let mut links: Vec<(Key, Key)> = graph
                    .out_edges(edge.src)
                    .iter()
                    .map(|a| (s, a.vertex.0))
                    .collect();
                links.push((s, d));
                links.sort_unstable();
                links.dedup();
                links
            }
        }
    }

    /// The contribution a dependency's state makes across `link`, or `None`
    /// when suppressed.
    pub fn propagate(&self, graph: &Graph, link: &Link, state: StateValue) -> Option<StateValue> {
        match (&self.kind, state) {
            (_, StateValue::Infinite) => None,
            (Kind::Sssp { .. }, StateValue::Dist(d)) => {
                Some(StateValue::Dist(d.saturating_add(link.weight)))
            }
            (Kind::KHop { .. } | Kind::Rpq { .. }, StateValue::Hop(h)) => {
                Some(StateValue::Hop(h + 1))
            }
            (Kind::Wcc, StateValue::Component(c)) => Some(StateValue::Component(c)),
            (Kind::PageRank { .. }, StateValue::Rank(r)) => {
                let deg = graph.out_degree(link.vertex);
                (deg > 0).then(|| StateValue::Rank(r / deg as f64))
            }
            (_, other) => panic!("state {other:?} does not belong to a {} query", self.name()),
        }
    }

    /// Aggregates a seed with a contribution multiset. Contributions are
    /// reordered in place; the result does not depend on their input order.
    pub fn combine(&self, seed: StateValue, contributions: &mut [StateValue]) -> StateValue {
        match self.kind {
            Kind::PageRank { damping, .. } => {
                contributions.sort_unstable();
                let sum: f64 = contributions
                    .iter()
                    .map(|c| c.as_rank().expect("rank contribution"))
                    .sum();
                let base = seed.as_rank().expect("rank seed");
                StateValue::Rank(base + damping * sum)
            }
            _ => contributions.iter().copied().fold(seed, StateValue::min),
        }
    }

    /// Aggregates a reassembled Join collection.
    pub fn aggregate_join(&self, content: &[JoinValue]) -> Result<StateValue> {
        let mut seed = None;
        let mut contributions = Vec::with_capacity(content.len());
        for j in content {
            match *j {
                JoinValue::Seed(s) => {
                    if seed.replace(s).is_some() {
                        return Err(Error::Internal("join collection holds two seeds".into()));
                    }
                }
                JoinValue::Contribution(c) => contributions.push(c),
            }
        }
        let seed = seed.ok_or_else(|| Error::Internal("join collection lacks a seed".into()))?;
        Ok(self.combine(seed, &mut contributions))
    }

    /// Graph vertices answering an RPQ: those reached in an accepting state.
    pub fn rpq_answers(&self, states: &[StateValue]) -> Vec<VertexId> {
        let Kind::Rpq { automaton, .. } = &self.kind else {
            return Vec::new();
        };
        let qn = automaton.state_count() as usize;
        states
            .chunks(qn)
            .enumerate()
            .filter(|(_, chunk)| {
                chunk
                    .iter()
                    .enumerate()
                    .any(|(q, s)| automaton.is_accepting(q as u32) && !s.is_infinite())
            })
            .map(|(v, _)| VertexId(v as u32))
            .collect()
    }
}
