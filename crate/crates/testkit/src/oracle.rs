use dcgraph::diff::StateValue;
use dcgraph::graph::{Graph, VertexId};
use dcgraph::query::{Direction, LabelAutomaton, QuerySpec};
use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};

/// Dijkstra distances from `source`, or to it when `direction` is backward.
pub fn dijkstra(graph: &Graph, source: VertexId, direction: Direction) -> Vec<StateValue> {
    let n = graph.vertex_count();
    let mut dist = vec![u64::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[source.index()] = 0;
    heap.push(Reverse((0u64, source.0)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > dist[v as usize] {
            continue;
        }
        let adj = match direction {
            Direction::Forward => graph.out_edges(VertexId(v)),
            Direction::Backward => graph.in_edges(VertexId(v)),
        };
        for e in adj {
            let nd = d + e.weight;
            if nd < dist[e.vertex.index()] {
                dist[e.vertex.index()] = nd;
                heap.push(Reverse((nd, e.vertex.0)));
            }
        }
    }
    dist.into_iter()
        .map(|d| if d == u64::MAX { StateValue::Infinite } else { StateValue::Dist(d) })
        .collect()
}

/// Breadth-first hop counts from `source`, cut off beyond `k_max`.
pub fn bfs_hops(graph: &Graph, source: VertexId, k_max: u32) -> Vec<StateValue> {
    let mut hops = vec![StateValue::Infinite; graph.vertex_count()];
    hops[source.index()] = StateValue::Hop(0);
    let mut queue = VecDeque::from([(source, 0u32)]);
    while let Some((v, h)) = queue.pop_front() {
        if h == k_max {
            continue;
        }
        for e in graph.out_edges(v) {
            if hops[e.vertex.index()].is_infinite() {
                hops[e.vertex.index()] = StateValue::Hop(h + 1);
                queue.push_back((e.vertex, h + 1));
            }
        }
    }
    hops
}

/// Smallest vertex id in each weakly connected component, via union-find.
pub fn union_find_components(graph: &Graph) -> Vec<StateValue> {
    let n = graph.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in graph.edges() {
        let a = find(&mut parent, e.src.index());
        let b = find(&mut parent, e.dst.index());
        // the smaller root wins so every root is its component's minimum
        if a < b {
            parent[b] = a;
        } else if b < a {
            parent[a] = b;
        }
    }
    (0..n)
        .map(|v| StateValue::Component(find(&mut parent, v) as u32))
        .collect()
}

/// Truncated power iteration: r_0 = 1/N, then
/// r_i(v) = (1-d)/N + d * sum over in-edges (u, v) of r_{i-1}(u) / out_degree(u).
/// Dangling vertices lose their mass.
pub fn power_iteration(graph: &Graph, iterations: u32, damping: f64) -> Vec<f64> {
    let n = graph.vertex_count();
    let mut r = vec![1.0 / n as f64; n];
    for _ in 0..iterations {
        let mut next = vec![(1.0 - damping) / n as f64; n];
        let mut acc = vec![0.0; n];
        for e in graph.edges() {
            acc[e.dst.index()] += r[e.src.index()] / graph.out_degree(e.src) as f64;
        }
        for v in 0..n {
            next[v] += damping * acc[v];
        }
        r = next;
    }
    r
}

/// The same iteration as [`power_iteration`] with an explicit dense
/// transition matrix, for small graphs.
pub fn dense_power_iteration(graph: &Graph, iterations: u32, damping: f64) -> Vec<f64> {
    let n = graph.vertex_count();
    let mut m = vec![vec![0.0; n]; n];
    for e in graph.edges() {
        m[e.dst.index()][e.src.index()] += 1.0 / graph.out_degree(e.src) as f64;
    }
    let mut r = vec![1.0 / n as f64; n];
    for _ in 0..iterations {
        r = (0..n)
            .map(|v| (1.0 - damping) / n as f64 + damping * (0..n).map(|u| m[v][u] * r[u]).sum::<f64>())
            .collect();
    }
    r
}

/// BFS over the product of the graph and the automaton. Entry
/// `v * states + q` holds the level at which (v, q) is first reached.
pub fn product_bfs(graph: &Graph, source: VertexId, automaton: &LabelAutomaton) -> Vec<StateValue> {
    let q = automaton.state_count() as usize;
    let mut level = vec![StateValue::Infinite; graph.vertex_count() * q];
    let start = source.index() * q + automaton.start() as usize;
    level[start] = StateValue::Hop(0);
    let mut queue = VecDeque::from([(source, automaton.start(), 0u32)]);
    while let Some((v, s, h)) = queue.pop_front() {
        for e in graph.out_edges(v) {
            for &t in automaton.next(s, e.label) {
                let slot = &mut level[e.vertex.index() * q + t as usize];
                if slot.is_infinite() {
                    *slot = StateValue::Hop(h + 1);
                    queue.push_back((e.vertex, t, h + 1));
                }
            }
        }
    }
    level
}

/// Vertices reachable from `source` in an accepting automaton state.
pub fn rpq_answer_oracle(graph: &Graph, source: VertexId, automaton: &LabelAutomaton) -> BTreeSet<VertexId> {
    let q = automaton.state_count() as usize;
    product_bfs(graph, source, automaton)
        .iter()
        .enumerate()
        .filter(|(k, s)| !s.is_infinite() && automaton.is_accepting((k % q) as u32))
        .map(|(k, _)| VertexId((k / q) as u32))
        .collect()
}

/// Endpoints of every walk from `source` whose label sequence is exactly
/// `labels`, found by enumerating walks step by step.
pub fn labeled_path_endpoints(graph: &Graph, source: VertexId, labels: &[u32]) -> BTreeSet<VertexId> {
    let mut current: BTreeSet<VertexId> = BTreeSet::from([source]);
    for &l in labels {
        current = current
            .iter()
            .flat_map(|&v| graph.out_edges(v).iter().filter(|e| e.label == l).map(|e| e.vertex))
            .collect();
    }
    current
}

/// Converged per-key states the engines must produce for `spec`. PageRank
/// states are returned as ranks and must be compared with a tolerance.
pub fn oracle_states(graph: &Graph, spec: &QuerySpec) -> Vec<StateValue> {
    match spec {
        QuerySpec::Spsp { source, .. } => dijkstra(graph, *source, Direction::Forward),
        QuerySpec::KHop { source, k_max } => bfs_hops(graph, *source, *k_max),
        QuerySpec::Rpq { source, automaton } => product_bfs(graph, *source, automaton),
        QuerySpec::Wcc => union_find_components(graph),
        QuerySpec::PageRank { iterations, damping } => power_iteration(graph, *iterations, *damping)
            .into_iter()
            .map(StateValue::Rank)
            .collect(),
    }
}

/// Compares two state vectors: exact for integer states, within `tol` for ranks.
pub fn states_match(a: &[StateValue], b: &[StateValue], tol: f64) -> Result<(), String> {
    if a.len() != b.len() {
        return Err(format!("length {} vs {}", a.len(), b.len()));
    }
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        let ok = match (x, y) {
            (StateValue::Rank(p), StateValue::Rank(q)) => (p - q).abs() <= tol,
            _ => x == y,
        };
        if !ok {
            return Err(format!("key {k}: {x} vs {y}"));
        }
    }
    Ok(())
}

/// States after exactly `i` synchronous rounds of the operator on `graph`,
/// recomputed from nothing. Fixpoint operators keep their converged value
/// for every `i` past convergence.
pub fn states_at_iteration(graph: &Graph, op: &dcgraph::query::QueryOperator, i: u32) -> Vec<StateValue> {
    let n = op.key_count(graph);
    let mut cur: Vec<StateValue> = (0..n as u32).map(|k| op.init(graph, k)).collect();
    let mut links = Vec::new();
    for round in 1..=i {
        cur = (0..n as u32)
            .map(|v| {
                op.dependencies(graph, v, &mut links);
                let mut contributions: Vec<StateValue> = links
                    .iter()
                    .filter_map(|l| op.propagate(graph, l, cur[l.from as usize]))
                    .collect();
                op.combine(op.seed(graph, v, round), &mut contributions)
            })
            .collect();
    }
    cur
}
