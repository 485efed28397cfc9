use dcgraph::baselines::scratch_run;
use dcgraph::diff::StateValue::{self, Component, Dist, Hop, Infinite, Rank};
use dcgraph::engine::{JodEngine, Maintainer, VdcEngine};
use dcgraph::graph::{parse_edge_list, Edge, Graph, VertexId};
use dcgraph::query::*;
use dcgraph::Error;
use dcgraph_testkit::*;
use rand::Rng;
use std::collections::BTreeSet;

/// Runs both engines and checks they agree before returning the states.
fn converge(g: &Graph, op: QueryOperator) -> Vec<StateValue> {
    let vdc = VdcEngine::initial_run(g, op.clone()).unwrap();
    let jod = JodEngine::initial_run(g, op).unwrap();
    assert_eq!(vdc.final_states(), jod.final_states());
    jod.final_states().to_vec()
}

fn unweighted_example() -> Graph {
    let edges: Vec<Edge> = example_edges().into_iter().map(|e| Edge::new(e.src.0, e.dst.0, 1)).collect();
    Graph::from_edges(5, &edges)
}

#[test]
fn spsp_examples() {
    let d = converge(&example_graph(), QueryOperator::spsp(VertexId(A)));
    assert_eq!(d, EXAMPLE_DISTANCES[0].map(Dist).to_vec());
    let single = Graph::with_vertices(1);
    let vdc = VdcEngine::initial_run(&single, QueryOperator::spsp(VertexId(0))).unwrap();
    assert_eq!(vdc.final_states(), &[Dist(0)]);
    assert_eq!(vdc.max_iteration(), 1);
    for seed in 0..5 {
        let mut r = rng(seed);
        let g = random_graph(&mut r, &Shape::new(30, 90));
        let s = VertexId(r.gen_range(0..30));
        assert_eq!(converge(&g, QueryOperator::spsp(s)), dijkstra(&g, s, Direction::Forward));
    }
}

#[test]
fn khop_examples() {
    let g = unweighted_example();
    let got = converge(&g, QueryOperator::khop(VertexId(A), 1));
    assert_eq!(got, vec![Hop(0), Hop(1), Infinite, Hop(1), Hop(1)]);
    let isolated = Graph::from_edges(3, &[Edge::new(1, 2, 1)]);
    assert_eq!(converge(&isolated, QueryOperator::khop(VertexId(0), 1)), vec![Hop(0), Infinite, Infinite]);
    for seed in 0..5 {
        let mut r = rng(seed);
        let g = random_graph(&mut r, &Shape::new(30, 60));
        let s = VertexId(r.gen_range(0..30));
        assert_eq!(converge(&g, QueryOperator::khop(s, 5)), bfs_hops(&g, s, 5));
    }
}

#[test]
fn rpq_examples() {
    let list = parse_edge_list("s x 1 a\nx y 1 a\n", true, true).unwrap();
    let g = list.graph();
    let a = list.labels.get("a").unwrap();
    let op = QueryOperator::rpq(VertexId(0), LabelAutomaton::q1(a));
    let answers = op.rpq_answers(&converge(&g, op.clone()));
    assert_eq!(answers, vec![VertexId(0), VertexId(1), VertexId(2)]);

    // start state accepting: the source always answers
    let aut = LabelAutomaton::new(2, 0, &[0], &[(0, 7, 1)]).unwrap();
    let op = QueryOperator::rpq(VertexId(0), aut);
    assert!(op.rpq_answers(&converge(&example_graph(), op.clone())).contains(&VertexId(0)));

    for seed in 0..8 {
        let mut r = rng(seed);
        let g = random_graph(&mut r, &Shape::new(25, 120).labels(5));
        let s = VertexId(r.gen_range(0..25));
        let seq = [0, 1, 2, 3, 4];
        let op = QueryOperator::rpq(s, LabelAutomaton::q3(seq));
        let got: BTreeSet<VertexId> = op.rpq_answers(&converge(&g, op.clone())).into_iter().collect();
        assert_eq!(got, labeled_path_endpoints(&g, s, &seq), "seed {seed}");
        let q2 = LabelAutomaton::q2(0, 1);
        let op = QueryOperator::rpq(s, q2.clone());
        let got: BTreeSet<VertexId> = op.rpq_answers(&converge(&g, op.clone())).into_iter().collect();
        assert_eq!(got, rpq_answer_oracle(&g, s, &q2), "seed {seed}");
    }
}

#[test]
fn unknown_rpq_label_is_a_compile_error() {
    let list = parse_edge_list("s x 1 a\n", true, true).unwrap();
    let err = parse_query_file("rpq s Q1 zz\n", &list.vertices, &list.labels).unwrap_err();
    assert!(matches!(err, Error::QueryCompile(_)));
}

#[test]
fn wcc_examples() {
    assert_eq!(converge(&example_graph(), QueryOperator::wcc()), vec![Component(0); 5]);
    let edgeless = Graph::with_vertices(4);
    assert_eq!(converge(&edgeless, QueryOperator::wcc()), (0..4).map(Component).collect::<Vec<_>>());
    let mut r = rng(3);
    let mut edges = Vec::new();
    for (lo, hi) in [(0u32, 10u32), (10, 20), (20, 30)] {
        for _ in 0..15 {
            edges.push(Edge::new(r.gen_range(lo..hi), r.gen_range(lo..hi), 1));
        }
    }
    let g = Graph::from_edges(30, &edges);
    assert_eq!(converge(&g, QueryOperator::wcc()), union_find_components(&g));
}

fn ranks(states: &[StateValue]) -> Vec<f64> {
    states.iter().map(|s| s.as_rank().unwrap()).collect()
}

#[test]
fn pagerank_examples() {
    let cycle = Graph::from_edges(2, &[Edge::new(0, 1, 1), Edge::new(1, 0, 1)]);
    assert_eq!(converge(&cycle, QueryOperator::pagerank(10, 0.85)), vec![Rank(0.5), Rank(0.5)]);

    let chain = Graph::from_edges(3, &[Edge::new(0, 1, 1), Edge::new(1, 2, 1)]);
    let got = ranks(&converge(&chain, QueryOperator::pagerank(10, 0.85)));
    for (x, y) in got.iter().zip(dense_power_iteration(&chain, 10, 0.85)) {
        assert!((x - y).abs() <= 1e-12, "{x} vs {y}");
    }
    let g = example_graph();
    let got = ranks(&converge(&g, QueryOperator::pagerank(10, 0.85)));
    for (x, y) in got.iter().zip(power_iteration(&g, 10, 0.85)) {
        assert!((x - y).abs() <= 1e-12, "{x} vs {y}");
    }
    assert!(matches!(
        VdcEngine::initial_run(&Graph::new(), QueryOperator::pagerank(10, 0.85)),
        Err(Error::QueryCompile(_))
    ));
}

#[test]
fn aggregation_ignores_contribution_order() {
    let mut r = rng(11);
    for op in [QueryOperator::spsp(VertexId(0)), QueryOperator::pagerank(10, 0.85)] {
        for _ in 0..50 {
            let pr = op.name() == "pagerank";
            let mut items: Vec<StateValue> = (0..8)
                .map(|_| if pr { Rank(r.gen_range(0.0..1.0)) } else { Dist(r.gen_range(0..100)) })
                .collect();
            let seed = if pr { Rank(0.01) } else { Infinite };
            let first = op.combine(seed, &mut items.clone());
            use rand::seq::SliceRandom;
            items.shuffle(&mut r);
            assert_eq!(op.combine(seed, &mut items), first);
        }
    }
}

#[test]
fn suppressed_infinite_contributions_do_not_matter() {
    // min over {init} plus finite contributions equals min including infinities
    let op = QueryOperator::spsp(VertexId(0));
    let finite = op.combine(Infinite, &mut [Dist(4), Dist(9)]);
    let with_inf = op.combine(Infinite, &mut [Dist(4), Infinite, Dist(9), Infinite]);
    assert_eq!(finite, with_inf);
}

#[test]
fn query_file_parses_every_kind() {
    let mut list = parse_edge_list("a b 1 x\nb c 1 y\n", true, true).unwrap();
    list.labels.intern("z");
    let text = "# queries\nspsp a c\nkhop a 5\nrpq a Q2 x y\nwcc\npagerank\npagerank 20 0.9\n";
    let specs = parse_query_file(text, &list.vertices, &list.labels).unwrap();
    let kinds: Vec<&str> = specs.iter().map(|s| s.kind_name()).collect();
    assert_eq!(kinds, ["spsp", "khop", "rpq", "wcc", "pagerank", "pagerank"]);
    assert_eq!(specs[5], QuerySpec::PageRank { iterations: 20, damping: 0.9 });
    assert!(matches!(
        parse_query_file("khop a\n", &list.vertices, &list.labels),
        Err(Error::Parse { line: 1, .. })
    ));
}

#[test]
fn scratch_matches_every_oracle() {
    for seed in 0..10 {
        for kind in QueryKind::ALL {
            let mut r = rng(seed);
            let g = random_graph(&mut r, &Shape::new(20, 60).labels(3));
            let spec = random_spec(&mut r, &g, kind);
            let (states, _) = scratch_run(&g, &spec.operator()).unwrap();
            states_match(&states, &oracle_states(&g, &spec), 1e-12).unwrap();
        }
    }
    let (single, _) = scratch_run(&Graph::with_vertices(1), &QueryOperator::wcc()).unwrap();
    assert_eq!(single, vec![Component(0)]);
}
