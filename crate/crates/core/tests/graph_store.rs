use dcgraph::graph::*;
use dcgraph::Error;
use dcgraph_testkit::*;
use proptest::prelude::*;

fn temp_file(name: &str, text: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("dcgraph-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn example_edge_list_loads() {
    let path = temp_file("example.txt", EXAMPLE_EDGE_LIST);
    let (g, list) = load_edge_list(&path, true, false).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count()), (5, 7));
    assert_eq!(list.vertex("d"), Some(VertexId(D)));
    let mut edges: Vec<Edge> = g.edges().collect();
    let mut want = example_edges();
    edges.sort();
    want.sort();
    assert_eq!(edges, want);
    std::fs::remove_file(path).ok();
}

#[test]
fn empty_and_malformed_files() {
    let path = temp_file("empty.txt", "");
    let (g, _) = load_edge_list(&path, true, false).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count()), (0, 0));
    std::fs::remove_file(path).ok();

    assert!(matches!(parse_edge_list("3 5 x\n", true, false), Err(Error::Parse { line: 1, .. })));
    assert!(matches!(parse_edge_list("1 2 3\n3 5 -4\n", true, false), Err(Error::Validation { line: 2, .. })));
    assert!(matches!(
        load_edge_list(std::path::Path::new("/nonexistent/edges"), true, false),
        Err(Error::Io { .. })
    ));
}

#[test]
fn comments_duplicates_and_unweighted_defaults() {
    let list = parse_edge_list("# header\nx y\nx y\ny z\n", false, false).unwrap();
    let g = list.graph();
    assert_eq!(g.edge_count(), 3);
    assert!(g.edges().all(|e| e.weight == 1));
    assert_eq!(g.out_degree(VertexId(0)), 2);
}

#[test]
fn scripted_batches_apply() {
    let mut g = example_graph();
    let batches = example_batches();
    g.apply_batch(&batches[0]).unwrap();
    assert!(g.contains_edge(&Edge::new(A, D, 100)));
    assert!(!g.contains_edge(&Edge::new(A, D, 20)));
    assert_eq!(g.version(), 1);

    let before: Vec<Edge> = g.edges().collect();
    g.apply_batch(&UpdateBatch::new(2, vec![])).unwrap();
    assert_eq!(g.version(), 2);
    assert_eq!(g.edges().collect::<Vec<_>>(), before);
}

#[test]
fn bad_batches_are_rejected_atomically() {
    let mut g = example_graph();
    let z = 9;
    let bad = UpdateBatch::new(
        1,
        vec![EdgeUpdate::insert(Edge::new(A, B, 7)), EdgeUpdate::delete(Edge::new(A, z, 5))],
    );
    match g.apply_batch(&bad) {
        Err(Error::Update(msg)) => assert!(msg.contains("entry 1"), "{msg}"),
        other => panic!("{other:?}"),
    }
    assert_eq!(g.edge_count(), 7);
    assert_eq!(g.vertex_count(), 5);
    assert_eq!(g.version(), 0);
    assert!(matches!(
        g.apply_batch(&UpdateBatch::new(3, vec![])),
        Err(Error::Sequencing { expected: 1, found: 3 })
    ));
}

#[test]
fn update_stream_round_trips() {
    let mut list = parse_edge_list(EXAMPLE_EDGE_LIST, true, false).unwrap();
    let batches = parse_update_stream(EXAMPLE_UPDATE_STREAM, &mut list.vertices, &mut list.labels, false, 1).unwrap();
    assert_eq!(batches, example_batches());
    let text = write_update_stream(&batches, &list.vertices, &list.labels);
    let again = parse_update_stream(&text, &mut list.vertices, &mut list.labels, false, 1).unwrap();
    assert_eq!(again, batches);
}

#[test]
fn dynamism_split() {
    let edges: Vec<Edge> = (0..100).map(|i| Edge::new(i, i + 1, 1)).collect();
    let (init, stream) = split_for_dynamism(&edges, 42, 0.9).unwrap();
    assert_eq!((init.len(), stream.len()), (90, 10));
    assert_eq!(split_for_dynamism(&edges, 42, 0.9).unwrap(), (init, stream));
    let (init, stream) = split_for_dynamism(&edges[..1], 42, 0.9).unwrap();
    assert_eq!((init.len(), stream.len()), (0, 1));
    assert!(split_for_dynamism(&edges, 1, 1.0).is_err());
}

fn deletion_counts(frac: f64) -> (usize, usize) {
    let mut r = rng(5);
    let g = random_graph(&mut r, &Shape::new(40, 300));
    let stream: Vec<Edge> = (0..100).map(|i| Edge::new(i % 40, (i * 7) % 40, 3)).collect();
    let batches = insertion_batches(&stream, 1, 100, 1);
    let out = make_deletion_workload(&g, &batches, frac, 9).unwrap();
    assert_eq!(out.len(), 100);
    let mut replay = g.clone();
    for b in &out {
        replay.apply_batch(b).unwrap();
    }
    let deletions = out.iter().filter(|b| b.entries.iter().all(|u| u.sign == Sign::Minus)).count();
    (deletions, 100 - deletions)
}

#[test]
fn deletion_workload_fractions() {
    assert_eq!(deletion_counts(0.25), (25, 75));
    assert_eq!(deletion_counts(0.5), (50, 50));
    assert_eq!(deletion_counts(0.0), (0, 100));
    let empty = Graph::with_vertices(3);
    let batches = insertion_batches(&[Edge::new(0, 1, 1)], 1, 1, 1);
    assert!(matches!(make_deletion_workload(&empty, &batches, 1.0, 1), Err(Error::Workload(_))));
}

proptest! {
    #[test]
    fn inverse_replay_restores_the_graph(seed in 0u64..10_000, count in 1usize..15) {
        let mut r = rng(seed);
        let shape = Shape::new(12, 30).labels(2);
        let original = random_graph(&mut r, &shape);
        let batches = random_batches(&mut r, &original, &shape, count, 0.4, 3);
        let mut g = original.clone();
        for b in &batches {
            g.apply_batch(b).unwrap();
            g.check_consistency().unwrap();
            let out: usize = g.vertices().map(|v| g.out_degree(v)).sum();
            let inn: usize = g.vertices().map(|v| g.in_degree(v)).sum();
            prop_assert_eq!(out, g.edge_count());
            prop_assert_eq!(inn, g.edge_count());
        }
        let mut version = g.version();
        for b in batches.iter().rev() {
            version += 1;
            g.apply_batch(&b.inverse(version)).unwrap();
        }
        let mut a: Vec<Edge> = g.edges().collect();
        let mut b: Vec<Edge> = original.edges().collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }
}
