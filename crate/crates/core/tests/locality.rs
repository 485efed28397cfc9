use dcgraph::engine::{JodEngine, Maintainer, VdcEngine};
use dcgraph::graph::{Edge, EdgeUpdate, Graph, UpdateBatch, VertexId};
use dcgraph::query::QueryOperator;
use dcgraph_testkit::*;
use rand::Rng;

/// A batch of inserts, deletes and weight changes confined to `lo..hi`.
fn local_batch(r: &mut impl Rng, g: &Graph, lo: u32, hi: u32, version: u64) -> UpdateBatch {
    let mut entries = Vec::new();
    let inside: Vec<Edge> = g.edges().filter(|e| e.src.0 >= lo).collect();
    for _ in 0..r.gen_range(1..=3) {
        match r.gen_range(0..3) {
            0 if !inside.is_empty() => {
                let e = inside[r.gen_range(0..inside.len())];
                if !entries.iter().any(|u: &EdgeUpdate| u.edge == e) {
                    entries.push(EdgeUpdate::delete(e));
                }
            }
            _ => {
                let e = Edge::new(r.gen_range(lo..hi), r.gen_range(lo..hi), r.gen_range(1..=10));
                if !g.contains_edge(&e) && !entries.iter().any(|u: &EdgeUpdate| u.edge == e) {
                    entries.push(EdgeUpdate::insert(e));
                }
            }
        }
    }
    UpdateBatch::new(version, entries)
}

#[test]
fn updates_in_a_disjoint_component_rerun_nothing() {
    for trial in 0..50u64 {
        let mut r = rng(1000 + trial);
        let split = r.gen_range(5..20);
        let mut g = two_component_graph(&mut r, split, 40, 60);
        let op = QueryOperator::spsp(VertexId(r.gen_range(0..split)));
        let mut jod = JodEngine::initial_run(&g, op.clone()).unwrap();
        let mut vdc = VdcEngine::initial_run(&g, op).unwrap();
        jod.record_reruns(true);
        vdc.record_reruns(true);
        for version in 1..=5 {
            let b = local_batch(&mut r, &g, split, 40, version);
            g.apply_batch(&b).unwrap();
            let (j0, v0) = (jod.counters(), vdc.counters());
            assert!(jod.maintain(&g, &b).unwrap().is_empty());
            assert!(vdc.maintain(&g, &b).unwrap().is_empty());
            let (j1, v1) = (jod.counters(), vdc.counters());
            assert_eq!(j1.aggregate_reruns, j0.aggregate_reruns, "trial {trial} version {version}: {:?}", jod.take_reruns());
            assert_eq!(v1.aggregate_reruns, v0.aggregate_reruns, "trial {trial} version {version}: {:?}", vdc.take_reruns());
        }
    }
}
