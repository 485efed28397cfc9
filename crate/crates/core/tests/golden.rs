use dcgraph::diff::StateValue;
use dcgraph::dropping::{DropConfig, DropPolicy, StoreKind};
use dcgraph::engine::{JodEngine, Maintainer, MemoryModel, VdcEngine};
use dcgraph::graph::{Graph, VertexId};
use dcgraph::query::QueryOperator;
use dcgraph_testkit::*;
use std::collections::HashSet;

fn distances(states: &[StateValue]) -> Vec<u64> {
    states.iter().map(|s| s.as_dist().unwrap_or(u64::MAX)).collect()
}

fn spsp_a() -> QueryOperator {
    QueryOperator::spsp(VertexId(A))
}

#[test]
fn vdc_trace_matches_hand_derivation_per_version() {
    let mut g = example_graph();
    let mut vdc = VdcEngine::initial_run(&g, spsp_a()).unwrap();
    assert_eq!(vdc.dump(example_name), example_trace_through(0));
    assert_eq!(distances(vdc.final_states()), EXAMPLE_DISTANCES[0]);
    for (i, batch) in example_batches().iter().enumerate() {
        g.apply_batch(batch).unwrap();
        vdc.maintain(&g, batch).unwrap();
        assert_eq!(vdc.dump(example_name), example_trace_through(batch.version), "version {}", i + 1);
        assert_eq!(distances(vdc.final_states()), EXAMPLE_DISTANCES[i + 1]);
    }
    let report = vdc.memory(&MemoryModel::default());
    assert_eq!((report.join_entries, report.state_entries), (29, 21));
    assert_eq!(tally(&vdc.dump(example_name)), (29, 21));
}

#[test]
fn vdc_output_diffs_are_net_changes() {
    let mut g = example_graph();
    let mut vdc = VdcEngine::initial_run(&g, spsp_a()).unwrap();
    let batches = example_batches();
    g.apply_batch(&batches[0]).unwrap();
    let out = vdc.maintain(&g, &batches[0]).unwrap();
    let got: Vec<(u32, StateValue, i8)> = out.iter().map(|c| (c.key, c.state, c.sign)).collect();
    assert_eq!(got, vec![(D, StateValue::Dist(20), -1), (D, StateValue::Dist(50), 1)]);
}

#[test]
fn jod_merged_row_one_after_second_batch_first_row() {
    let mut g = example_graph();
    let mut jod = JodEngine::initial_run(&g, spsp_a()).unwrap();
    let batches = example_batches();
    g.apply_batch(&batches[0]).unwrap();
    jod.maintain(&g, &batches[0]).unwrap();
    assert_eq!(
        jod.trace().entries(D),
        &[(0, StateValue::Infinite), (1, StateValue::Dist(100)), (3, StateValue::Dist(50))]
    );
    g.apply_batch(&batches[1]).unwrap();
    let mut row_one = None;
    // Row 1 is final once the drain reaches it or passes it, whether or not
    // anything at row 1 itself needed recomputation.
    jod.maintain_observed(&g, &batches[1], &mut |row, trace| {
        if row >= 1 && row_one.is_none() {
            row_one = Some(trace.row(1));
        }
    })
    .unwrap();
    assert_eq!(
        row_one.unwrap(),
        vec![(B, StateValue::Dist(30)), (D, StateValue::Dist(100)), (E, StateValue::Dist(10))]
    );
    assert_eq!(jod.trace().entries(D), &[(0, StateValue::Infinite), (1, StateValue::Dist(100))]);
    assert_eq!(distances(jod.final_states()), EXAMPLE_DISTANCES[2]);
}

#[test]
fn jod_reruns_cover_vdc_reruns_on_the_example() {
    let mut g = example_graph();
    let mut vdc = VdcEngine::initial_run(&g, spsp_a()).unwrap();
    let mut jod = JodEngine::initial_run(&g, spsp_a()).unwrap();
    vdc.record_reruns(true);
    jod.record_reruns(true);
    for batch in example_batches() {
        g.apply_batch(&batch).unwrap();
        vdc.maintain(&g, &batch).unwrap();
        jod.maintain(&g, &batch).unwrap();
        let v: HashSet<_> = vdc.take_reruns().into_iter().collect();
        let j: HashSet<_> = jod.take_reruns().into_iter().collect();
        assert!(v.is_subset(&j), "vdc {v:?} jod {j:?}");
    }
}

#[test]
fn first_batch_reruns_d_at_zero_then_c_and_e() {
    let mut g = example_graph();
    let mut jod = JodEngine::initial_run(&g, spsp_a()).unwrap();
    jod.record_reruns(true);
    let batch = &example_batches()[0];
    g.apply_batch(batch).unwrap();
    jod.maintain(&g, batch).unwrap();
    let reruns = jod.take_reruns();
    for needed in [(D, 0), (D, 1), (C, 2), (E, 2), (D, 3)] {
        assert!(reruns.contains(&needed), "{needed:?} missing from {reruns:?}");
    }
}

#[test]
fn jod_initial_trace_is_elided_vdc_column() {
    let g = example_graph();
    let jod = JodEngine::initial_run(&g, spsp_a()).unwrap();
    let inf = StateValue::Infinite;
    assert_eq!(jod.trace().entries(A), &[(0, StateValue::Dist(0))]);
    assert_eq!(jod.trace().entries(B), &[(0, inf), (1, StateValue::Dist(30))]);
    assert_eq!(jod.trace().entries(C), &[(0, inf), (2, StateValue::Dist(40))]);
    assert_eq!(jod.trace().entries(D), &[(0, inf), (1, StateValue::Dist(20))]);
    assert_eq!(jod.trace().entries(E), &[(0, inf), (1, StateValue::Dist(10))]);
    assert_eq!(jod.memory(&MemoryModel::default()).join_entries, 0);
}

#[test]
fn dropping_b_at_one_recomputes_it_during_second_batch() {
    let mut g = example_graph();
    let plain_policy = DropPolicy::listed([(B, 1)]);
    let cfg = DropConfig {
        policy: plain_policy,
        store: StoreKind::Det,
    };
    let mut dropped = JodEngine::initial_run_with_drops(&g, spsp_a(), cfg).unwrap();
    let mut plain = JodEngine::initial_run(&g, spsp_a()).unwrap();
    assert!(dropped.trace().stored_at(B, 1).is_none());
    assert!(dropped.dropped_store().unwrap().contains(B, 1));
    for batch in example_batches() {
        g.apply_batch(&batch).unwrap();
        let a = dropped.maintain(&g, &batch).unwrap();
        let b = plain.maintain(&g, &batch).unwrap();
        assert_eq!(a, b);
        assert_eq!(dropped.final_states(), plain.final_states());
    }
    assert!(dropped.counters().recomputations > 0);
    assert_eq!(dropped.read_state(&g, B, 1).unwrap(), StateValue::Dist(30));
}

#[test]
fn scratch_on_first_version_gives_fifty_for_d() {
    let mut g = example_graph();
    g.apply_batch(&example_batches()[0]).unwrap();
    let (states, _) = dcgraph::baselines::scratch_run(&g, &spsp_a()).unwrap();
    assert_eq!(states[D as usize], StateValue::Dist(50));
}

#[test]
fn empty_graph_wcc_has_empty_traces() {
    let g = Graph::new();
    let vdc = VdcEngine::initial_run(&g, QueryOperator::wcc()).unwrap();
    assert_eq!(vdc.memory(&MemoryModel::default()).total_entries(), 0);
    assert_eq!(vdc.max_iteration(), 1);
}

#[test]
fn swapped_weights_cause_a_harmless_extra_rerun() {
    // s=0 reaches w1=1 and w2=2 in one step; both feed u=3
    let mut g = Graph::from_edges(
        4,
        &[
            dcgraph::graph::Edge::new(0, 1, 1),
            dcgraph::graph::Edge::new(0, 2, 1),
            dcgraph::graph::Edge::new(1, 3, 10),
            dcgraph::graph::Edge::new(2, 3, 20),
        ],
    );
    let op = QueryOperator::spsp(VertexId(0));
    let mut vdc = VdcEngine::initial_run(&g, op.clone()).unwrap();
    let mut jod = JodEngine::initial_run(&g, op).unwrap();
    vdc.record_reruns(true);
    jod.record_reruns(true);
    use dcgraph::graph::{Edge, EdgeUpdate, UpdateBatch};
    let batch = UpdateBatch::new(
        1,
        vec![
            EdgeUpdate::delete(Edge::new(1, 3, 10)),
            EdgeUpdate::insert(Edge::new(1, 3, 20)),
            EdgeUpdate::delete(Edge::new(2, 3, 20)),
            EdgeUpdate::insert(Edge::new(2, 3, 10)),
        ],
    );
    g.apply_batch(&batch).unwrap();
    assert!(vdc.maintain(&g, &batch).unwrap().is_empty());
    assert!(jod.maintain(&g, &batch).unwrap().is_empty());
    assert!(!vdc.take_reruns().contains(&(3, 2)));
    assert!(jod.take_reruns().contains(&(3, 2)));
    assert_eq!(vdc.final_states(), jod.final_states());
    assert_eq!(jod.final_states()[3], StateValue::Dist(11));
}
