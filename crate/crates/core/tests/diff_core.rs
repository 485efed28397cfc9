use dcgraph::diff::*;
use dcgraph::engine::{JodEngine, Maintainer, VdcEngine};
use dcgraph::graph::VertexId;
use dcgraph::query::QueryOperator;
use dcgraph::Error;
use dcgraph_testkit::*;
use proptest::prelude::*;
use StateValue::{Dist, Infinite};

#[test]
fn sum_examples() {
    let a = DiffSet::singleton(Dist(20), 1);
    let b = DiffSet::from_pairs([(Dist(20), -1), (Dist(100), 1)]);
    assert_eq!(diffset_sum([&a, &b]), DiffSet::singleton(Dist(100), 1));
    assert_eq!(diffset_sum([&a, &DiffSet::new()]), a);
    let two = DiffSet::singleton(Dist(40), 2);
    let minus = DiffSet::singleton(Dist(40), -1);
    assert_eq!(diffset_sum([&two, &minus]), DiffSet::singleton(Dist(40), 1));
}

#[test]
fn reassembling_the_example_join_trace() {
    let vdc = VdcEngine::initial_run(&example_graph(), QueryOperator::spsp(VertexId(A))).unwrap();
    let content = vdc.join_trace().reassemble(D, Timestamp2D::new(0, 3));
    let mut values: Vec<StateValue> = content.expand().iter().map(|j| j.value()).collect();
    values.sort();
    assert_eq!(values, vec![Dist(20), Dist(50), Infinite]);
    assert!(DiffTrace2D::<StateValue>::new().reassemble(0, Timestamp2D::new(3, 3)).is_empty());
}

#[test]
fn record_delta_examples() {
    let mut tr = DiffTrace2D::new();
    let t = Timestamp2D::new;
    tr.record_delta(D, t(0, 0), &DiffSet::singleton(Infinite, 1));
    tr.record_delta(D, t(0, 1), &DiffSet::singleton(Dist(20), 1));
    let w = tr.record_delta(D, t(1, 1), &DiffSet::singleton(Dist(100), 1));
    assert_eq!(w, DiffSet::from_pairs([(Dist(20), -1), (Dist(100), 1)]));
    let before = tr.entry_count();
    assert!(tr.record_delta(D, t(1, 2), &DiffSet::singleton(Dist(100), 1)).is_empty());
    assert_eq!(tr.entry_count(), before);

    let mut c = DiffTrace2D::new();
    c.record_delta(C, t(0, 0), &DiffSet::singleton(Infinite, 1));
    c.record_delta(C, t(0, 2), &DiffSet::singleton(Dist(40), 1));
    let w = c.record_delta(C, t(2, 2), &DiffSet::singleton(Dist(120), 1));
    assert_eq!(w, DiffSet::from_pairs([(Dist(40), -1), (Dist(120), 1)]));
}

#[test]
fn elision_examples() {
    let stated = [(1, Dist(100), 1), (3, Dist(100), -1), (3, Dist(50), 1)];
    assert_eq!(elide_negatives(&stated).unwrap(), vec![(1, Dist(100)), (3, Dist(50))]);
    let positive = [(0, Infinite, 1), (2, Dist(4), 1)];
    assert_eq!(elide_negatives(&positive).unwrap(), vec![(0, Infinite), (2, Dist(4))]);
    let broken = [(2, Dist(4), 1), (2, Dist(5), 1)];
    assert!(matches!(elide_negatives(&broken), Err(Error::Internal(_))));
}

#[test]
fn lookup_examples() {
    let m = MergedTrace::from_lists(vec![vec![(0, Infinite), (1, Dist(30))], vec![]]).unwrap();
    assert_eq!(m.lookup_state(0, 3), Some(Dist(30)));
    assert_eq!(m.lookup_state(0, 0), Some(Infinite));
    assert_eq!(m.lookup_state(1, 3), None);
}

#[test]
fn frontier_examples() {
    let mut f = Frontier::new();
    assert!(f.schedule(D, 1));
    assert!(!f.schedule(D, 1));
    assert_eq!(f.drain_next(), Some((1, vec![D])));
    assert_eq!(f.drain_next(), None);
}

#[test]
fn vdc_reassembly_matches_recomputation_at_every_timestamp() {
    for seed in 0..6 {
        let mut r = rng(seed);
        let shape = Shape::new(10, 25);
        let mut g = random_graph(&mut r, &shape);
        let op = QueryOperator::spsp(VertexId(0));
        let mut vdc = VdcEngine::initial_run(&g, op.clone()).unwrap();
        let batches = random_batches(&mut r, &g, &shape, 8, 0.3, 0);
        for step in 0..=batches.len() {
            if step > 0 {
                g.apply_batch(&batches[step - 1]).unwrap();
                vdc.maintain(&g, &batches[step - 1]).unwrap();
            }
            for i in 0..=vdc.max_iteration() + 1 {
                let truth = states_at_iteration(&g, &op, i);
                for k in 0..op.key_count(&g) as u32 {
                    let got = vdc.state_trace().reassemble(k, Timestamp2D::new(g.version(), i));
                    assert_eq!(got, DiffSet::singleton(truth[k as usize], 1), "seed {seed} key {k} iter {i}");
                }
            }
        }
    }
}

#[test]
fn merged_lookup_matches_unmerged_reassembly() {
    for seed in 10..16 {
        let mut r = rng(seed);
        let shape = Shape::new(20, 50);
        let mut g = random_graph(&mut r, &shape);
        let op = QueryOperator::spsp(VertexId(0));
        let mut vdc = VdcEngine::initial_run(&g, op.clone()).unwrap();
        let mut jod = JodEngine::initial_run(&g, op.clone()).unwrap();
        for batch in random_batches(&mut r, &g, &shape, 10, 0.3, 0) {
            g.apply_batch(&batch).unwrap();
            vdc.maintain(&g, &batch).unwrap();
            jod.maintain(&g, &batch).unwrap();
            for k in 0..op.key_count(&g) as u32 {
                for i in 0..=vdc.max_iteration().max(jod.max_iteration()) {
                    let unmerged = vdc.state_trace().reassemble(k, Timestamp2D::new(g.version(), i));
                    let merged = jod.trace().lookup_state(k, i).unwrap();
                    assert_eq!(unmerged, DiffSet::singleton(merged, 1), "seed {seed} key {k} iter {i}");
                }
            }
        }
    }
}

fn small_set() -> impl Strategy<Value = DiffSet<u8>> {
    prop::collection::vec((0u8..6, -3i64..4), 0..8).prop_map(DiffSet::from_pairs)
}

proptest! {
    #[test]
    fn sum_is_associative_and_commutative(a in small_set(), b in small_set(), c in small_set()) {
        let left = diffset_sum([&diffset_sum([&a, &b]), &c]);
        let right = diffset_sum([&a, &diffset_sum([&b, &c])]);
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(diffset_sum([&c, &a, &b]), left);
        prop_assert!(diffset_sum([&a, &a.negated()]).is_empty());
    }

    #[test]
    fn lookup_matches_linear_scan(
        lists in prop::collection::vec(prop::collection::btree_map(0u32..40, 0u64..100, 0..10), 1..6),
        queries in prop::collection::vec((0usize..6, 0u32..45), 1000),
    ) {
        let lists: Vec<Vec<(u32, StateValue)>> = lists
            .iter()
            .map(|m| m.iter().map(|(&i, &d)| (i, Dist(d))).collect())
            .collect();
        let merged = MergedTrace::from_lists(lists.clone()).unwrap();
        for (k, i) in queries {
            let k = k % lists.len();
            let scan = lists[k].iter().rfind(|e| e.0 <= i).map(|e| e.1);
            prop_assert_eq!(merged.lookup_state(k as u32, i), scan);
        }
    }

    #[test]
    fn frontier_drains_in_order_and_once(ops in prop::collection::vec((0u32..8, 0u32..6, any::<bool>()), 1..60)) {
        let mut f = Frontier::new();
        let mut cursor = 0;
        let mut last = None;
        for (key, delta, drain) in ops {
            if drain {
                if let Some((it, keys)) = f.drain_next() {
                    prop_assert!(last.is_none_or(|l| it >= l));
                    let mut sorted = keys.clone();
                    sorted.dedup();
                    prop_assert_eq!(sorted.len(), keys.len());
                    cursor = it;
                    last = Some(it);
                }
            } else {
                f.schedule(key, cursor + delta);
            }
        }
    }
}
