use dcgraph_testkit::{run_trial, QueryKind, Trial};

fn sweep(kind: QueryKind, seeds: std::ops::Range<u64>) {
    for seed in seeds {
        for frac in [0.0, 0.25, 0.5] {
            let trial = Trial::new(seed, kind, frac);
            let report = run_trial(&trial).unwrap_or_else(|e| panic!("{kind:?} seed {seed} frac {frac}: {e}"));
            for (vdc, jod, j) in report.memory {
                assert_eq!(j, 0);
                assert!(jod <= vdc, "{kind:?} seed {seed}: jod {jod} > vdc {vdc}");
            }
        }
    }
}

#[test]
fn shortest_paths_agree_across_engines() {
    sweep(QueryKind::Spsp, 0..8);
}

#[test]
fn khop_agrees_across_engines() {
    sweep(QueryKind::KHop, 100..108);
}

#[test]
fn rpq_agrees_across_engines() {
    sweep(QueryKind::Rpq, 200..208);
}

#[test]
fn wcc_agrees_across_engines() {
    sweep(QueryKind::Wcc, 300..308);
}

#[test]
fn pagerank_agrees_across_engines() {
    sweep(QueryKind::PageRank, 400..408);
}
