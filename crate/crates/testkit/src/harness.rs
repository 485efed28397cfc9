//! Randomized cross-engine trials: every engine variant is driven over the
//! same update stream and compared against the oracles after each batch.

use crate::gen::{random_batches, random_graph, rng, Shape};
use crate::oracle::{oracle_states, states_match};
use dcgraph::baselines::scratch_run;
use dcgraph::diff::StateValue;
use dcgraph::dropping::{BloomConfig, DropConfig, DropPolicy, StoreKind};
use dcgraph::engine::{JodEngine, Maintainer, MemoryModel, VdcEngine};
use dcgraph::graph::{Graph, VertexId};
use dcgraph::query::{LabelAutomaton, QuerySpec};
use rand::Rng;
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryKind {
    Spsp,
    KHop,
    Rpq,
    Wcc,
    PageRank,
}

impl QueryKind {
    pub const ALL: [QueryKind; 5] = [
        QueryKind::Spsp,
        QueryKind::KHop,
        QueryKind::Rpq,
        QueryKind::Wcc,
        QueryKind::PageRank,
    ];
}

pub fn random_spec(rng: &mut impl Rng, graph: &Graph, kind: QueryKind) -> QuerySpec {
    let n = graph.vertex_count().max(1) as u32;
    let source = VertexId(rng.gen_range(0..n));
    match kind {
        QueryKind::Spsp => QuerySpec::Spsp {
            source,
            target: VertexId(rng.gen_range(0..n)),
        },
        QueryKind::KHop => QuerySpec::KHop {
            source,
            k_max: rng.gen_range(1..=5),
        },
        QueryKind::Rpq => {
            let automaton = match rng.gen_range(0..3) {
                0 => LabelAutomaton::q1(0),
                1 => LabelAutomaton::q2(0, 1),
                _ => LabelAutomaton::q3([0, 1, 2, 0, 1]),
            };
            QuerySpec::Rpq { source, automaton }
        }
        QueryKind::Wcc => QuerySpec::Wcc,
        QueryKind::PageRank => QuerySpec::PageRank {
            iterations: 10,
            damping: 0.85,
        },
    }
}

/// One randomized trial.
#[derive(Debug, Clone, Copy)]
pub struct Trial {
    pub seed: u64,
    pub kind: QueryKind,
    pub max_vertices: u32,
    pub max_edges: usize,
    pub batches: usize,
    pub deletion_fraction: f64,
    /// Also run the dropping variants.
    pub drops: bool,
}

impl Trial {
    pub fn new(seed: u64, kind: QueryKind, deletion_fraction: f64) -> Self {
        Trial {
            seed,
            kind,
            max_vertices: 50,
            max_edges: 200,
            batches: 20,
            deletion_fraction,
            drops: true,
        }
    }
}

/// Facts gathered over a successful trial.
#[derive(Debug, Clone, Default)]
pub struct TrialReport {
    pub comparisons: usize,
    /// (VDC J+D entries, JOD entries, JOD J entries) after each version.
    pub memory: Vec<(u64, u64, u64)>,
    /// VDC aggregate executions absent from JOD's reruns. Each of them
    /// wrote an empty difference, or the trial would have failed.
    pub vdc_only_empty_reruns: usize,
}

struct Variant {
    name: &'static str,
    engine: JodEngine,
}

fn drop_variants(graph: &Graph, spec: &QuerySpec, seed: u64) -> Result<Vec<Variant>, String> {
    let bloom = StoreKind::Bloom(BloomConfig::for_entries(256));
    let configs = [
        ("det-drop p=0.5", DropPolicy::random(0.5, seed), StoreKind::Det),
        ("det-drop p=1", DropPolicy::random(1.0, seed), StoreKind::Det),
        ("prob-drop p=0.5", DropPolicy::random(0.5, seed), bloom),
    ];
    configs
        .into_iter()
        .map(|(name, policy, store)| {
            JodEngine::initial_run_with_drops(graph, spec.operator(), DropConfig { policy, store })
                .map(|engine| Variant { name, engine })
                .map_err(|e| format!("{name} initial run: {e}"))
        })
        .collect()
}

fn check(name: &str, version: u64, got: &[StateValue], want: &[StateValue], tol: f64) -> Result<(), String> {
    states_match(got, want, tol).map_err(|e| format!("{name} at version {version}: {e}"))
}

/// Runs the trial, returning the first disagreement as an error.
pub fn run_trial(trial: &Trial) -> Result<TrialReport, String> {
    let mut r = rng(trial.seed);
    let labels = if trial.kind == QueryKind::Rpq { 3 } else { 1 };
    let vertices = r.gen_range(2..=trial.max_vertices.max(2));
    let edges = r.gen_range(0..=trial.max_edges.min(4 * vertices as usize));
    let shape = Shape::new(vertices, edges).labels(labels);
    let mut graph = random_graph(&mut r, &shape);
    let spec = random_spec(&mut r, &graph, trial.kind);
    let batches = random_batches(&mut r, &graph, &shape, trial.batches, trial.deletion_fraction, 2);
    let tol = if trial.kind == QueryKind::PageRank { 1e-9 } else { 0.0 };
    let model = MemoryModel::default();

    let err = |what: &str, e: dcgraph::Error| format!("{what}: {e}");
    let mut vdc = VdcEngine::initial_run(&graph, spec.operator()).map_err(|e| err("vdc initial run", e))?;
    let mut jod = JodEngine::initial_run(&graph, spec.operator()).map_err(|e| err("jod initial run", e))?;
    let mut variants = if trial.drops {
        drop_variants(&graph, &spec, trial.seed)?
    } else {
        Vec::new()
    };
    vdc.record_reruns(true);
    jod.record_reruns(true);

    let mut report = TrialReport::default();
    for step in 0..=batches.len() {
        if step > 0 {
            let batch = &batches[step - 1];
            graph.apply_batch(batch).map_err(|e| err("apply", e))?;
            vdc.maintain(&graph, batch).map_err(|e| err("vdc maintain", e))?;
            jod.maintain(&graph, batch).map_err(|e| err("jod maintain", e))?;
            for v in &mut variants {
                v.engine
                    .maintain(&graph, batch)
                    .map_err(|e| format!("{} maintain: {e}", v.name))?;
            }
            let vdc_all: HashSet<_> = vdc.take_reruns().into_iter().collect();
            let vdc_writing: HashSet<_> = vdc.take_writing_reruns().into_iter().collect();
            let jod_runs: HashSet<_> = jod.take_reruns().into_iter().collect();
            if let Some(missing) = vdc_writing.difference(&jod_runs).next() {
                return Err(format!(
                    "version {}: vdc wrote a difference at {missing:?} where jod did not rerun",
                    batch.version
                ));
            }
            report.vdc_only_empty_reruns += vdc_all.difference(&jod_runs).count();
        }
        let version = graph.version();
        let truth = oracle_states(&graph, &spec);
        let (scratch, _) = scratch_run(&graph, &spec.operator()).map_err(|e| err("scratch", e))?;
        check("scratch", version, &scratch, &truth, tol)?;
        check("vdc", version, vdc.final_states(), &truth, tol)?;
        check("jod", version, jod.final_states(), &truth, tol)?;
        for v in &variants {
            check(v.name, version, v.engine.final_states(), jod.final_states(), 0.0)?;
        }
        report.comparisons += 3 + variants.len();
        let vm = vdc.memory(&model);
        let jm = jod.memory(&model);
        report.memory.push((vm.join_entries + vm.state_entries, jm.total_entries(), jm.join_entries));
    }
    Ok(report)
}
