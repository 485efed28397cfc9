//! Replays a workload against one engine kind, one instance per query.

use crate::config::{generate_queries, EngineKind, QuerySource, RunConfig};
use crate::error::{BenchError, Result};
use crate::metrics::{write_metrics, MetricsRecord};
use dcgraph::baselines::{landmark_select, scratch_landmark_spsp, scratch_run, LandmarkIndex};
use dcgraph::diff::StateValue;
use dcgraph::dropping::{BloomConfig, DropConfig, DropPolicy, StoreKind};
use dcgraph::engine::{Counters, JodEngine, Maintainer, MemoryModel, MemoryReport, VdcEngine};
use dcgraph::graph::{
    assign_random_weights, insertion_batches, make_deletion_workload, parse_edge_list, parse_update_stream,
    split_for_dynamism, EdgeList, Graph, UpdateBatch,
};
use dcgraph::query::{parse_query_file, QuerySpec};
use std::path::Path;
use std::time::Instant;

/// Initial graph, update batches and registered queries of one run.
#[derive(Debug, Clone)]
pub struct Workload {
    pub initial: Graph,
    pub dictionaries: EdgeList,
    pub batches: Vec<UpdateBatch>,
    pub queries: Vec<QuerySpec>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))
}

/// Loads the dataset and builds the batches and queries `cfg` asks for.
pub fn prepare_workload(cfg: &RunConfig) -> Result<Workload> {
    let mut list = parse_edge_list(&read(&cfg.dataset)?, cfg.weighted, cfg.labeled)?;
    if !cfg.weighted {
        assign_random_weights(&mut list.edges, cfg.seed);
    }
    let (initial, batches) = match &cfg.updates {
        Some(path) => {
            let text = read(path)?;
            let batches = parse_update_stream(&text, &mut list.vertices, &mut list.labels, cfg.labeled, 1)?;
            let g = Graph::from_edges(list.vertices.len(), &list.edges);
            let take = batches.len().min(cfg.batch_count);
            (g, batches[..take].to_vec())
        }
        None => {
            let (init, stream) = split_for_dynamism(&list.edges, cfg.seed, cfg.initial_fraction)?;
            let g = Graph::from_edges(list.vertices.len(), &init);
            let inserts = insertion_batches(&stream, cfg.batch_size, cfg.batch_count, 1);
            let batches = make_deletion_workload(&g, &inserts, cfg.delete_fraction, cfg.seed)?;
            (g, batches)
        }
    };
    let queries = match &cfg.queries {
        QuerySource::File(path) => parse_query_file(&read(path)?, &list.vertices, &list.labels)?,
        QuerySource::Generate { count, kind, seed } => {
            generate_queries(&initial, list.labels.len() as u32, *kind, *count, *seed)?
        }
    };
    Ok(Workload {
        initial,
        dictionaries: list,
        batches,
        queries,
    })
}

/// Converged result of one query at the end of a run.
#[derive(Debug, Clone, PartialEq)]
pub enum QueryAnswer {
    /// Every key's state.
    States(Vec<StateValue>),
    /// Only the target distance of a point-to-point search.
    Distance(StateValue),
}

impl QueryAnswer {
    /// The answer for `spec`'s target, when it has one.
    pub fn target_distance(&self, spec: &QuerySpec) -> Option<StateValue> {
        match (self, spec) {
            (QueryAnswer::Distance(d), _) => Some(*d),
            (QueryAnswer::States(s), QuerySpec::Spsp { target, .. }) => s.get(target.index()).copied(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub attributes: Vec<(&'static str, String)>,
    pub records: Vec<MetricsRecord>,
    /// Present unless the run stopped on the budget.
    pub answers: Option<Vec<QueryAnswer>>,
}

impl RunOutcome {
    pub fn oom(&self) -> bool {
        self.records.iter().any(|r| r.oom)
    }

    pub fn peak_bytes(&self) -> u64 {
        self.records.iter().map(|r| r.modeled_bytes).max().unwrap_or(0)
    }

    pub fn total_batch_wall_us(&self) -> u64 {
        self.records.iter().filter(|r| r.batch > 0).map(|r| r.wall_us).sum()
    }

    pub fn metrics_text(&self) -> String {
        write_metrics(&self.attributes, &self.records)
    }
}

enum Instance {
    Engine(Box<dyn Maintainer>),
    Scratch { spec: QuerySpec, answer: QueryAnswer },
}

/// What one instance contributed to a record.
#[derive(Default)]
struct Tick {
    counters: Counters,
    memory: MemoryReport,
    expanded: u64,
}

fn scratch_eval(graph: &Graph, spec: &QuerySpec, indices: Option<&[LandmarkIndex]>) -> Result<(QueryAnswer, Tick)> {
    if let (QuerySpec::Spsp { source, target }, Some(ix)) = (spec, indices) {
        let (d, stats) = scratch_landmark_spsp(graph, ix, *source, *target)?;
        let tick = Tick {
            expanded: stats.expanded,
            ..Tick::default()
        };
        return Ok((QueryAnswer::Distance(d), tick));
    }
    let (states, stats) = scratch_run(graph, &spec.operator())?;
    let mut tick = Tick {
        expanded: stats.expanded,
        ..Tick::default()
    };
    tick.counters.aggregate_reruns = stats.evaluations;
    Ok((QueryAnswer::States(states), tick))
}

fn drop_config(cfg: &RunConfig, graph: &Graph, spec: &QuerySpec, index: usize) -> Result<DropConfig> {
    let base = cfg.policy.as_ref().expect("validated: drop engines carry a policy");
    let policy: DropPolicy = base.with_seed(base.seed.wrapping_add(index as u64));
    let store = match cfg.engine {
        EngineKind::ProbDrop => {
            let expected = match cfg.bloom.expected_entries {
                Some(n) => n,
                None => {
                    let warm = JodEngine::initial_run(graph, spec.operator())?;
                    (policy.p * warm.memory(&cfg.model).state_entries as f64).ceil() as u64
                }
            };
            StoreKind::Bloom(BloomConfig {
                bits_per_entry: cfg.bloom.bits_per_entry,
                hashes: cfg.bloom.hashes,
                expected_entries: expected.max(1),
            })
        }
        _ => StoreKind::Det,
    };
    Ok(DropConfig { policy, store })
}

fn register(cfg: &RunConfig, graph: &Graph, spec: &QuerySpec, index: usize, indices: Option<&[LandmarkIndex]>) -> Result<(Instance, Tick)> {
    let op = spec.operator();
    let engine: Box<dyn Maintainer> = match cfg.engine {
        EngineKind::Scratch | EngineKind::ScratchLandmark => {
            let (answer, tick) = scratch_eval(graph, spec, indices)?;
            return Ok((
                Instance::Scratch {
                    spec: spec.clone(),
                    answer,
                },
                tick,
            ));
        }
        EngineKind::Vdc => Box::new(VdcEngine::initial_run(graph, op)?),
        EngineKind::Jod => Box::new(JodEngine::initial_run(graph, op)?),
        EngineKind::DetDrop | EngineKind::ProbDrop => {
            let drops = drop_config(cfg, graph, spec, index)?;
            Box::new(JodEngine::initial_run_with_drops(graph, op, drops)?)
        }
    };
    let tick = Tick {
        counters: engine.counters(),
        memory: engine.memory(&cfg.model),
        expanded: 0,
    };
    Ok((Instance::Engine(engine), tick))
}

fn advance(instance: &mut Instance, graph: &Graph, batch: &UpdateBatch, model: &MemoryModel, indices: Option<&[LandmarkIndex]>) -> Result<Tick> {
    match instance {
        Instance::Engine(e) => {
            let before = e.counters();
            e.maintain(graph, batch)?;
            Ok(Tick {
                counters: e.counters() - before,
                memory: e.memory(model),
                expanded: 0,
            })
        }
        Instance::Scratch { spec, answer } => {
            let (a, tick) = scratch_eval(graph, spec, indices)?;
            *answer = a;
            Ok(tick)
        }
    }
}

fn answer_of(instance: &Instance) -> QueryAnswer {
    match instance {
        Instance::Engine(e) => QueryAnswer::States(e.final_states().to_vec()),
        Instance::Scratch { answer, .. } => answer.clone(),
    }
}

/// Runs `f` over `items` on up to `workers` threads and returns the results
/// in item order.
fn pooled<T: Send, R: Send>(items: &mut [T], workers: usize, f: impl Fn(usize, &mut T) -> Result<R> + Sync) -> Result<Vec<R>> {
    if workers <= 1 || items.len() <= 1 {
        return items.iter_mut().enumerate().map(|(i, t)| f(i, t)).collect();
    }
    let chunk = items.len().div_ceil(workers);
    let f = &f;
    let parts: Vec<Result<Vec<R>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks_mut(chunk)
            .enumerate()
            .map(|(c, part)| {
                scope.spawn(move || {
                    part.iter_mut()
                        .enumerate()
                        .map(|(j, t)| f(c * chunk + j, t))
                        .collect::<Result<Vec<R>>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(items.len());
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn record(batch: u64, version: u64, updates: u64, ticks: &[Tick], extra_bytes: u64, model: &MemoryModel) -> MetricsRecord {
    let mut r = MetricsRecord {
        batch,
        version,
        updates,
        ..MetricsRecord::default()
    };
    for t in ticks {
        r.edge_entries += t.memory.edge_entries;
        r.join_entries += t.memory.join_entries;
        r.state_entries += t.memory.state_entries;
        r.store_bytes += t.memory.store_bytes;
        r.modeled_bytes += t.memory.total_bytes(model);
        r.aggregate_reruns += t.counters.aggregate_reruns;
        r.join_reconstructions += t.counters.join_reconstructions;
        r.differences_written += t.counters.differences_written;
        r.differences_retracted += t.counters.differences_retracted;
        r.recomputations += t.counters.recomputations;
        r.drops += t.counters.drops;
        r.expanded += t.expanded;
    }
    r.modeled_bytes += extra_bytes;
    r
}

fn attributes(cfg: &RunConfig, w: &Workload) -> Vec<(&'static str, String)> {
    vec![
        ("engine", cfg.engine.to_string()),
        ("queries", w.queries.len().to_string()),
        ("batches", w.batches.len().to_string()),
        (
            "policy",
            cfg.policy
                .as_ref()
                .filter(|_| cfg.engine.drops())
                .map_or("none".into(), |p| p.to_string()),
        ),
        ("seed", cfg.seed.to_string()),
        ("budget", cfg.budget.map_or("none".into(), |b| b.to_string())),
    ]
}

/// Loads, registers and replays: [`prepare_workload`] then [`run_on_workload`].
pub fn run_experiment(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let w = prepare_workload(cfg)?;
    run_on_workload(cfg, &w)
}

/// Registers every query on the initial graph, then replays the batches,
/// emitting one record for the initial run and one per batch. A record whose
/// modeled bytes exceed the budget is flagged and ends the run.
pub fn run_on_workload(cfg: &RunConfig, w: &Workload) -> Result<RunOutcome> {
    cfg.validate()?;
    let model = cfg.model;
    let mut graph = w.initial.clone();
    let mut out = RunOutcome {
        attributes: attributes(cfg, w),
        records: Vec::new(),
        answers: None,
    };
    let over = |bytes: u64| cfg.budget.is_some_and(|b| bytes > b);

    let started = Instant::now();
    let mut landmarks: Option<Vec<LandmarkIndex>> = None;
    if cfg.engine == EngineKind::ScratchLandmark && graph.vertex_count() > 0 {
        let chosen = landmark_select(&graph, cfg.landmarks.min(graph.vertex_count()))?;
        landmarks = Some(LandmarkIndex::build_all(&graph, &chosen)?);
    }
    let index_bytes = |ix: &Option<Vec<LandmarkIndex>>| {
        ix.iter()
            .flatten()
            .map(|l| l.memory(&model).total_bytes(&model))
            .sum::<u64>()
    };
    let mut specs: Vec<(usize, &QuerySpec)> = w.queries.iter().enumerate().collect();
    let registered = pooled(&mut specs, cfg.workers, |_, (i, spec)| {
        register(cfg, &graph, spec, *i, landmarks.as_deref())
    })?;
    let (mut instances, ticks): (Vec<Instance>, Vec<Tick>) = registered.into_iter().unzip();
    let wall = started.elapsed().as_micros() as u64;
    let mut rec = record(0, graph.version(), 0, &ticks, index_bytes(&landmarks), &model);
    rec.wall_us = wall;
    rec.cum_wall_us = wall;
    rec.oom = over(rec.modeled_bytes);
    let mut cumulative = wall;
    let stop = rec.oom;
    out.records.push(rec);
    if stop {
        return Ok(out);
    }

    for (b, batch) in w.batches.iter().enumerate() {
        let started = Instant::now();
        graph.apply_batch(batch)?;
        if let Some(ix) = landmarks.as_mut() {
            for l in ix.iter_mut() {
                l.maintain(&graph, batch)?;
            }
        }
        let ticks = pooled(&mut instances, cfg.workers, |_, inst| {
            advance(inst, &graph, batch, &model, landmarks.as_deref())
        })?;
        let wall = started.elapsed().as_micros() as u64;
        cumulative += wall;
        let mut rec = record(
            b as u64 + 1,
            batch.version,
            batch.entries.len() as u64,
            &ticks,
            index_bytes(&landmarks),
            &model,
        );
        rec.wall_us = wall;
        rec.cum_wall_us = cumulative;
        rec.oom = over(rec.modeled_bytes);
        let stop = rec.oom;
        out.records.push(rec);
        if stop {
            return Ok(out);
        }
    }
    out.answers = Some(instances.iter().map(answer_of).collect());
    Ok(out)
}
