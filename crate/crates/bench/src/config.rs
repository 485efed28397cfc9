//! Run configuration and query generation.

use crate::error::{BenchError, Result};
use dcgraph::dropping::{BloomConfig, DropPolicy};
use dcgraph::engine::MemoryModel;
use dcgraph::graph::{Graph, VertexId};
use dcgraph::query::{LabelAutomaton, QuerySpec, DEFAULT_DAMPING, DEFAULT_PAGERANK_ITERATIONS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    Scratch,
    ScratchLandmark,
    Vdc,
    Jod,
    DetDrop,
    ProbDrop,
}

impl EngineKind {
    pub const ALL: [EngineKind; 6] = [
        EngineKind::Scratch,
        EngineKind::ScratchLandmark,
        EngineKind::Vdc,
        EngineKind::Jod,
        EngineKind::DetDrop,
        EngineKind::ProbDrop,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Scratch => "scratch",
            EngineKind::ScratchLandmark => "scratch-landmark",
            EngineKind::Vdc => "vdc",
            EngineKind::Jod => "jod",
            EngineKind::DetDrop => "det-drop",
            EngineKind::ProbDrop => "prob-drop",
        }
    }

    pub fn drops(self) -> bool {
        matches!(self, EngineKind::DetDrop | EngineKind::ProbDrop)
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        EngineKind::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| BenchError::Config(format!("unknown engine `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryKind {
    Spsp,
    KHop,
    Rpq,
    Wcc,
    PageRank,
}

impl FromStr for QueryKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "spsp" => QueryKind::Spsp,
            "khop" => QueryKind::KHop,
            "rpq" => QueryKind::Rpq,
            "wcc" => QueryKind::Wcc,
            "pagerank" => QueryKind::PageRank,
            _ => return Err(BenchError::Config(format!("unknown query kind `{s}`"))),
        })
    }
}

/// Hop limit used for generated K-hop queries.
pub const GENERATED_K: u32 = 5;

/// Where the registered queries come from.
#[derive(Debug, Clone, PartialEq)]
pub enum QuerySource {
    File(PathBuf),
    Generate { count: usize, kind: QueryKind, seed: u64 },
}

impl FromStr for QuerySource {
    type Err = BenchError;

    /// `gen:count=10,kind=spsp[,seed=3]`, or a path to a query file.
    fn from_str(s: &str) -> Result<Self> {
        let Some(rest) = s.strip_prefix("gen:") else {
            return Ok(QuerySource::File(PathBuf::from(s)));
        };
        let mut count = None;
        let mut kind = None;
        let mut seed = 0;
        for part in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| BenchError::Config(format!("expected key=value in `{part}`")))?;
            let bad = || BenchError::Config(format!("bad value `{v}` for `{k}`"));
            match k {
                "count" => count = Some(v.parse().map_err(|_| bad())?),
                "kind" => kind = Some(v.parse()?),
                "seed" => seed = v.parse().map_err(|_| bad())?,
                _ => return Err(BenchError::Config(format!("unknown generator key `{k}`"))),
            }
        }
        Ok(QuerySource::Generate {
            count: count.ok_or_else(|| BenchError::Config("generator needs count=".into()))?,
            kind: kind.ok_or_else(|| BenchError::Config("generator needs kind=".into()))?,
            seed,
        })
    }
}

/// Bloom filter sizing for prob-drop. Without an explicit entry count the
/// filter is sized for p times the differences an undropped warm-up stores.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BloomSizing {
    pub bits_per_entry: f64,
    pub hashes: u32,
    pub expected_entries: Option<u64>,
}

impl Default for BloomSizing {
    fn default() -> Self {
        let d = BloomConfig::default();
        BloomSizing {
            bits_per_entry: d.bits_per_entry,
            hashes: d.hashes,
            expected_entries: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dataset: PathBuf,
    /// Edge list carries a weight column; otherwise weights 1..=10 are drawn
    /// from the seed.
    pub weighted: bool,
    pub labeled: bool,
    pub queries: QuerySource,
    pub engine: EngineKind,
    pub policy: Option<DropPolicy>,
    /// Scripted update stream. When absent, batches come from splitting the
    /// dataset.
    pub updates: Option<PathBuf>,
    pub initial_fraction: f64,
    pub batch_size: usize,
    pub batch_count: usize,
    pub delete_fraction: f64,
    pub budget: Option<u64>,
    pub seed: u64,
    pub workers: usize,
    pub landmarks: usize,
    pub bloom: BloomSizing,
    pub model: MemoryModel,
}

impl RunConfig {
    pub fn new(dataset: impl Into<PathBuf>, queries: QuerySource, engine: EngineKind) -> Self {
        RunConfig {
            dataset: dataset.into(),
            weighted: true,
            labeled: false,
            queries,
            engine,
            policy: None,
            updates: None,
            initial_fraction: 0.9,
            batch_size: 1,
            batch_count: 100,
            delete_fraction: 0.0,
            budget: None,
            seed: 0,
            workers: 1,
            landmarks: 10,
            bloom: BloomSizing::default(),
            model: MemoryModel::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(BenchError::Config(m));
        if self.engine.drops() && self.policy.is_none() {
            return bad(format!("engine {} needs a drop policy", self.engine));
        }
        if self.budget == Some(0) {
            return bad("memory budget must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.initial_fraction) {
            return bad(format!("initial fraction {} is outside [0, 1]", self.initial_fraction));
        }
        if !(0.0..=1.0).contains(&self.delete_fraction) {
            return bad(format!("deletion fraction {} is outside [0, 1]", self.delete_fraction));
        }
        if self.workers == 0 {
            return bad("need at least one worker".into());
        }
        if self.bloom.bits_per_entry <= 0.0 || self.bloom.hashes == 0 {
            return bad("bloom filters need positive bits per entry and hashes".into());
        }
        Ok(())
    }
}

/// Seeded query generator. Queries are drawn one after another from a
/// single stream, so the first q queries of a larger request are the same
/// as a request for q.
pub fn generate_queries(graph: &Graph, label_count: u32, kind: QueryKind, count: usize, seed: u64) -> Result<Vec<QuerySpec>> {
    let n = graph.vertex_count() as u32;
    if n == 0 && matches!(kind, QueryKind::Spsp | QueryKind::KHop | QueryKind::Rpq) {
        return Err(BenchError::Config("cannot place queries on an empty graph".into()));
    }
    if kind == QueryKind::Rpq && label_count == 0 {
        return Err(BenchError::Config("RPQ generation needs a labeled dataset".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut vertex = || VertexId(rng.gen_range(0..n));
        out.push(match kind {
            QueryKind::Spsp => {
                let source = vertex();
                QuerySpec::Spsp {
                    source,
                    target: vertex(),
                }
            }
            QueryKind::KHop => QuerySpec::KHop {
                source: vertex(),
                k_max: GENERATED_K,
            },
            QueryKind::Rpq => {
                let source = vertex();
                let (a, b) = (rng.gen_range(0..label_count), rng.gen_range(0..label_count));
                QuerySpec::Rpq {
                    source,
                    automaton: LabelAutomaton::q2(a, b),
                }
            }
            QueryKind::Wcc => QuerySpec::Wcc,
            QueryKind::PageRank => QuerySpec::PageRank {
                iterations: DEFAULT_PAGERANK_ITERATIONS,
                damping: DEFAULT_DAMPING,
            },
        });
    }
    Ok(out)
}
