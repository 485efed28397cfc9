//! Synthetic power-law datasets built with the configuration model.

use dcgraph::graph::Edge;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Pareto};
use std::collections::HashSet;
use std::fmt::Write as _;

/// Parameters of a generated dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawSpec {
    pub vertices: u32,
    pub avg_degree: f64,
    /// Tail exponent of the degree distribution (2 to 3 is typical).
    pub exponent: f64,
    /// Number of distinct edge labels; 0 writes an unlabeled file.
    pub labels: u32,
    pub max_weight: u64,
    pub seed: u64,
}

impl PowerLawSpec {
    pub fn new(vertices: u32, avg_degree: f64, seed: u64) -> Self {
        PowerLawSpec {
            vertices,
            avg_degree,
            exponent: 2.1,
            labels: 0,
            max_weight: 10,
            seed,
        }
    }
}

/// Degrees drawn from a Pareto tail, capped at n - 1, and scaled so that
/// their mean is close to `avg`.
fn degree_sequence(rng: &mut ChaCha8Rng, n: u32, avg: f64, exponent: f64) -> Vec<usize> {
    let tail = Pareto::new(1.0, (exponent - 1.0).max(0.1)).expect("positive Pareto parameters");
    let raw: Vec<f64> = (0..n).map(|_| tail.sample(rng)).collect();
    let cap = (n as f64 - 1.0).max(1.0);
    let degrees = |scale: f64| raw.iter().map(move |w| (w * scale).min(cap).round().max(1.0) as usize);
    let target = avg * n as f64;
    // The capped sum is monotone in the scale, so bisect on it.
    let (mut lo, mut hi) = (0.0f64, avg.max(1.0));
    while (degrees(hi).sum::<usize>() as f64) < target && hi < 1e12 {
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if (degrees(mid).sum::<usize>() as f64) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    degrees(hi).collect()
}

/// Pairs out-stubs with shuffled in-stubs. Self-loops and repeated pairs
/// are discarded, so the realized edge count is a little below the sum of
/// degrees.
pub fn power_law_edges(spec: &PowerLawSpec) -> Vec<Edge> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.vertices;
    if n < 2 {
        return Vec::new();
    }
    let out_deg = degree_sequence(&mut rng, n, spec.avg_degree, spec.exponent);
    let in_deg = degree_sequence(&mut rng, n, spec.avg_degree, spec.exponent);
    let mut out_stubs: Vec<u32> = Vec::new();
    let mut in_stubs: Vec<u32> = Vec::new();
    for v in 0..n {
        out_stubs.extend(std::iter::repeat_n(v, out_deg[v as usize]));
        in_stubs.extend(std::iter::repeat_n(v, in_deg[v as usize]));
    }
    out_stubs.shuffle(&mut rng);
    in_stubs.shuffle(&mut rng);

    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for (&s, &d) in out_stubs.iter().zip(&in_stubs) {
        if s == d || !seen.insert((s, d)) {
            continue;
        }
        let mut e = Edge::new(s, d, rng.gen_range(1..=spec.max_weight.max(1)));
        if spec.labels > 0 {
            e.label = rng.gen_range(0..spec.labels);
        }
        edges.push(e);
    }
    edges
}

/// Renders `src dst weight [label]` lines, naming vertices by their ids and
/// labels as `l<code>`.
pub fn write_edge_list(edges: &[Edge], labeled: bool) -> String {
    let mut out = String::new();
    for e in edges {
        let _ = write!(out, "{} {} {}", e.src.0, e.dst.0, e.weight);
        if labeled {
            let _ = write!(out, " l{}", e.label);
        }
        out.push('\n');
    }
    out
}
