use crate::diff::Key;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::hash::{hash_words, unit_interval};
use std::collections::HashSet;
use std::fmt;

/// Which degree the DEGREE policy looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeKind {
    Out,
    In,
    Total,
}

impl DegreeKind {
    pub fn of(self, graph: &Graph, v: VertexId) -> usize {
        match self {
            DegreeKind::Out => graph.out_degree(v),
            DegreeKind::In => graph.in_degree(v),
            DegreeKind::Total => graph.total_degree(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DropMode {
    Random,
    /// Always drop below `tau_min`, never above the `tau_max_pct` degree
    /// percentile, otherwise drop with probability p.
    Degree { tau_min: usize, tau_max_pct: f64 },
    /// Drop exactly the listed (key, iteration) pairs, in any version.
    Listed(HashSet<(Key, u32)>),
}

/// Drop-selection policy as configured; see [`DropPolicy::resolve`].
#[derive(Debug, Clone, PartialEq)]
pub struct DropPolicy {
    pub mode: DropMode,
    pub p: f64,
    pub seed: u64,
    pub degree: DegreeKind,
}

impl DropPolicy {
    pub fn random(p: f64, seed: u64) -> Self {
        DropPolicy {
            mode: DropMode::Random,
            p,
            seed,
            degree: DegreeKind::Out,
        }
    }

    pub fn degree(p: f64, tau_min: usize, tau_max_pct: f64, seed: u64) -> Self {
        DropPolicy {
            mode: DropMode::Degree {
                tau_min,
                tau_max_pct,
            },
            p,
            seed,
            degree: DegreeKind::Out,
        }
    }

    pub fn listed(pairs: impl IntoIterator<Item = (Key, u32)>) -> Self {
        DropPolicy {
            mode: DropMode::Listed(pairs.into_iter().collect()),
            p: 0.0,
            seed: 0,
            degree: DegreeKind::Out,
        }
    }

    /// Parses `random:p=0.5` or `degree:p=0.5,tau_min=2,tau_max_pct=80`.
    /// Optional keys: `seed=<u64>` and `degree=out|in|total`.
    pub fn parse(text: &str) -> Result<Self> {
        let err = |m: String| Error::parse(1, m);
        let (mode, rest) = text.trim().split_once(':').unwrap_or((text.trim(), ""));
        let mut p = None;
        let mut tau_min = 2usize;
        let mut tau_max_pct = 80.0f64;
        let mut seed = 0u64;
        let mut degree = DegreeKind::Out;
        for part in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, found `{part}`")))?;
            let bad = || err(format!("bad value `{v}` for `{k}`"));
            match k.trim() {
                "p" => p = Some(v.parse::<f64>().map_err(|_| bad())?),
                "tau_min" => tau_min = v.parse().map_err(|_| bad())?,
                "tau_max_pct" => tau_max_pct = v.parse().map_err(|_| bad())?,
                "seed" => seed = v.parse().map_err(|_| bad())?,
                "degree" => {
                    degree = match v {
                        "out" => DegreeKind::Out,
                        "in" => DegreeKind::In,
                        "total" => DegreeKind::Total,
                        _ => return Err(bad()),
                    }
                }
                other => return Err(err(format!("unknown policy key `{other}`"))),
            }
        }
        let p = p.ok_or_else(|| err("policy needs p=<probability>".into()))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(err(format!("p={p} is outside [0, 1]")));
        }
        let mode = match mode {
            "random" => DropMode::Random,
            "degree" => {
                if !(0.0..=100.0).contains(&tau_max_pct) {
                    return Err(err(format!("tau_max_pct={tau_max_pct} is outside [0, 100]")));
                }
                DropMode::Degree {
                    tau_min,
                    tau_max_pct,
                }
            }
            other => return Err(err(format!("unknown policy mode `{other}`"))),
        };
        Ok(DropPolicy {
            mode,
            p,
            seed,
            degree,
        })
    }

    pub fn with_p(&self, p: f64) -> Self {
        DropPolicy { p, ..self.clone() }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        DropPolicy {
            seed,
            ..self.clone()
        }
    }

    /// Fixes the percentile threshold against `graph`'s degree distribution.
    ///
    /// A `tau_min` above the resolved `tau_max` is allowed: it means "drop
    /// everything below tau_min", which is how drop-all stress runs are set up.
    pub fn resolve(&self, graph: &Graph) -> ResolvedPolicy {
        let tau_max = match self.mode {
            DropMode::Degree { tau_max_pct, .. } => {
                let mut degrees: Vec<usize> =
                    graph.vertices().map(|v| self.degree.of(graph, v)).collect();
                degrees.sort_unstable();
                percentile(&degrees, tau_max_pct)
            }
            _ => usize::MAX,
        };
        ResolvedPolicy {
            policy: self.clone(),
            tau_max,
        }
    }
}

impl fmt::Display for DropPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.mode {
            DropMode::Random => write!(f, "random:p={}", self.p),
            DropMode::Degree {
                tau_min,
                tau_max_pct,
            } => write!(
                f,
                "degree:p={},tau_min={tau_min},tau_max_pct={tau_max_pct}",
                self.p
            ),
            DropMode::Listed(pairs) => write!(f, "listed:{}", pairs.len()),
        }
    }
}

/// Nearest-rank percentile of sorted data; 0 for empty input.
pub fn percentile(sorted: &[usize], pct: f64) -> usize {
    if sorted.is_empty() {
        return 0;
    }
    let rank = ((pct / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// A policy bound to a graph's degree distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedPolicy {
    pub policy: DropPolicy,
    pub tau_max: usize,
}

impl ResolvedPolicy {
    fn coin(&self, key: Key, iteration: u32, version: u64) -> bool {
        let p = self.policy.p;
        if p <= 0.0 {
            return false;
        }
        if p >= 1.0 {
            return true;
        }
        let h = hash_words(self.policy.seed, &[key as u64, iteration as u64, version]);
        unit_interval(h) < p
    }

    /// Decides whether the difference produced for `key` at `iteration` in
    /// `version` is dropped. The decision is a pure function of its inputs,
    /// so for a fixed seed the dropped set grows monotonically with p.
    pub fn should_drop(&self, key: Key, degree: usize, iteration: u32, version: u64) -> bool {
        match &self.policy.mode {
            DropMode::Random => self.coin(key, iteration, version),
            DropMode::Degree { tau_min, .. } => {
                if degree < *tau_min {
                    true
                } else if degree > self.tau_max {
                    false
                } else {
                    self.coin(key, iteration, version)
                }
            }
            DropMode::Listed(pairs) => pairs.contains(&(key, iteration)),
        }
    }

    pub fn degree_kind(&self) -> DegreeKind {
        self.policy.degree
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn star(n: u32) -> Graph {
        let edges: Vec<Edge> = (1..n).map(|i| Edge::new(0, i, 1)).collect();
        Graph::from_edges(n as usize, &edges)
    }

    #[test]
    fn parses_both_forms() {
        let r = DropPolicy::parse("random:p=0.5").unwrap();
        assert_eq!(r.mode, DropMode::Random);
        assert_eq!(r.p, 0.5);
        let d = DropPolicy::parse("degree:p=0.25,tau_min=3,tau_max_pct=90,seed=7,degree=total").unwrap();
        assert_eq!(
            d.mode,
            DropMode::Degree {
                tau_min: 3,
                tau_max_pct: 90.0
            }
        );
        assert_eq!((d.seed, d.degree), (7, DegreeKind::Total));
        assert_eq!(DropPolicy::parse(&d.to_string()).unwrap().mode, d.mode);
    }

    #[test]
    fn rejects_bad_strings() {
        for s in ["random", "random:p=2", "fancy:p=0.1", "degree:p=0.1,tau=3", "random:p"] {
            assert!(DropPolicy::parse(s).is_err(), "{s}");
        }
    }

    #[test]
    fn degree_thresholds() {
        let g = star(10);
        let pol = DropPolicy::degree(1.0, 2, 80.0, 1).resolve(&g);
        // below tau_min: always
        assert!(pol.should_drop(3, 1, 1, 0));
        // above tau_max: never, even with p = 1
        assert_eq!(pol.tau_max, 0);
        assert!(!pol.should_drop(0, 9, 1, 0));
        let zero = DropPolicy::degree(0.0, 2, 80.0, 1).resolve(&g);
        assert!(zero.should_drop(3, 1, 1, 0));
        assert!(!zero.should_drop(3, 2, 1, 0));
    }

    #[test]
    fn random_p_zero_never_drops() {
        let pol = DropPolicy::random(0.0, 5).resolve(&Graph::new());
        assert!((0..1000).all(|k| !pol.should_drop(k, 4, 1, 0)));
    }

    #[test]
    fn drop_sets_are_nested_in_p() {
        let g = Graph::new();
        let lo = DropPolicy::random(0.3, 9).resolve(&g);
        let hi = DropPolicy::random(0.6, 9).resolve(&g);
        let mut hits = 0;
        for k in 0..2000 {
            if lo.should_drop(k, 0, 2, 1) {
                hits += 1;
                assert!(hi.should_drop(k, 0, 2, 1));
            }
        }
        assert!((500..700).contains(&hits), "{hits}");
    }

    #[test]
    fn percentile_is_nearest_rank() {
        let d = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];
        assert_eq!(percentile(&d, 80.0), 8);
        assert_eq!(percentile(&d, 100.0), 10);
        assert_eq!(percentile(&d, 0.0), 1);
        assert_eq!(percentile(&[], 50.0), 0);
    }
}
