//! Line-delimited metrics files.
//!
//! ```text
//! # dcgraph-metrics v1
//! # engine=jod queries=1 seed=7 policy=none budget=none
//! batch version updates wall_us cum_wall_us ...
//! 0     0       0       812     812         ...
//! ```
//!
//! Columns are tab separated (shown aligned here). The field line names every column, so readers can check the layout
//! instead of trusting positions.

use crate::error::{BenchError, Result};
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub const MAGIC: &str = "# dcgraph-metrics v1";

/// One batch of one run, summed over all registered queries. Counters are
/// per batch; entry counts and bytes are snapshots after the batch. Record 0
/// describes the initial run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MetricsRecord {
    pub batch: u64,
    pub version: u64,
    pub updates: u64,
    pub wall_us: u64,
    pub cum_wall_us: u64,
    pub edge_entries: u64,
    pub join_entries: u64,
    pub state_entries: u64,
    pub store_bytes: u64,
    pub modeled_bytes: u64,
    pub aggregate_reruns: u64,
    pub join_reconstructions: u64,
    pub differences_written: u64,
    pub differences_retracted: u64,
    pub recomputations: u64,
    pub drops: u64,
    pub expanded: u64,
    pub oom: bool,
}

pub const FIELDS: [&str; 18] = [
    "batch",
    "version",
    "updates",
    "wall_us",
    "cum_wall_us",
    "edge_entries",
    "join_entries",
    "state_entries",
    "store_bytes",
    "modeled_bytes",
    "aggregate_reruns",
    "join_reconstructions",
    "differences_written",
    "differences_retracted",
    "recomputations",
    "drops",
    "expanded",
    "oom",
];

/// Columns that depend on the host clock.
pub const WALL_FIELDS: [&str; 2] = ["wall_us", "cum_wall_us"];

impl MetricsRecord {
    fn values(&self) -> [u64; 18] {
        [
            self.batch,
            self.version,
            self.updates,
            self.wall_us,
            self.cum_wall_us,
            self.edge_entries,
            self.join_entries,
            self.state_entries,
            self.store_bytes,
            self.modeled_bytes,
            self.aggregate_reruns,
            self.join_reconstructions,
            self.differences_written,
            self.differences_retracted,
            self.recomputations,
            self.drops,
            self.expanded,
            self.oom as u64,
        ]
    }

    fn from_values(v: &[u64]) -> Self {
        MetricsRecord {
            batch: v[0],
            version: v[1],
            updates: v[2],
            wall_us: v[3],
            cum_wall_us: v[4],
            edge_entries: v[5],
            join_entries: v[6],
            state_entries: v[7],
            store_bytes: v[8],
            modeled_bytes: v[9],
            aggregate_reruns: v[10],
            join_reconstructions: v[11],
            differences_written: v[12],
            differences_retracted: v[13],
            recomputations: v[14],
            drops: v[15],
            expanded: v[16],
            oom: v[17] != 0,
        }
    }

    pub fn difference_entries(&self) -> u64 {
        self.join_entries + self.state_entries
    }
}

/// A parsed metrics file: run attributes from the second header line plus
/// the records in file order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsFile {
    pub attributes: BTreeMap<String, String>,
    pub records: Vec<MetricsRecord>,
}

impl MetricsFile {
    pub fn attribute(&self, key: &str) -> Option<&str> {
        self.attributes.get(key).map(String::as_str)
    }

    pub fn oom(&self) -> bool {
        self.records.iter().any(|r| r.oom)
    }
}

/// Renders a metrics file. Attribute values must not contain whitespace.
pub fn write_metrics(attributes: &[(&str, String)], records: &[MetricsRecord]) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    out.push('#');
    for (k, v) in attributes {
        let _ = write!(out, " {k}={v}");
    }
    out.push('\n');
    out.push_str(&FIELDS.join("\t"));
    out.push('\n');
    for r in records {
        let vals: Vec<String> = r.values().iter().map(u64::to_string).collect();
        out.push_str(&vals.join("\t"));
        out.push('\n');
    }
    out
}

pub fn parse_metrics(text: &str) -> Result<MetricsFile> {
    let err = |line: usize, message: String| BenchError::Metrics { line, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim_end() == MAGIC => {}
        _ => return Err(err(1, format!("missing `{MAGIC}` header"))),
    }
    let mut file = MetricsFile::default();
    let mut header_seen = false;
    for (n, raw) in lines {
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(attrs) = line.strip_prefix('#') {
            for pair in attrs.split_whitespace() {
                let (k, v) = pair
                    .split_once('=')
                    .ok_or_else(|| err(n, format!("attribute `{pair}` is not key=value")))?;
                file.attributes.insert(k.to_string(), v.to_string());
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if !header_seen {
            if cols != FIELDS {
                return Err(err(n, format!("unexpected field line `{line}`")));
            }
            header_seen = true;
            continue;
        }
        if cols.len() != FIELDS.len() {
            return Err(err(n, format!("expected {} columns, found {}", FIELDS.len(), cols.len())));
        }
        let mut vals = Vec::with_capacity(cols.len());
        for (c, name) in cols.iter().zip(FIELDS) {
            vals.push(
                c.parse::<u64>()
                    .map_err(|_| err(n, format!("`{c}` in column {name} is not an unsigned integer")))?,
            );
        }
        if vals[17] > 1 {
            return Err(err(n, "oom must be 0 or 1".into()));
        }
        file.records.push(MetricsRecord::from_values(&vals));
    }
    if !header_seen {
        return Err(err(text.lines().count().max(1), "missing field line".into()));
    }
    Ok(file)
}

/// Copy of a metrics file with the clock-dependent columns zeroed.
pub fn without_wall_times(text: &str) -> Result<String> {
    let mut file = parse_metrics(text)?;
    for r in &mut file.records {
        r.wall_us = 0;
        r.cum_wall_us = 0;
    }
    let attrs: Vec<(&str, String)> = file.attributes.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
    Ok(write_metrics(&attrs, &file.records))
}
