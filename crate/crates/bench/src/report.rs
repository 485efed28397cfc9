//! Cross-run summaries with ratio columns.

use crate::metrics::MetricsFile;
use std::fmt::Write as _;

/// Totals of one metrics file. Work counters and batch time cover the
/// maintenance batches only; peak bytes also sees the initial run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub run: String,
    pub engine: String,
    pub queries: u64,
    pub batches: u64,
    pub batch_wall_us: u64,
    pub peak_bytes: u64,
    pub recomputations: u64,
    pub aggregate_reruns: u64,
    pub oom: bool,
}

pub fn summarize(run: &str, file: &MetricsFile) -> RunSummary {
    let batch_records = file.records.iter().filter(|r| r.batch > 0);
    RunSummary {
        run: run.to_string(),
        engine: file.attribute("engine").unwrap_or("unknown").to_string(),
        queries: file.attribute("queries").and_then(|q| q.parse().ok()).unwrap_or(0),
        batches: batch_records.clone().count() as u64,
        batch_wall_us: batch_records.clone().map(|r| r.wall_us).sum(),
        peak_bytes: file.records.iter().map(|r| r.modeled_bytes).max().unwrap_or(0),
        recomputations: batch_records.clone().map(|r| r.recomputations).sum(),
        aggregate_reruns: batch_records.map(|r| r.aggregate_reruns).sum(),
        oom: file.oom(),
    }
}

const COLUMNS: [&str; 11] = [
    "run",
    "engine",
    "queries",
    "batches",
    "batch_time_ms",
    "peak_bytes",
    "recomputations",
    "aggregate_reruns",
    "oom",
    "time_ratio",
    "bytes_ratio",
];

fn ratio(a: u64, b: u64) -> String {
    if b == 0 {
        "nan".into()
    } else {
        format!("{:.4}", a as f64 / b as f64)
    }
}

fn rows(runs: &[RunSummary]) -> Vec<[String; 11]> {
    // Ratios are taken against the first vdc run, or the first run if none.
    let Some(base) = runs.iter().find(|r| r.engine == "vdc").or(runs.first()) else {
        return Vec::new();
    };
    runs.iter()
        .map(|r| {
            [
                r.run.clone(),
                r.engine.clone(),
                r.queries.to_string(),
                r.batches.to_string(),
                format!("{:.3}", r.batch_wall_us as f64 / 1000.0),
                r.peak_bytes.to_string(),
                r.recomputations.to_string(),
                r.aggregate_reruns.to_string(),
                (r.oom as u8).to_string(),
                ratio(r.batch_wall_us, base.batch_wall_us),
                ratio(r.peak_bytes, base.peak_bytes),
            ]
        })
        .collect()
}

/// Renders the summary as an aligned text table and as CSV, in input order.
pub fn emit_report(runs: &[RunSummary]) -> (String, String) {
    let rows = rows(runs);
    let mut csv = COLUMNS.join(",");
    csv.push('\n');
    for r in &rows {
        csv.push_str(&r.join(","));
        csv.push('\n');
    }

    let mut widths = COLUMNS.map(str::len);
    for r in &rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let mut text = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells.zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(text, "{}", parts.join("  ").trim_end());
    };
    line(&mut COLUMNS.iter().copied());
    for r in &rows {
        line(&mut r.iter().map(String::as_str));
    }
    (text, csv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(name: &str, engine: &str, us: u64, bytes: u64) -> RunSummary {
        RunSummary {
            run: name.into(),
            engine: engine.into(),
            queries: 1,
            batches: 2,
            batch_wall_us: us,
            peak_bytes: bytes,
            recomputations: 0,
            aggregate_reruns: 4,
            oom: false,
        }
    }

    #[test]
    fn ratios_are_against_vdc() {
        let (_, csv) = emit_report(&[run("a", "jod", 500, 100), run("b", "vdc", 1000, 400)]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].ends_with(",0.5000,0.2500"), "{}", lines[1]);
        assert!(lines[2].ends_with(",1.0000,1.0000"));
    }

    #[test]
    fn single_run_single_row() {
        let (text, csv) = emit_report(&[run("only", "jod", 0, 0)]);
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.lines().nth(1).unwrap().ends_with(",nan,nan"));
        assert_eq!(text.lines().count(), 2);
    }
}
