//! Capacity sweeps: how many queries fit a modeled memory budget, and at
//! what drop probability.

use crate::config::{EngineKind, QuerySource, RunConfig};
use crate::error::{BenchError, Result};
use crate::runner::{prepare_workload, run_on_workload};

/// Outcome for one query count. For drop engines `p` is the smallest grid
/// value that fit, or the largest tried when none did.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub engine: EngineKind,
    pub queries: usize,
    pub p: f64,
    pub feasible: bool,
    pub batch_wall_us: u64,
    pub peak_bytes: u64,
}

/// For each count in `counts` (ascending), registers that many queries from
/// the template's generator and searches `p_grid` in ascending order for the
/// first run that stays within budget. vdc and jod run once at p = 0. The
/// sweep stops after the first count with no feasible configuration.
pub fn capacity_sweep(template: &RunConfig, counts: &[usize], p_grid: &[f64]) -> Result<Vec<SweepRow>> {
    let QuerySource::Generate { kind, seed, .. } = template.queries else {
        return Err(BenchError::Config("a sweep needs generated queries".into()));
    };
    let engine = template.engine;
    if !matches!(engine, EngineKind::Vdc | EngineKind::Jod | EngineKind::DetDrop | EngineKind::ProbDrop) {
        return Err(BenchError::Config(format!("cannot sweep engine {engine}")));
    }
    let mut grid: Vec<f64> = if engine.drops() { p_grid.to_vec() } else { vec![0.0] };
    grid.sort_by(f64::total_cmp);
    if grid.is_empty() {
        return Err(BenchError::Config("empty p grid".into()));
    }
    let largest = counts.iter().copied().max().unwrap_or(0);
    let mut cfg = template.clone();
    cfg.queries = QuerySource::Generate {
        count: largest,
        kind,
        seed,
    };
    let full = prepare_workload(&cfg)?;

    let mut rows = Vec::new();
    for &q in counts {
        let mut w = full.clone();
        w.queries.truncate(q);
        let mut row = None;
        for &p in &grid {
            if engine.drops() {
                let policy = template
                    .policy
                    .as_ref()
                    .ok_or_else(|| BenchError::Config(format!("engine {engine} needs a drop policy")))?;
                cfg.policy = Some(policy.with_p(p));
            }
            let out = run_on_workload(&cfg, &w)?;
            let r = SweepRow {
                engine,
                queries: q,
                p,
                feasible: !out.oom(),
                batch_wall_us: out.total_batch_wall_us(),
                peak_bytes: out.peak_bytes(),
            };
            let done = r.feasible;
            row = Some(r);
            if done {
                break;
            }
        }
        let row = row.expect("grid is non-empty");
        let feasible = row.feasible;
        rows.push(row);
        if !feasible {
            break;
        }
    }
    Ok(rows)
}

/// Largest query count with a feasible row, or 0.
pub fn max_feasible(rows: &[SweepRow]) -> usize {
    rows.iter().filter(|r| r.feasible).map(|r| r.queries).max().unwrap_or(0)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("engine,queries,p,feasible,batch_time_ms,peak_bytes\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{:.3},{}\n",
            r.engine,
            r.queries,
            r.p,
            r.feasible as u8,
            r.batch_wall_us as f64 / 1000.0,
            r.peak_bytes
        ));
    }
    out
}
