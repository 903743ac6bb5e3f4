use crate::ServiceError;
use dise_core::pipeline::{Dise, Task};
use dise_psychometrics::{
    ctt, fit_2pl, index_responses, irt_category, response_time_summary, CttStats, FitOptions, IrtCategoryStats,
    ResponseRecord, TaskTimeRow,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;
use std::path::Path;

pub const IRT_FILE: &str = "irt.json";

/// Task and quadrant of every servable item.
pub type Catalog = HashMap<String, (Task, Dise)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrtReport {
    pub items: usize,
    pub participants: usize,
    pub converged: bool,
    pub sweeps: usize,
    pub overall: IrtCategoryStats,
    pub quadrants: BTreeMap<Dise, IrtCategoryStats>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub mean_s: f64,
    pub median_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub responses: usize,
    pub overall: Option<CttStats>,
    pub quadrants: BTreeMap<Dise, CttStats>,
    pub time: Option<Timing>,
    pub tasks: Vec<TaskTimeRow>,
    pub irt: Option<IrtReport>,
}

fn quadrant_of(catalog: &Catalog, item: &str) -> Option<Dise> {
    catalog.get(item).map(|&(_, d)| d)
}

/// Pure function of the log: CTT overall and per quadrant plus timing.
pub fn compute_stats(records: &[ResponseRecord], catalog: &Catalog, irt: Option<IrtReport>) -> Stats {
    let correct = records.iter().filter(|r| r.correct).count();
    let overall = ctt(correct, records.len()).ok();
    let mut by_q: BTreeMap<Dise, (usize, usize)> = BTreeMap::new();
    for r in records {
        if let Some(d) = quadrant_of(catalog, &r.item_id) {
            let e = by_q.entry(d).or_default();
            e.0 += r.correct as usize;
            e.1 += 1;
        }
    }
    let quadrants = by_q
        .into_iter()
        .filter_map(|(d, (x, n))| ctt(x, n).ok().map(|s| (d, s)))
        .collect();
    let summary = response_time_summary(records, |id| catalog.get(id).map(|(t, _)| t.name())).ok();
    Stats {
        responses: records.len(),
        overall,
        quadrants,
        time: summary.as_ref().map(|s| Timing {
            mean_s: s.mean_s,
            median_s: s.median_s,
        }),
        tasks: summary.map(|s| s.per_task).unwrap_or_default(),
        irt,
    }
}

/// Fits the 2PL model to the log and summarizes expected accuracy overall
/// and per quadrant.
pub fn fit_irt_report(records: &[ResponseRecord], catalog: &Catalog) -> Result<IrtReport, ServiceError> {
    let ix = index_responses(records);
    let model = fit_2pl(&ix.matrix, &FitOptions::default()).map_err(|e| ServiceError::Stats(e.to_string()))?;
    let all: Vec<usize> = (0..ix.items.len()).collect();
    let overall = irt_category(&model, &all).map_err(|e| ServiceError::Stats(e.to_string()))?;
    let mut quadrants = BTreeMap::new();
    for d in Dise::ALL {
        let subset: Vec<usize> = all
            .iter()
            .copied()
            .filter(|&i| quadrant_of(catalog, &ix.items[i]) == Some(d))
            .collect();
        if let Ok(s) = irt_category(&model, &subset) {
            quadrants.insert(d, s);
        }
    }
    Ok(IrtReport {
        items: ix.items.len(),
        participants: ix.persons.len(),
        converged: model.converged,
        sweeps: model.sweeps,
        overall,
        quadrants,
    })
}

pub fn load_irt(state_dir: &Path) -> Option<IrtReport> {
    let bytes = std::fs::read(state_dir.join(IRT_FILE)).ok()?;
    serde_json::from_slice(&bytes).ok()
}

pub fn save_irt(state_dir: &Path, r: &IrtReport) -> Result<(), ServiceError> {
    let bytes = serde_json::to_vec_pretty(r).map_err(ServiceError::store)?;
    std::fs::write(state_dir.join(IRT_FILE), bytes).map_err(ServiceError::store)
}

fn pct(p: f64, half: Option<f64>) -> String {
    match half {
        Some(h) => format!("{:.2}% ± {:.2}%", 100.0 * p, 100.0 * h),
        None => format!("{:.2}%", 100.0 * p),
    }
}

/// Accuracy by category with both estimates, then the per-task time table.
pub fn stats_table(s: &Stats) -> String {
    let mut out = String::new();
    let irt_cell = |d: Option<Dise>| -> String {
        let Some(irt) = &s.irt else { return "—".into() };
        let c = match d {
            None => Some(&irt.overall),
            Some(d) => irt.quadrants.get(&d),
        };
        c.map_or("—".into(), |c| pct(c.p_irt, c.half_width()))
    };
    let _ = writeln!(out, "{:<10}{:>8}  {:<20}{:<20}", "Category", "N", "CTT", "IRT");
    let mut row = |name: &str, c: Option<&CttStats>, d: Option<Dise>| {
        let (n, ctt) = c.map_or(("0".into(), "—".into()), |c| (c.n.to_string(), pct(c.p_hat, Some(c.half_width()))));
        let _ = writeln!(out, "{name:<10}{n:>8}  {ctt:<20}{}", irt_cell(d));
    };
    row("Overall", s.overall.as_ref(), None);
    for d in Dise::ALL {
        row(d.code(), s.quadrants.get(&d), Some(d));
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<14}{:>8}{:>10}{:>14}{:>16}", "Task", "N", "Accuracy", "Mean Time (s)", "Median Time (s)");
    for t in &s.tasks {
        let _ = writeln!(
            out,
            "{:<14}{:>8}{:>9.1}%{:>14.1}{:>16.1}",
            t.task,
            t.responses,
            100.0 * t.accuracy,
            t.mean_s,
            t.median_s
        );
    }
    out
}
