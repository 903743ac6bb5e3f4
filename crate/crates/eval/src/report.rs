use crate::score::{ScoredRun, Tally};
use dise_core::pipeline::{Dise, Task};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Format {
    /// `.json` means JSON; anything else is text.
    pub fn from_path(p: &std::path::Path) -> Self {
        match p.extension().and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            _ => Format::Text,
        }
    }
}

pub const EMPTY_CELL: &str = "—";

type CellFn = Box<dyn Fn(&Column) -> String>;

#[derive(Debug, Serialize)]
struct Column {
    name: String,
    correct: usize,
    total: usize,
    unparsed: usize,
    /// Percent, one decimal; absent for an empty group.
    accuracy: Option<f64>,
}

fn task_label(t: Task) -> &'static str {
    match t {
        Task::Rotation3d => "Rotation",
        Task::Projection3d => "Projection",
        Task::Combination3d => "Combination",
        Task::Folding3d => "Folding",
        Task::Shapefind3d => "ShapeFind",
    }
}

/// Overall, tasks, quadrants, then the two rollups, always in this order.
fn columns(run: &ScoredRun) -> Vec<Column> {
    let mut cols: Vec<(String, Tally)> = vec![("Overall".into(), run.overall)];
    cols.extend(Task::ALL.into_iter().map(|t| (task_label(t).into(), run.by_task[&t])));
    cols.extend(Dise::ALL.into_iter().map(|d| (d.code().into(), run.by_quadrant[&d])));
    cols.extend([
        ("Static".into(), run.static_),
        ("Dynamic".into(), run.dynamic),
        ("Intrinsic".into(), run.intrinsic),
        ("Extrinsic".into(), run.extrinsic),
    ]);
    cols.into_iter()
        .map(|(name, t)| Column {
            name,
            correct: t.correct,
            total: t.total,
            unparsed: t.unparsed,
            accuracy: t.accuracy().map(|a| (a * 1000.0).round() / 10.0),
        })
        .collect()
}

pub fn report(run: &ScoredRun, format: Format) -> String {
    let cols = columns(run);
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&serde_json::json!({ "columns": cols }))
                .expect("plain data serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let rows: [(&str, CellFn); 4] = [
                ("", Box::new(|c: &Column| c.name.clone())),
                (
                    "Accuracy (%)",
                    Box::new(|c: &Column| c.accuracy.map_or(EMPTY_CELL.to_string(), |a| format!("{a:.1}"))),
                ),
                ("Correct/Total", Box::new(|c: &Column| format!("{}/{}", c.correct, c.total))),
                ("Unparsed", Box::new(|c: &Column| c.unparsed.to_string())),
            ];
            let cells: Vec<Vec<String>> = rows.iter().map(|(_, f)| cols.iter().map(f).collect()).collect();
            let label_w = rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0);
            let widths: Vec<usize> = (0..cols.len())
                .map(|k| cells.iter().map(|r| r[k].chars().count()).max().unwrap_or(0))
                .collect();
            let mut out = String::new();
            for ((label, _), row) in rows.iter().zip(&cells) {
                let mut line = format!("{label:<label_w$}");
                for (cell, w) in row.iter().zip(&widths) {
                    let pad = w - cell.chars().count();
                    line.push_str("  ");
                    line.push_str(&" ".repeat(pad));
                    line.push_str(cell);
                }
                out.push_str(line.trim_end());
                out.push('\n');
            }
            out
        }
    }
}
