use crate::irt::ResponseMatrix;
use crate::PsychError;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// One timed answer, as appended to the response log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResponseRecord {
    pub participant_id: String,
    pub item_id: String,
    pub chosen_index: usize,
    pub correct: bool,
    pub elapsed_ms: u64,
    #[serde(default)]
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskTimeRow {
    pub task: String,
    pub responses: usize,
    pub accuracy: f64,
    pub mean_s: f64,
    pub median_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSummary {
    pub responses: usize,
    pub mean_s: f64,
    pub median_s: f64,
    pub per_task: Vec<TaskTimeRow>,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Mean and median response time in seconds, overall and per task. `task_of`
/// maps an item id to its task; unknown items are grouped under `"?"`.
pub fn response_time_summary<'a>(
    records: &[ResponseRecord],
    task_of: impl Fn(&str) -> Option<&'a str>,
) -> Result<TimeSummary, PsychError> {
    if records.is_empty() {
        return Err(PsychError::Empty);
    }
    let mut all: Vec<f64> = records.iter().map(|r| r.elapsed_ms as f64 / 1000.0).collect();
    let mut groups: BTreeMap<&str, (Vec<f64>, usize)> = BTreeMap::new();
    for r in records {
        let g = groups.entry(task_of(&r.item_id).unwrap_or("?")).or_default();
        g.0.push(r.elapsed_ms as f64 / 1000.0);
        g.1 += r.correct as usize;
    }
    let per_task = groups
        .into_iter()
        .map(|(task, (mut ts, correct))| TaskTimeRow {
            task: task.to_string(),
            responses: ts.len(),
            accuracy: correct as f64 / ts.len() as f64,
            mean_s: mean(&ts),
            median_s: median(&mut ts),
        })
        .collect();
    Ok(TimeSummary {
        responses: records.len(),
        mean_s: mean(&all),
        median_s: median(&mut all),
        per_task,
    })
}

/// Responses laid out as a matrix, with the ids behind each row and column.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexedResponses {
    pub matrix: ResponseMatrix,
    pub items: Vec<String>,
    pub persons: Vec<String>,
}

impl IndexedResponses {
    pub fn item_index(&self, id: &str) -> Option<usize> {
        self.items.iter().position(|x| x == id)
    }
}

/// Items and participants are indexed in sorted id order; a repeated
/// (participant, item) pair keeps its first record.
pub fn index_responses(records: &[ResponseRecord]) -> IndexedResponses {
    let mut items: Vec<String> = records.iter().map(|r| r.item_id.clone()).collect();
    let mut persons: Vec<String> = records.iter().map(|r| r.participant_id.clone()).collect();
    items.sort();
    items.dedup();
    persons.sort();
    persons.dedup();
    let ii: HashMap<&str, usize> = items.iter().enumerate().map(|(k, v)| (v.as_str(), k)).collect();
    let pi: HashMap<&str, usize> = persons.iter().enumerate().map(|(k, v)| (v.as_str(), k)).collect();
    let mut matrix = ResponseMatrix::new(items.len(), persons.len());
    for r in records {
        let (i, j) = (ii[r.item_id.as_str()], pi[r.participant_id.as_str()]);
        if matrix.get(i, j).is_none() {
            matrix.set(i, j, Some(r.correct));
        }
    }
    IndexedResponses { matrix, items, persons }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(p: &str, item: &str, correct: bool, ms: u64) -> ResponseRecord {
        ResponseRecord {
            participant_id: p.into(),
            item_id: item.into(),
            chosen_index: 0,
            correct,
            elapsed_ms: ms,
            timestamp: 0,
        }
    }

    #[test]
    fn summaries() {
        let one = response_time_summary(&[rec("p", "i", true, 10_000)], |_| Some("t")).unwrap();
        assert_eq!((one.mean_s, one.median_s), (10.0, 10.0));
        let recs = [rec("p", "x1", true, 10_000), rec("p", "y1", false, 20_000), rec("q", "x2", true, 90_000)];
        let s = response_time_summary(&recs, |id| Some(if id.starts_with('x') { "x" } else { "y" })).unwrap();
        assert_eq!((s.median_s, s.mean_s), (20.0, 40.0));
        assert_eq!(s.per_task.len(), 2);
        assert_eq!(s.per_task[0].task, "x");
        assert_eq!(s.per_task[0].median_s, 50.0);
        assert_eq!(s.per_task[0].accuracy, 1.0);
        assert!(response_time_summary(&[], |_| None).is_err());
    }

    #[test]
    fn indexing_keeps_first_duplicate() {
        let recs = [rec("b", "i2", true, 1), rec("a", "i1", false, 1), rec("b", "i2", false, 1)];
        let ix = index_responses(&recs);
        assert_eq!(ix.items, ["i1", "i2"]);
        assert_eq!(ix.persons, ["a", "b"]);
        assert_eq!(ix.matrix.get(1, 1), Some(true));
        assert_eq!(ix.matrix.get(0, 1), None);
        assert_eq!(ix.matrix.observed(), 2);
    }
}
