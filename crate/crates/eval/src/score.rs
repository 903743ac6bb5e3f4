use crate::{parse_choice, EvalError};
use dise_core::pipeline::{Dise, Manifest, Task};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyEntry {
    pub correct_index: usize,
    pub option_count: usize,
    pub task: Task,
    pub dise_category: Dise,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AnswerKey {
    pub items: BTreeMap<String, KeyEntry>,
}

impl AnswerKey {
    pub fn from_manifest(m: &Manifest) -> Result<Self, EvalError> {
        let mut items = BTreeMap::new();
        for e in &m.entries {
            if e.correct_index >= e.option_count {
                return Err(EvalError::BadKey(e.question_id.clone()));
            }
            let entry = KeyEntry {
                correct_index: e.correct_index,
                option_count: e.option_count,
                task: e.task,
                dise_category: e.dise_category,
            };
            items.insert(e.question_id.clone(), entry);
        }
        Ok(AnswerKey { items })
    }

    /// Accepts a dataset directory or the manifest file itself.
    pub fn load(path: &Path) -> Result<Self, EvalError> {
        let dir = if path.is_dir() { path } else { path.parent().unwrap_or(Path::new(".")) };
        Self::from_manifest(&Manifest::read(dir)?)
    }

    /// Expected accuracy of uniform guessing: mean of 1/options.
    pub fn random_baseline(&self) -> f64 {
        self.items.values().map(|e| 1.0 / e.option_count as f64).sum::<f64>() / self.items.len() as f64
    }
}

/// One line of an answers file: free text to parse or a direct index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerRecord {
    pub item_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choice_index: Option<usize>,
}

impl AnswerRecord {
    pub fn text(item_id: impl Into<String>, raw: impl Into<String>) -> Self {
        AnswerRecord {
            item_id: item_id.into(),
            raw_text: Some(raw.into()),
            choice_index: None,
        }
    }

    pub fn index(item_id: impl Into<String>, i: usize) -> Self {
        AnswerRecord {
            item_id: item_id.into(),
            raw_text: None,
            choice_index: Some(i),
        }
    }
}

pub fn read_answers(text: &str) -> Result<Vec<AnswerRecord>, EvalError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(n, l)| serde_json::from_str(l).map_err(|e| EvalError::Answers(format!("line {}: {e}", n + 1))))
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub correct: usize,
    pub total: usize,
    pub unparsed: usize,
}

impl Tally {
    pub fn accuracy(&self) -> Option<f64> {
        (self.total > 0).then(|| self.correct as f64 / self.total as f64)
    }

    fn add(&mut self, correct: bool, parsed: bool) {
        self.total += 1;
        self.correct += correct as usize;
        self.unparsed += !parsed as usize;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemScore {
    pub item_id: String,
    pub parsed: Option<usize>,
    pub correct: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredRun {
    pub items: Vec<ItemScore>,
    pub overall: Tally,
    pub by_task: BTreeMap<Task, Tally>,
    pub by_quadrant: BTreeMap<Dise, Tally>,
    pub static_: Tally,
    pub dynamic: Tally,
    pub intrinsic: Tally,
    pub extrinsic: Tally,
}

/// Exact match per answered item. Every group weights items equally, and an
/// unparsed answer counts as wrong.
pub fn score(key: &AnswerKey, answers: &[AnswerRecord]) -> Result<ScoredRun, EvalError> {
    let mut seen = BTreeSet::new();
    let mut items = Vec::with_capacity(answers.len());
    for a in answers {
        let k = key.items.get(&a.item_id).ok_or_else(|| EvalError::UnknownItem(a.item_id.clone()))?;
        if !seen.insert(a.item_id.as_str()) {
            return Err(EvalError::Duplicate(a.item_id.clone()));
        }
        let parsed = match (a.choice_index, &a.raw_text) {
            (Some(i), _) => (i < k.option_count).then_some(i),
            (None, Some(t)) => parse_choice(t, k.option_count),
            (None, None) => None,
        };
        items.push(ItemScore {
            item_id: a.item_id.clone(),
            parsed,
            correct: parsed == Some(k.correct_index),
        });
    }
    items.sort_by(|x, y| x.item_id.cmp(&y.item_id));

    let mut run = ScoredRun {
        items: Vec::new(),
        overall: Tally::default(),
        by_task: Task::ALL.into_iter().map(|t| (t, Tally::default())).collect(),
        by_quadrant: Dise::ALL.into_iter().map(|d| (d, Tally::default())).collect(),
        static_: Tally::default(),
        dynamic: Tally::default(),
        intrinsic: Tally::default(),
        extrinsic: Tally::default(),
    };
    for s in &items {
        let k = &key.items[&s.item_id];
        let (c, p) = (s.correct, s.parsed.is_some());
        run.overall.add(c, p);
        run.by_task.get_mut(&k.task).expect("all tasks present").add(c, p);
        run.by_quadrant.get_mut(&k.dise_category).expect("all quadrants present").add(c, p);
        let d = k.dise_category;
        if d.is_static() { &mut run.static_ } else { &mut run.dynamic }.add(c, p);
        if d.is_intrinsic() { &mut run.intrinsic } else { &mut run.extrinsic }.add(c, p);
    }
    run.items = items;
    Ok(run)
}
