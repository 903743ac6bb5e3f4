use super::{gen_item, GeneratedItem, PipelineError, Task, VqaItem};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    fn ok() -> Self {
        Check { pass: true, witness: None }
    }

    fn fail(witness: String) -> Self {
        Check {
            pass: false,
            witness: Some(witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QcReport {
    pub question_id: String,
    pub uniqueness: Check,
    pub clarity: Check,
    pub redundancy: Check,
    /// Content hash of the item, hex.
    pub content_hash: String,
}

impl QcReport {
    pub fn passed(&self) -> bool {
        self.uniqueness.pass && self.clarity.pass && self.redundancy.pass
    }
}

/// Content hashes of accepted items, shared across one run.
#[derive(Debug, Default)]
pub struct ContentRegistry {
    seen: HashMap<String, String>,
}

impl ContentRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }

    pub fn owner(&self, hash: &str) -> Option<&str> {
        self.seen.get(hash).map(String::as_str)
    }

    pub fn insert(&mut self, hash: String, id: &str) {
        self.seen.entry(hash).or_insert_with(|| id.to_string());
    }
}

fn content_hash(task: Task, files: &[(String, Vec<u8>)]) -> String {
    let mut h = Sha256::new();
    h.update(task.name().as_bytes());
    for (_, bytes) in files {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    hex::encode(h.finalize())
}

fn mismatch(id: &str, what: impl Into<String>) -> PipelineError {
    PipelineError::Mismatch {
        id: id.to_string(),
        what: what.into(),
    }
}

/// Regenerates from the recorded id and checks every metadata field except
/// the answer position, which uniqueness judges separately.
fn regenerate(item: &VqaItem) -> Result<GeneratedItem, PipelineError> {
    let regen = gen_item(&item.question_id, &item.config()?)?;
    if regen.item.seed != item.seed {
        return Err(mismatch(
            &item.question_id,
            format!("seed {} regenerates as {}", item.seed, regen.item.seed),
        ));
    }
    let mut expected = regen.item.clone();
    expected.correct_index = item.correct_index;
    if expected != *item {
        let a = serde_json::to_value(item)?;
        let b = serde_json::to_value(&expected)?;
        let field = a
            .as_object()
            .and_then(|a| a.iter().find(|(k, v)| b.get(k.as_str()) != Some(*v)).map(|(k, _)| k.clone()))
            .unwrap_or_else(|| "?".into());
        return Err(mismatch(&item.question_id, format!("field {field} differs on regeneration")));
    }
    Ok(regen)
}

fn judge(
    item: &VqaItem,
    regen: &GeneratedItem,
    files: &[(String, Vec<u8>)],
    registry: &mut ContentRegistry,
) -> QcReport {
    let eq = regen.truth.equivalent_options();
    let uniqueness = if eq == [item.correct_index] {
        Check::ok()
    } else {
        Check::fail(format!(
            "answer-equivalent options {eq:?}, recorded correct_index {}",
            item.correct_index
        ))
    };

    let clarity = match regen.images.iter().find(|(_, img)| img.is_blank()) {
        Some((name, _)) => Check::fail(format!("{name} is blank")),
        None => {
            let opts = &files[item.question_images.len()..];
            let dup = opts
                .iter()
                .enumerate()
                .flat_map(|(i, a)| opts[i + 1..].iter().map(move |b| (a, b)))
                .find(|(a, b)| a.1 == b.1);
            match dup {
                Some((a, b)) => Check::fail(format!("{} and {} are identical", a.0, b.0)),
                None => Check::ok(),
            }
        }
    };

    let hash = content_hash(item.task, files);
    let redundancy = match registry.owner(&hash) {
        Some(first) => Check::fail(format!("same content as {first}")),
        None => Check::ok(),
    };
    let report = QcReport {
        question_id: item.question_id.clone(),
        uniqueness,
        clarity,
        redundancy,
        content_hash: hash.clone(),
    };
    if report.passed() {
        registry.insert(hash, &item.question_id);
    }
    report
}

/// Checks an item on disk: its images must exist and match a fresh
/// regeneration byte for byte before the content checks run.
pub fn verify_item(item: &VqaItem, dir: &Path, registry: &mut ContentRegistry) -> Result<QcReport, PipelineError> {
    let mut files = Vec::new();
    for name in item.images() {
        let path = dir.join(name);
        let bytes = std::fs::read(&path).map_err(|_| PipelineError::MissingFile(path.clone()))?;
        files.push((name.clone(), bytes));
    }
    let regen = regenerate(item)?;
    for ((name, bytes), (_, img)) in files.iter().zip(&regen.images) {
        if *bytes != img.encode_png()? {
            return Err(mismatch(&item.question_id, format!("{name} differs from its regeneration")));
        }
    }
    Ok(judge(item, &regen, &files, registry))
}

/// Same checks for an item still in memory.
pub fn verify_generated(g: &GeneratedItem, registry: &mut ContentRegistry) -> Result<QcReport, PipelineError> {
    let regen = regenerate(&g.item)?;
    if regen.images != g.images {
        return Err(mismatch(&g.item.question_id, "images differ from their regeneration"));
    }
    let files = g
        .images
        .iter()
        .map(|(n, img)| Ok((n.clone(), img.encode_png()?)))
        .collect::<Result<Vec<_>, PipelineError>>()?;
    Ok(judge(&g.item, &regen, &files, registry))
}
