use super::{gen_item, verify_item, ContentRegistry, Dise, GenConfig, GeneratedItem, PipelineError, Task, VqaItem};
use crate::seed::{derive_seed, stream_rng, Stream};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const MANIFEST_FILE: &str = "manifest.ndjson";
pub const MAX_RETRIES: u32 = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    pub namespace: String,
    pub counts: BTreeMap<Task, usize>,
    #[serde(default = "default_distractors")]
    pub n_distractors: usize,
    #[serde(default = "default_cell_range")]
    pub cell_range: (usize, usize),
    pub out_dir: PathBuf,
}

fn default_distractors() -> usize {
    3
}

fn default_cell_range() -> (usize, usize) {
    (5, 15)
}

impl DatasetSpec {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Hash of everything that shapes the output; the output directory is
    /// excluded so the same dataset hashes the same wherever it is written.
    pub fn config_hash(&self) -> String {
        let canon = serde_json::json!({
            "namespace": self.namespace,
            "counts": self.counts,
            "n_distractors": self.n_distractors,
            "cell_range": self.cell_range,
        });
        hex::encode(Sha256::digest(canon.to_string().as_bytes()))
    }

    fn config(&self, task: Task) -> GenConfig {
        let mut c = GenConfig::new(task);
        c.n_distractors = self.n_distractors;
        c.cell_range = self.cell_range;
        c.out_dir = self.out_dir.clone();
        c.seed_namespace = self.namespace.clone();
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCounts {
    pub train: usize,
    pub val: usize,
    pub test: usize,
}

/// 70/15/15 with both leading shares rounded down; the remainder goes to test.
pub fn split_counts(n: usize) -> SplitCounts {
    let train = n * 70 / 100;
    let val = n * 15 / 100;
    SplitCounts {
        train,
        val,
        test: n - train - val,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestHeader {
    pub namespace: String,
    pub config_hash: String,
    pub items: usize,
    pub splits: SplitCounts,
    pub skipped: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub question_id: String,
    pub task: Task,
    pub dise_category: Dise,
    pub correct_index: usize,
    pub option_count: usize,
    pub split: Split,
    pub metadata: String,
    pub content_hash: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub header: ManifestHeader,
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn to_ndjson(&self) -> Result<Vec<u8>, PipelineError> {
        let mut out = serde_json::to_vec(&self.header)?;
        out.push(b'\n');
        for e in &self.entries {
            serde_json::to_writer(&mut out, e)?;
            out.push(b'\n');
        }
        Ok(out)
    }

    pub fn read(dir: &Path) -> Result<Manifest, PipelineError> {
        let path = dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(|_| PipelineError::MissingFile(path))?;
        let mut lines = text.lines();
        let header = serde_json::from_str(lines.next().unwrap_or_default())?;
        let entries = lines.map(serde_json::from_str).collect::<Result<_, _>>()?;
        Ok(Manifest { header, entries })
    }
}

/// Writes the PNGs and the metadata document of one item.
pub fn write_item(g: &GeneratedItem, dir: &Path) -> Result<(), PipelineError> {
    fs::create_dir_all(dir)?;
    for (name, img) in &g.images {
        fs::write(dir.join(name), img.encode_png()?)?;
    }
    fs::write(dir.join(g.item.metadata_file()), serde_json::to_vec_pretty(&g.item)?)?;
    Ok(())
}

fn remove_item(item: &VqaItem, dir: &Path) {
    for name in item.images() {
        let _ = fs::remove_file(dir.join(name));
    }
    let _ = fs::remove_file(dir.join(item.metadata_file()));
}

pub fn read_item(path: &Path) -> Result<VqaItem, PipelineError> {
    let bytes = fs::read(path).map_err(|_| PipelineError::MissingFile(path.to_path_buf()))?;
    serde_json::from_slice(&bytes).map_err(|e| PipelineError::Metadata(format!("{}: {e}", path.display())))
}

/// Every item metadata document in `dir`, sorted by file name.
pub fn read_items(dir: &Path) -> Result<Vec<VqaItem>, PipelineError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| read_item(p)).collect()
}

/// Generates, writes and verifies items one by one; only passing items stay
/// on disk. `progress` sees (done, total) after each slot.
pub fn gen_dataset(spec: &DatasetSpec, mut progress: impl FnMut(usize, usize)) -> Result<Manifest, PipelineError> {
    if spec.counts.values().any(|&c| c == 0) || spec.counts.is_empty() {
        return Err(PipelineError::Config("every listed task needs a count of at least 1".into()));
    }
    for &task in spec.counts.keys() {
        spec.config(task).validate()?;
    }
    let dir = &spec.out_dir;
    fs::create_dir_all(dir)?;
    let total = spec.total();
    let mut registry = ContentRegistry::new();
    let mut accepted: Vec<(VqaItem, String)> = Vec::new();
    let mut skipped = Vec::new();
    let mut done = 0;
    for task in Task::ALL {
        let Some(&count) = spec.counts.get(&task) else { continue };
        let cfg = spec.config(task);
        for index in 0..count {
            let base = format!("{}_{}_{}", spec.namespace, task, index);
            let mut kept = None;
            for retry in 0..=MAX_RETRIES {
                let id = if retry == 0 { base.clone() } else { format!("{base}_r{retry}") };
                let Ok(g) = gen_item(&id, &cfg) else { continue };
                write_item(&g, dir)?;
                // Judge what a reader will see, not the in-memory copy.
                let on_disk = read_item(&dir.join(g.item.metadata_file()))?;
                match verify_item(&on_disk, dir, &mut registry) {
                    Ok(r) if r.passed() => {
                        kept = Some((g.item, r.content_hash));
                        break;
                    }
                    Ok(_) | Err(PipelineError::Mismatch { .. }) => remove_item(&g.item, dir),
                    Err(e) => return Err(e),
                }
            }
            match kept {
                Some(k) => accepted.push(k),
                None => skipped.push(base),
            }
            done += 1;
            progress(done, total);
        }
    }

    let splits = split_counts(accepted.len());
    let mut order: Vec<usize> = (0..accepted.len()).collect();
    order.shuffle(&mut stream_rng(derive_seed(&spec.namespace), Stream::Split));
    let mut split = vec![Split::Test; accepted.len()];
    for (rank, &i) in order.iter().enumerate() {
        split[i] = if rank < splits.train {
            Split::Train
        } else if rank < splits.train + splits.val {
            Split::Val
        } else {
            Split::Test
        };
    }
    let entries = accepted
        .into_iter()
        .zip(split)
        .map(|((item, content_hash), split)| ManifestEntry {
            metadata: item.metadata_file(),
            question_id: item.question_id,
            task: item.task,
            dise_category: item.dise_category,
            correct_index: item.correct_index,
            option_count: item.option_images.len(),
            split,
            content_hash,
        })
        .collect::<Vec<_>>();
    let manifest = Manifest {
        header: ManifestHeader {
            namespace: spec.namespace.clone(),
            config_hash: spec.config_hash(),
            items: entries.len(),
            splits,
            skipped,
        },
        entries,
    };
    let mut f = fs::File::create(dir.join(MANIFEST_FILE))?;
    f.write_all(&manifest.to_ndjson()?)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_rule() {
        let s = split_counts(12355);
        assert_eq!((s.train, s.val, s.test), (8648, 1853, 1854));
        for n in 0..500 {
            let s = split_counts(n);
            assert_eq!(s.train + s.val + s.test, n);
            assert!((s.train as f64 - 0.7 * n as f64).abs() < 1.0);
            assert!((s.val as f64 - 0.15 * n as f64).abs() < 1.0);
        }
    }

    #[test]
    fn small_dataset_is_reproducible() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let mut spec = DatasetSpec {
            namespace: "mini".into(),
            counts: Task::ALL.into_iter().map(|t| (t, 2)).collect(),
            n_distractors: 3,
            cell_range: (5, 15),
            out_dir: a.path().into(),
        };
        let m1 = gen_dataset(&spec, |_, _| {}).unwrap();
        spec.out_dir = b.path().into();
        let m2 = gen_dataset(&spec, |_, _| {}).unwrap();
        assert_eq!(m1.header.items, 10);
        assert_eq!(m1.header.items + m1.header.skipped.len(), spec.total());
        let bytes = |d: &Path| fs::read(d.join(MANIFEST_FILE)).unwrap();
        assert_eq!(bytes(a.path()), bytes(b.path()));
        assert_eq!(Manifest::read(a.path()).unwrap(), m1);
        assert_eq!(read_items(a.path()).unwrap().len(), 10);
        assert_eq!(m2.entries, m1.entries);
    }
}
