//! Item generators, prompt templates, quality control and dataset assembly.

mod dataset;
mod prompt;
mod qc;
mod tasks;

pub use dataset::{
    gen_dataset, read_item, read_items, split_counts, write_item, DatasetSpec, Manifest, ManifestEntry, ManifestHeader,
    Split, SplitCounts, MANIFEST_FILE, MAX_RETRIES,
};
pub use prompt::{emit_prompt, option_letter, question_sentence};
pub use qc::{verify_generated, verify_item, Check, ContentRegistry, QcReport};
pub use tasks::{
    gen_combination, gen_folding, gen_item, gen_projection, gen_rotation, gen_shapefind, Answer, GeneratedItem,
    GroundTruth, SHAPEFIND_MIN_SEPARATION,
};

use crate::render::RenderError;
use crate::view::{ViewKind, ViewPreset};
use crate::geometry::FaceId;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Rotation3d,
    Projection3d,
    Combination3d,
    Folding3d,
    Shapefind3d,
}

impl Task {
    pub const ALL: [Task; 5] = [
        Task::Rotation3d,
        Task::Projection3d,
        Task::Combination3d,
        Task::Folding3d,
        Task::Shapefind3d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Rotation3d => "rotation3d",
            Task::Projection3d => "projection3d",
            Task::Combination3d => "combination3d",
            Task::Folding3d => "folding3d",
            Task::Shapefind3d => "shapefind3d",
        }
    }

    pub fn dise(self) -> Dise {
        match self {
            Task::Rotation3d | Task::Folding3d => Dise::IntrinsicDynamic,
            Task::Projection3d => Dise::ExtrinsicStatic,
            Task::Combination3d => Dise::ExtrinsicDynamic,
            Task::Shapefind3d => Dise::IntrinsicStatic,
        }
    }

    pub fn abilities(self) -> Vec<Ability> {
        use Ability::*;
        match self {
            Task::Rotation3d => vec![SV, MR, SO],
            Task::Projection3d => vec![SP, SV],
            Task::Combination3d => vec![SV],
            Task::Folding3d => vec![SV, SR, SO],
            Task::Shapefind3d => vec![SV, SR],
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown task {s:?}"))
    }
}

/// Quadrant of the intrinsic/extrinsic × static/dynamic taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dise {
    #[serde(rename = "I-S")]
    IntrinsicStatic,
    #[serde(rename = "I-D")]
    IntrinsicDynamic,
    #[serde(rename = "E-S")]
    ExtrinsicStatic,
    #[serde(rename = "E-D")]
    ExtrinsicDynamic,
}

impl Dise {
    pub const ALL: [Dise; 4] = [
        Dise::IntrinsicStatic,
        Dise::IntrinsicDynamic,
        Dise::ExtrinsicStatic,
        Dise::ExtrinsicDynamic,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Dise::IntrinsicStatic => "I-S",
            Dise::IntrinsicDynamic => "I-D",
            Dise::ExtrinsicStatic => "E-S",
            Dise::ExtrinsicDynamic => "E-D",
        }
    }

    pub fn is_intrinsic(self) -> bool {
        matches!(self, Dise::IntrinsicStatic | Dise::IntrinsicDynamic)
    }

    pub fn is_static(self) -> bool {
        matches!(self, Dise::IntrinsicStatic | Dise::ExtrinsicStatic)
    }
}

impl fmt::Display for Dise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Spatial perception, relation, orientation, mental rotation, visualization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Ability {
    SP,
    SR,
    SO,
    MR,
    SV,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenConfig {
    pub task: Task,
    #[serde(default = "default_distractors")]
    pub n_distractors: usize,
    #[serde(default = "default_cell_range")]
    pub cell_range: (usize, usize),
    #[serde(default = "default_image_size")]
    pub image_size: u32,
    #[serde(default)]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub seed_namespace: String,
}

fn default_distractors() -> usize {
    3
}

fn default_cell_range() -> (usize, usize) {
    (5, 15)
}

fn default_image_size() -> u32 {
    crate::render::IMAGE_SIZE
}

impl GenConfig {
    pub fn new(task: Task) -> Self {
        GenConfig {
            task,
            n_distractors: default_distractors(),
            cell_range: default_cell_range(),
            image_size: default_image_size(),
            out_dir: PathBuf::new(),
            seed_namespace: String::new(),
        }
    }

    pub fn option_count(&self) -> usize {
        self.n_distractors + 1
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.n_distractors < 2 {
            return Err(PipelineError::Config(format!(
                "n_distractors must be at least 2, got {}",
                self.n_distractors
            )));
        }
        if self.option_count() > 26 {
            return Err(PipelineError::Config("at most 26 options can be lettered".into()));
        }
        if self.task == Task::Shapefind3d && self.option_count() > 6 {
            return Err(PipelineError::Config("a cube has only 6 faces to offer as options".into()));
        }
        let (lo, hi) = self.cell_range;
        if lo < 5 || lo > hi {
            return Err(PipelineError::Config(format!(
                "cell_range must satisfy 5 <= lo <= hi, got [{lo}, {hi}]"
            )));
        }
        if self.image_size != crate::render::IMAGE_SIZE {
            return Err(PipelineError::Config(format!(
                "only {}px images are supported",
                crate::render::IMAGE_SIZE
            )));
        }
        Ok(())
    }
}

/// Camera record as stored in item metadata. Angles include any jitter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViewRecord {
    pub kind: ViewKind,
    pub azimuth: f64,
    pub elevation: f64,
    pub ortho_dir: Option<FaceId>,
}

impl From<&ViewPreset> for ViewRecord {
    fn from(v: &ViewPreset) -> Self {
        let (azimuth, elevation) = v.effective_angles();
        ViewRecord {
            kind: v.kind,
            azimuth,
            elevation,
            ortho_dir: v.ortho_dir,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqaItem {
    pub question_id: String,
    pub task: Task,
    pub dise_category: Dise,
    pub spatial_abilities: Vec<Ability>,
    pub seed: u64,
    pub question_images: Vec<String>,
    pub option_images: Vec<String>,
    pub correct_index: usize,
    pub views: BTreeMap<String, ViewRecord>,
    pub prompt_text: String,
    /// Task-specific extras: net layout and face map, tiers, component count.
    #[serde(default)]
    pub details: BTreeMap<String, serde_json::Value>,
}

impl VqaItem {
    pub fn option_count(&self) -> usize {
        self.option_images.len()
    }

    pub fn images(&self) -> impl Iterator<Item = &String> {
        self.question_images.iter().chain(&self.option_images)
    }

    pub fn metadata_file(&self) -> String {
        format!("{}.json", self.question_id)
    }

    /// Generator settings recoverable from the item itself.
    pub fn config(&self) -> Result<GenConfig, PipelineError> {
        let mut cfg = GenConfig::new(self.task);
        cfg.n_distractors = self.option_count().saturating_sub(1);
        if let Some(v) = self.details.get("cell_range") {
            cfg.cell_range = serde_json::from_value(v.clone())
                .map_err(|e| PipelineError::Metadata(format!("cell_range: {e}")))?;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{id}: generation failed: {reason}")]
    Generation { id: String, reason: String },
    #[error("missing file {0}")]
    MissingFile(PathBuf),
    #[error("metadata mismatch for {id}: {what}")]
    Mismatch { id: String, what: String },
    #[error("bad metadata: {0}")]
    Metadata(String),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl PipelineError {
    pub(crate) fn generation(id: &str, reason: impl fmt::Display) -> Self {
        PipelineError::Generation {
            id: id.to_string(),
            reason: reason.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn static_task_map() {
        assert_eq!(Task::Rotation3d.dise(), Dise::IntrinsicDynamic);
        assert_eq!(Task::Projection3d.dise(), Dise::ExtrinsicStatic);
        assert_eq!(Task::Combination3d.dise(), Dise::ExtrinsicDynamic);
        assert_eq!(Task::Folding3d.dise(), Dise::IntrinsicDynamic);
        assert_eq!(Task::Shapefind3d.dise(), Dise::IntrinsicStatic);
        for t in Task::ALL {
            assert_eq!(t.name().parse::<Task>().unwrap(), t);
            assert_eq!(serde_json::to_value(t).unwrap(), t.name());
        }
        assert_eq!(serde_json::to_value(Dise::ExtrinsicDynamic).unwrap(), "E-D");
    }

    #[test]
    fn config_validation() {
        let mut c = GenConfig::new(Task::Rotation3d);
        assert!(c.validate().is_ok());
        c.n_distractors = 1;
        assert!(c.validate().is_err());
        c.n_distractors = 3;
        c.cell_range = (9, 8);
        assert!(c.validate().is_err());
    }
}
