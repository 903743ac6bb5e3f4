//! Scoring of answer files against dataset answer keys.

mod annotation;
mod parse;
mod report;
mod score;

pub use annotation::{ErrorAnnotation, MajorError, ReasoningError};
pub use parse::parse_choice;
pub use report::{report, Format, EMPTY_CELL};
pub use score::{read_answers, score, AnswerKey, AnswerRecord, ItemScore, KeyEntry, ScoredRun, Tally};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("answer for unknown item {0}")]
    UnknownItem(String),
    #[error("item {0} answered more than once")]
    Duplicate(String),
    #[error("answer key entry {0} is invalid")]
    BadKey(String),
    #[error("bad answers file: {0}")]
    Answers(String),
    #[error("bad annotation: {0}")]
    Annotation(String),
    #[error(transparent)]
    Manifest(#[from] dise_core::pipeline::PipelineError),
}
