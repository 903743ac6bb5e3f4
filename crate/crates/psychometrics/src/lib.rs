//! Human-baseline statistics: matrix-sampled booklets, proportion-correct
//! with Wald intervals, and a two-parameter logistic item response model.

mod booklet;
mod ctt;
mod irt;
pub mod sim;
mod timing;

pub use booklet::{anchor_count, booklet_count, derive_booklet_size, make_booklets, BookletPlan};
pub use ctt::{ctt, CttStats, Z95};
pub use irt::{
    fit_2pl, irt_category, irt_category_from_means, penalized_gradient, penalized_loglik, probability, FitOptions,
    Gradient, IrtCategoryStats, IrtModel, Priors, ResponseMatrix,
};
pub use timing::{index_responses, response_time_summary, IndexedResponses, ResponseRecord, TaskTimeRow, TimeSummary};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PsychError {
    #[error("no responses")]
    Empty,
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("degenerate data: {0}")]
    Degenerate(String),
}
