//! Booklet assignment, item delivery and timed response capture over
//! HTTP/JSON, with live accuracy statistics.

mod api;
mod stats;
mod store;

pub use api::{load_items, router, Ack, AppState, Choice, NextItem, Registration, ResponseIn, MAX_ELAPSED_MS};
pub use stats::{
    compute_stats, fit_irt_report, load_irt, save_irt, stats_table, Catalog, IrtReport, Stats, Timing, IRT_FILE,
};
pub use store::{read_responses, Participant, Store, PARTICIPANTS_LOG, RESPONSES_LOG};

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use std::net::SocketAddr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("unknown participant")]
    UnknownParticipant,
    #[error("not found")]
    NotFound,
    #[error("response already recorded")]
    Duplicate,
    #[error("{0}")]
    Invalid(String),
    #[error("store unavailable: {0}")]
    Store(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("statistics: {0}")]
    Stats(String),
    #[error(transparent)]
    Items(#[from] dise_core::pipeline::PipelineError),
}

impl ServiceError {
    pub(crate) fn store(e: impl std::fmt::Display) -> Self {
        ServiceError::Store(e.to_string())
    }

    pub fn status(&self) -> StatusCode {
        match self {
            ServiceError::UnknownParticipant | ServiceError::NotFound => StatusCode::NOT_FOUND,
            ServiceError::Duplicate => StatusCode::CONFLICT,
            ServiceError::Invalid(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Store(_) => StatusCode::SERVICE_UNAVAILABLE,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        (self.status(), Json(serde_json::json!({ "error": self.to_string() }))).into_response()
    }
}

pub async fn serve(state: AppState, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state)).await
}
