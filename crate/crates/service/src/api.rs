use crate::stats::{compute_stats, load_irt, Catalog, Stats};
use crate::store::{Participant, Store};
use crate::ServiceError;
use axum::extract::{Path as UrlPath, State};
use axum::http::header;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use dise_core::pipeline::{option_letter, read_item, Manifest, VqaItem, MANIFEST_FILE};
use dise_psychometrics::{BookletPlan, ResponseRecord};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

/// Upper bound on a plausible response time: one hour.
pub const MAX_ELAPSED_MS: u64 = 3_600_000;

pub struct Shared {
    items_dir: PathBuf,
    items: HashMap<String, VqaItem>,
    catalog: Catalog,
    plan: BookletPlan,
    store: RwLock<Store>,
}

#[derive(Clone)]
pub struct AppState(Arc<Shared>);

/// Item metadata listed by the manifest in `dir`, or every metadata
/// document there if it has no manifest.
pub fn load_items(dir: &Path) -> Result<Vec<VqaItem>, ServiceError> {
    let items = if dir.join(MANIFEST_FILE).exists() {
        let m = Manifest::read(dir)?;
        m.entries
            .iter()
            .map(|e| read_item(&dir.join(&e.metadata)))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        dise_core::pipeline::read_items(dir)?
    };
    Ok(items)
}

impl AppState {
    pub fn open(items_dir: &Path, plan: BookletPlan, state_dir: &Path) -> Result<Self, ServiceError> {
        let items: HashMap<String, VqaItem> = load_items(items_dir)?
            .into_iter()
            .map(|it| (it.question_id.clone(), it))
            .collect();
        if plan.booklets.is_empty() {
            return Err(ServiceError::Config("booklet plan has no booklets".into()));
        }
        if let Some(missing) = plan.booklets.iter().flatten().find(|id| !items.contains_key(*id)) {
            return Err(ServiceError::Config(format!("plan item {missing} is not in the items directory")));
        }
        let catalog = items
            .values()
            .map(|it| (it.question_id.clone(), (it.task, it.dise_category)))
            .collect();
        Ok(AppState(Arc::new(Shared {
            items_dir: items_dir.to_path_buf(),
            items,
            catalog,
            plan,
            store: RwLock::new(Store::open(state_dir)?),
        })))
    }

    pub fn catalog(&self) -> &Catalog {
        &self.0.catalog
    }

    pub fn stats(&self) -> Stats {
        let store = self.0.store.read().expect("store lock");
        compute_stats(store.responses(), &self.0.catalog, load_irt(store.dir()))
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/participants", post(register))
        .route("/participants/{id}/next", get(next_item))
        .route("/responses", post(respond))
        .route("/stats", get(stats))
        .route("/images/{name}", get(image))
        .with_state(state)
}

fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Registration {
    pub participant_id: String,
    pub booklet_index: usize,
    #[serde(rename = "K")]
    pub k: usize,
}

async fn register(State(s): State<AppState>) -> Result<Json<Registration>, ServiceError> {
    let mut store = s.0.store.write().expect("store lock");
    let n = store.registered();
    let booklet_index = n % s.0.plan.len();
    let p = Participant {
        participant_id: format!("p{n:06}-{:016x}", rand::random::<u64>()),
        booklet_index,
        created_at: now_ms(),
    };
    let id = p.participant_id.clone();
    store.register(p)?;
    Ok(Json(Registration {
        participant_id: id,
        booklet_index,
        k: s.0.plan.booklets[booklet_index].len(),
    }))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NextItem {
    Item {
        item_id: String,
        prompt_text: String,
        image_urls: Vec<String>,
        option_labels: Vec<String>,
        position: usize,
        #[serde(rename = "K")]
        k: usize,
    },
    Done {
        done: bool,
    },
}

async fn next_item(State(s): State<AppState>, UrlPath(id): UrlPath<String>) -> Result<Json<NextItem>, ServiceError> {
    let store = s.0.store.read().expect("store lock");
    let p = store.participant(&id).ok_or(ServiceError::UnknownParticipant)?;
    let booklet = &s.0.plan.booklets[p.booklet_index];
    let cursor = store.cursor(&id);
    let Some(item_id) = booklet.get(cursor) else {
        return Ok(Json(NextItem::Done { done: true }));
    };
    let item = &s.0.items[item_id];
    Ok(Json(NextItem::Item {
        item_id: item_id.clone(),
        prompt_text: item.prompt_text.clone(),
        image_urls: item.images().map(|n| format!("/images/{n}")).collect(),
        option_labels: (0..item.option_count()).map(|i| option_letter(i).to_string()).collect(),
        position: cursor,
        k: booklet.len(),
    }))
}

/// An option as an index or a letter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Choice {
    Index(usize),
    Letter(String),
}

impl Choice {
    fn index(&self) -> Option<usize> {
        match self {
            Choice::Index(i) => Some(*i),
            Choice::Letter(l) => {
                let mut cs = l.trim().chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) if c.is_ascii_alphabetic() => Some((c.to_ascii_uppercase() as u8 - b'A') as usize),
                    _ => None,
                }
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ResponseIn {
    pub participant_id: String,
    pub item_id: String,
    pub choice: Choice,
    pub elapsed_ms: u64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Ack {
    pub ok: bool,
    pub cursor: usize,
}

async fn respond(State(s): State<AppState>, Json(r): Json<ResponseIn>) -> Result<Json<Ack>, ServiceError> {
    let mut store = s.0.store.write().expect("store lock");
    let p = store.participant(&r.participant_id).ok_or(ServiceError::UnknownParticipant)?;
    if store.has_answered(&r.participant_id, &r.item_id) {
        return Err(ServiceError::Duplicate);
    }
    let booklet = &s.0.plan.booklets[p.booklet_index];
    let cursor = store.cursor(&r.participant_id);
    if booklet.get(cursor) != Some(&r.item_id) {
        return Err(ServiceError::Invalid(format!("{} is not the current item", r.item_id)));
    }
    let item = &s.0.items[&r.item_id];
    let chosen = r
        .choice
        .index()
        .filter(|&i| i < item.option_count())
        .ok_or_else(|| ServiceError::Invalid(format!("invalid choice {:?}", r.choice)))?;
    if r.elapsed_ms == 0 || r.elapsed_ms >= MAX_ELAPSED_MS {
        return Err(ServiceError::Invalid(format!("elapsed_ms {} out of range", r.elapsed_ms)));
    }
    store.record(ResponseRecord {
        participant_id: r.participant_id.clone(),
        item_id: r.item_id,
        chosen_index: chosen,
        correct: chosen == item.correct_index,
        elapsed_ms: r.elapsed_ms,
        timestamp: now_ms(),
    })?;
    Ok(Json(Ack {
        ok: true,
        cursor: cursor + 1,
    }))
}

async fn stats(State(s): State<AppState>) -> Json<Stats> {
    Json(s.stats())
}

async fn image(State(s): State<AppState>, UrlPath(name): UrlPath<String>) -> Result<Response, ServiceError> {
    let safe = name.ends_with(".png") && !name.contains(['/', '\\']) && !name.starts_with('.');
    if !safe {
        return Err(ServiceError::NotFound);
    }
    let bytes = tokio::fs::read(s.0.items_dir.join(&name)).await.map_err(|_| ServiceError::NotFound)?;
    Ok(([(header::CONTENT_TYPE, "image/png")], bytes).into_response())
}
