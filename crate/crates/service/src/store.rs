use crate::ServiceError;
use dise_psychometrics::ResponseRecord;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

pub const PARTICIPANTS_LOG: &str = "participants.ndjson";
pub const RESPONSES_LOG: &str = "responses.ndjson";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Participant {
    pub participant_id: String,
    pub booklet_index: usize,
    pub created_at: u64,
}

/// Append-only registry and response logs, replayed on open. Every append
/// is flushed to disk before the caller acknowledges anything.
#[derive(Debug)]
pub struct Store {
    dir: PathBuf,
    participants: HashMap<String, Participant>,
    registered: usize,
    cursors: HashMap<String, usize>,
    answered: HashSet<(String, String)>,
    responses: Vec<ResponseRecord>,
    participants_log: File,
    responses_log: File,
}

fn replay<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, ServiceError> {
    let Ok(f) = File::open(path) else { return Ok(Vec::new()) };
    let mut out = Vec::new();
    for line in BufReader::new(f).lines() {
        let line = line.map_err(ServiceError::store)?;
        if line.trim().is_empty() {
            continue;
        }
        // A torn final line from a crash mid-append was never acknowledged.
        match serde_json::from_str(&line) {
            Ok(v) => out.push(v),
            Err(_) => break,
        }
    }
    Ok(out)
}

fn open_append(path: &Path) -> Result<File, ServiceError> {
    OpenOptions::new().create(true).append(true).open(path).map_err(ServiceError::store)
}

fn append<T: Serialize>(f: &mut File, v: &T) -> Result<(), ServiceError> {
    let mut line = serde_json::to_vec(v).map_err(ServiceError::store)?;
    line.push(b'\n');
    f.write_all(&line).map_err(ServiceError::store)?;
    f.sync_data().map_err(ServiceError::store)
}

impl Store {
    pub fn open(dir: &Path) -> Result<Store, ServiceError> {
        std::fs::create_dir_all(dir).map_err(ServiceError::store)?;
        let ps: Vec<Participant> = replay(&dir.join(PARTICIPANTS_LOG))?;
        let rs: Vec<ResponseRecord> = replay(&dir.join(RESPONSES_LOG))?;
        let mut store = Store {
            dir: dir.to_path_buf(),
            registered: ps.len(),
            participants: ps.into_iter().map(|p| (p.participant_id.clone(), p)).collect(),
            cursors: HashMap::new(),
            answered: HashSet::new(),
            responses: Vec::new(),
            participants_log: open_append(&dir.join(PARTICIPANTS_LOG))?,
            responses_log: open_append(&dir.join(RESPONSES_LOG))?,
        };
        for r in rs {
            store.apply(r);
        }
        Ok(store)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn apply(&mut self, r: ResponseRecord) {
        *self.cursors.entry(r.participant_id.clone()).or_default() += 1;
        self.answered.insert((r.participant_id.clone(), r.item_id.clone()));
        self.responses.push(r);
    }

    /// Registrations so far, which drives round-robin booklet assignment.
    pub fn registered(&self) -> usize {
        self.registered
    }

    pub fn participant(&self, id: &str) -> Option<&Participant> {
        self.participants.get(id)
    }

    pub fn cursor(&self, id: &str) -> usize {
        self.cursors.get(id).copied().unwrap_or(0)
    }

    pub fn has_answered(&self, participant: &str, item: &str) -> bool {
        self.answered.contains(&(participant.to_string(), item.to_string()))
    }

    pub fn responses(&self) -> &[ResponseRecord] {
        &self.responses
    }

    pub fn register(&mut self, p: Participant) -> Result<(), ServiceError> {
        append(&mut self.participants_log, &p)?;
        self.registered += 1;
        self.participants.insert(p.participant_id.clone(), p);
        Ok(())
    }

    pub fn record(&mut self, r: ResponseRecord) -> Result<(), ServiceError> {
        append(&mut self.responses_log, &r)?;
        self.apply(r);
        Ok(())
    }
}

/// Reads a response log without opening it for writing.
pub fn read_responses(state_dir: &Path) -> Result<Vec<ResponseRecord>, ServiceError> {
    replay(&state_dir.join(RESPONSES_LOG))
}
