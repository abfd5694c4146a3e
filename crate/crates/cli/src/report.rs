//! Deterministic JSON reports. Field order is fixed by the struct; nothing
//! time-dependent goes in here.

use agorum::axioms::Violation;
use agorum::safety::MISubset;
use agorum::{Agenda, Formula, JudgmentSet, Profile};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub options: serde_json::Map<String, Value>,
    pub inputs_digest: String,
    pub result: Value,
    pub witnesses: Vec<Value>,
}

#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub command: String,
    pub error: ErrorBody,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

/// Collects the command echo and everything read from disk.
#[derive(Debug, Default)]
pub struct Inputs {
    pub options: Vec<(String, String)>,
    files: Vec<(String, Vec<u8>)>,
}

impl Inputs {
    pub fn option(&mut self, key: &str, value: impl ToString) {
        self.options.push((key.to_string(), value.to_string()));
    }

    pub fn file(&mut self, label: &str, bytes: Vec<u8>) {
        self.files.push((label.to_string(), bytes));
    }

    /// SHA-256 over the command, the options and the file contents, each
    /// length-prefixed so that field boundaries cannot shift.
    pub fn digest(&self, command: &str) -> String {
        let mut h = Sha256::new();
        let mut put = |b: &[u8]| {
            h.update((b.len() as u64).to_le_bytes());
            h.update(b);
        };
        put(command.as_bytes());
        for (k, v) in &self.options {
            put(k.as_bytes());
            put(v.as_bytes());
        }
        for (k, v) in &self.files {
            put(k.as_bytes());
            put(v);
        }
        hex::encode(h.finalize())
    }
}

pub fn formulas(fs: &[Formula]) -> Value {
    fs.iter().map(|f| f.to_string()).collect()
}

pub fn judgment_set(agenda: &Agenda, j: &JudgmentSet) -> Value {
    let v = agenda.validate(j).ok();
    json!({
        "symbols": j.symbols(),
        "formulas": formulas(&agenda.formulas_of(j)),
        "complete": v.map(|v| v.complete),
        "complement_free": v.map(|v| v.complement_free),
        "consistent": v.map(|v| v.consistent),
    })
}

pub fn profile(p: &Profile) -> Value {
    p.agents().iter().map(|j| j.symbols()).collect()
}

pub fn mi_subset(d: &MISubset) -> Value {
    json!({ "size": d.size(), "formulas": formulas(&d.formulas) })
}

pub fn violation(v: &Violation) -> Value {
    json!({
        "axiom": v.axiom.name(),
        "detail": v.detail,
        "profiles": v.profiles.iter().map(profile).collect::<Vec<_>>(),
        "formulas": formulas(&v.formulas),
    })
}

pub fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports are plain data");
    s.push('\n');
    s
}
