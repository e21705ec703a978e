//! The bundled corpus: proof scripts and queries with expected verdicts,
//! checked against the kernel, the model search and the evaluator.

mod manifest;

use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use thiserror::Error;

use crate::kernel::{check_proof, Mode, ProofVerdict, Sequent};
use crate::search::{find_countermodel, Bounds, CountermodelResult, SearchError, SearchStatus};
use crate::semantics::{eval_formula, null_pad, validate_model, Assignment, Extension, Model, Profile};
use crate::syntax::{alpha_eq, parse_proof_script, signature_of, Formula, ProofScript};

pub use manifest::{
    parse_manifest, parse_sequent, CorpusEntry, EvalExpectation, Manifest, ManifestError, ModelSource,
    SearchExpectation, Verdict,
};

/// Entries the corpus must always contain.
pub const MANDATORY_IDS: [&str; 14] = [
    "CG", "CG-GA", "CGC", "NEG", "APP1", "APP2", "APP3", "APP4", "APP5", "APP6", "APP7", "APP8", "UNIQ",
    "EMPTY",
];

/// Bound for the cross-check of scripts accepted under minimal mode.
pub const SOUNDNESS_BOUND: usize = 3;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error("mandatory corpus entry {0} is missing")]
    MissingEntry(String),
    #[error("entry {id}: {message}")]
    Entry { id: String, message: String },
}

/// A failed row, as an error value.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{id} [{check}]: expected {expected}, observed {observed}")]
pub struct ExpectationMismatch {
    pub id: String,
    pub check: String,
    pub expected: String,
    pub observed: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub id: String,
    pub check: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusReport {
    pub modes: Vec<Mode>,
    /// Ids in report order.
    pub entries: Vec<String>,
    pub rows: Vec<Row>,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<ExpectationMismatch> {
        self.rows
            .iter()
            .filter(|r| !r.pass)
            .map(|r| ExpectationMismatch {
                id: r.id.clone(),
                check: r.check.clone(),
                expected: r.expected.clone(),
                observed: r.observed.clone(),
            })
            .collect()
    }

    pub fn rows_for<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows.iter().filter(move |r| r.id == id)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "modes": self.modes.iter().map(|m| m.name()).collect::<Vec<_>>(),
            "entries": self.entries,
            "passed": self.passed(),
            "rows": self.rows.iter().map(|r| json!({
                "id": r.id,
                "check": r.check,
                "expected": r.expected,
                "observed": r.observed,
                "pass": r.pass,
            })).collect::<Vec<_>>(),
        })
    }
}

type CheckFn<'a> = dyn Fn(&ProofScript, Mode) -> ProofVerdict + 'a;
type SearchFn<'a> = dyn Fn(&Sequent, &Bounds, Profile) -> Result<CountermodelResult, SearchError> + 'a;

/// The procedures the corpus is run against. Swapping one out lets tests
/// confirm that a broken kernel or search is caught.
pub struct Engine<'a> {
    pub check: &'a CheckFn<'a>,
    pub search: &'a SearchFn<'a>,
}

impl Default for Engine<'static> {
    fn default() -> Self {
        Engine {
            check: &check_proof,
            search: &find_countermodel,
        }
    }
}

/// Read a manifest from a file, or from `manifest.txt` inside a directory.
pub fn load_manifest(path: &Path) -> Result<Manifest, CorpusError> {
    let file = if path.is_dir() { path.join("manifest.txt") } else { path.to_path_buf() };
    let text = std::fs::read_to_string(&file).map_err(|e| CorpusError::Io {
        path: file.clone(),
        message: e.to_string(),
    })?;
    let root = file.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(parse_manifest(&text, &root)?)
}

pub fn run_corpus(path: &Path, modes: &[Mode]) -> Result<CorpusReport, CorpusError> {
    run_manifest(&load_manifest(path)?, modes, &Engine::default())
}

pub fn run_corpus_with(path: &Path, modes: &[Mode], engine: &Engine<'_>) -> Result<CorpusReport, CorpusError> {
    run_manifest(&load_manifest(path)?, modes, engine)
}

/// Check every entry of `manifest`. Mode expectations are checked only for
/// `modes`; searches, evaluations and the soundness cross-check always run.
pub fn run_manifest(manifest: &Manifest, modes: &[Mode], engine: &Engine<'_>) -> Result<CorpusReport, CorpusError> {
    if let Some(missing) = MANDATORY_IDS.iter().find(|id| manifest.entry(id).is_none()) {
        return Err(CorpusError::MissingEntry(missing.to_string()));
    }
    let mut rows = Vec::new();
    for entry in &manifest.entries {
        rows.extend(run_entry(entry, modes, engine)?);
    }
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    let mut entries: Vec<String> = manifest.entries.iter().map(|e| e.id.clone()).collect();
    entries.sort();
    Ok(CorpusReport {
        modes: modes.to_vec(),
        entries,
        rows,
    })
}

fn sequents_match(a: &Sequent, b: &Sequent) -> bool {
    a.global_identity == b.global_identity
        && a.premises.len() == b.premises.len()
        && a.premises.iter().zip(&b.premises).all(|(p, q)| alpha_eq(p, q))
        && alpha_eq(&a.conclusion, &b.conclusion)
}

fn classify(v: &ProofVerdict) -> String {
    match (&v.sequent, v.first_error()) {
        (Some(s), _) if s.is_theorem() => "theorem".into(),
        (Some(s), _) if s.premises.is_empty() => "theorem-ga".into(),
        (Some(_), _) => "accepted".into(),
        (None, Some((n, e))) => format!("rejected@{n} ({})", e.kind()),
        (None, None) => "rejected".into(),
    }
}

fn verdict_holds(expected: Verdict, v: &ProofVerdict) -> bool {
    match (expected, &v.sequent) {
        (Verdict::Accepted, Some(_)) => true,
        (Verdict::Theorem, Some(s)) => s.is_theorem(),
        (Verdict::TheoremGa, Some(s)) => s.premises.is_empty() && s.global_identity,
        (Verdict::Rejected(n), None) => v.first_error().map(|(line, _)| line) == Some(n),
        _ => false,
    }
}

fn run_entry(entry: &CorpusEntry, modes: &[Mode], engine: &Engine<'_>) -> Result<Vec<Row>, CorpusError> {
    let entry_error = |message: String| CorpusError::Entry {
        id: entry.id.clone(),
        message,
    };
    let row = |check: String, expected: String, observed: String, pass: bool| Row {
        id: entry.id.clone(),
        check,
        expected,
        observed,
        pass,
    };
    let mut rows = Vec::new();

    if let Some(path) = &entry.file {
        let text = std::fs::read_to_string(path).map_err(|e| entry_error(format!("{}: {e}", path.display())))?;
        let script = parse_proof_script(&text).map_err(|e| entry_error(format!("{}: {e}", path.display())))?;
        for &(mode, expected) in &entry.expect {
            if !modes.contains(&mode) {
                continue;
            }
            let v = (engine.check)(&script, mode);
            let mut observed = classify(&v);
            let mut pass = verdict_holds(expected, &v);
            if let (Some(want), Some(got)) = (&entry.proves, &v.sequent) {
                if !sequents_match(want, got) {
                    pass = false;
                    observed = format!("{observed} {got}");
                }
            }
            rows.push(row(mode.name().into(), expected.to_string(), observed, pass));
        }
        if !entry.uses.is_empty() {
            let missing: Vec<&str> = entry
                .uses
                .iter()
                .filter(|r| !script.lines.iter().any(|l| l.justification.rule == **r))
                .map(|r| r.name())
                .collect();
            let wanted: Vec<&str> = entry.uses.iter().map(|r| r.name()).collect();
            let observed = if missing.is_empty() {
                wanted.join(" ")
            } else {
                format!("missing {}", missing.join(" "))
            };
            rows.push(row("uses".into(), wanted.join(" "), observed, missing.is_empty()));
        }
        let minimal = (engine.check)(&script, Mode::Minimal);
        if let Some(s) = &minimal.sequent {
            let r = (engine.search)(s, &Bounds::new(SOUNDNESS_BOUND), Profile::Total);
            let observed = describe_search(&r);
            let pass = matches!(&r, Ok(r) if r.status == SearchStatus::ValidUpToBound);
            rows.push(row(
                format!("soundness total {SOUNDNESS_BOUND}: {s}"),
                SearchStatus::ValidUpToBound.name().into(),
                observed,
                pass,
            ));
        }
    }

    for q in &entry.searches {
        let s = q
            .sequent
            .as_ref()
            .or(entry.default_sequent())
            .expect("manifest parsing guarantees a sequent");
        let r = (engine.search)(s, &Bounds::new(q.max_size), q.profile);
        let pass = matches!(&r, Ok(r) if r.status == q.status);
        rows.push(row(
            format!("search {} {}: {s}", q.profile, q.max_size),
            q.status.name().into(),
            describe_search(&r),
            pass,
        ));
    }

    let fixture_formulas: Vec<&Formula> = entry.evals.iter().map(|e| &e.formula).collect();
    for e in &entry.evals {
        let m = load_model(&e.model, &fixture_formulas).map_err(entry_error)?;
        let observed = match eval_formula(&m, &Assignment::new(), &e.formula, e.profile) {
            Ok(b) => b.to_string(),
            Err(err) => format!("error: {err}"),
        };
        let pass = observed == e.value.to_string();
        rows.push(row(
            format!("eval {} {}: {}", e.model, e.profile, e.formula),
            e.value.to_string(),
            observed,
            pass,
        ));
    }
    for (source, profile) in &entry.validations {
        let m = load_model(source, &fixture_formulas).map_err(entry_error)?;
        let violations = validate_model(&m, *profile);
        let observed = violations
            .first()
            .map(|v| v.to_string())
            .unwrap_or_else(|| "valid".into());
        rows.push(row(
            format!("valid {source} {profile}"),
            "valid".into(),
            observed,
            violations.is_empty(),
        ));
    }
    Ok(rows)
}

fn describe_search(r: &Result<CountermodelResult, SearchError>) -> String {
    match r {
        Ok(r) => match &r.model {
            Some(m) => format!("{} {}", r.status, m.to_json_string()),
            None => r.status.name().into(),
        },
        Err(e) => format!("error: {e}"),
    }
}

/// The empty model over the vocabulary of `formulas`: no elements, every
/// name undenoting, every predicate empty.
pub fn empty_model<'f>(formulas: impl IntoIterator<Item = &'f Formula>) -> Model {
    let formulas: Vec<Formula> = formulas.into_iter().cloned().collect();
    let sig = signature_of(&formulas[..]);
    let mut m = Model::new(0);
    for n in &sig.names {
        m.names.insert(n.clone(), None);
    }
    for (symbol, arity) in &sig.predicates {
        m.predicates.insert(symbol.clone(), Extension::new(*arity));
    }
    m
}

fn load_model(source: &ModelSource, formulas: &[&Formula]) -> Result<Model, String> {
    match source {
        ModelSource::Empty => Ok(empty_model(formulas.iter().copied())),
        ModelSource::PaddedEmpty => Ok(null_pad(&empty_model(formulas.iter().copied()))),
        ModelSource::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Model::from_json_str(&text).map_err(|e| format!("{}: {e}", path.display()))
        }
    }
}
