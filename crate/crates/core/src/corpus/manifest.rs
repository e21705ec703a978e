//! The plain-text manifest listing corpus entries and their expectations.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::kernel::{Mode, Sequent};
use crate::search::SearchStatus;
use crate::semantics::Profile;
use crate::syntax::{parse_formula_with, Arities, Formula, Rule};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("manifest line {line}: {message}")]
pub struct ManifestError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Theorem,
    TheoremGa,
    Rejected(usize),
}

impl Verdict {
    fn parse(text: &str) -> Option<Verdict> {
        match text {
            "accepted" => Some(Verdict::Accepted),
            "theorem" => Some(Verdict::Theorem),
            "theorem-ga" => Some(Verdict::TheoremGa),
            _ => text
                .strip_prefix("rejected@")
                .and_then(|n| n.parse().ok())
                .map(Verdict::Rejected),
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Accepted => f.write_str("accepted"),
            Verdict::Theorem => f.write_str("theorem"),
            Verdict::TheoremGa => f.write_str("theorem-ga"),
            Verdict::Rejected(n) => write!(f, "rejected@{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSource {
    Empty,
    PaddedEmpty,
    File(PathBuf),
}

impl std::fmt::Display for ModelSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelSource::Empty => f.write_str("empty"),
            ModelSource::PaddedEmpty => f.write_str("padded-empty"),
            ModelSource::File(p) => write!(f, "{}", p.display()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchExpectation {
    pub profile: Profile,
    pub max_size: usize,
    pub status: SearchStatus,
    /// `None` falls back to the entry's `sequent`, then `proves`.
    pub sequent: Option<Sequent>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalExpectation {
    pub model: ModelSource,
    pub profile: Profile,
    pub value: bool,
    pub formula: Formula,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusEntry {
    pub id: String,
    /// Manifest line the entry starts on.
    pub line: usize,
    pub file: Option<PathBuf>,
    pub expect: Vec<(Mode, Verdict)>,
    pub proves: Option<Sequent>,
    pub uses: Vec<Rule>,
    pub sequent: Option<Sequent>,
    pub searches: Vec<SearchExpectation>,
    pub evals: Vec<EvalExpectation>,
    pub validations: Vec<(ModelSource, Profile)>,
}

impl CorpusEntry {
    /// Query sequent for search lines that do not carry their own.
    pub fn default_sequent(&self) -> Option<&Sequent> {
        self.sequent.as_ref().or(self.proves.as_ref())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    /// Directory that relative paths are resolved against.
    pub root: PathBuf,
    pub entries: Vec<CorpusEntry>,
}

impl Manifest {
    pub fn entry(&self, id: &str) -> Option<&CorpusEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

/// Parse `p1 ; p2 |- c`, with an optional leading `G` premise.
pub fn parse_sequent(text: &str) -> Result<Sequent, String> {
    let (left, right) = text
        .split_once("|-")
        .ok_or_else(|| format!("sequent `{text}` has no `|-`"))?;
    let mut arities = Arities::new();
    let mut premises = Vec::new();
    let mut global = false;
    for (i, part) in left.split(';').map(str::trim).enumerate() {
        if part.is_empty() && left.trim().is_empty() {
            break;
        }
        if part == "G" && i == 0 {
            global = true;
            continue;
        }
        premises.push(parse_formula_with(part, &mut arities).map_err(|e| e.to_string())?);
    }
    let conclusion = parse_formula_with(right.trim(), &mut arities).map_err(|e| e.to_string())?;
    let mut s = Sequent::new(premises, conclusion);
    s.global_identity = global;
    Ok(s)
}

fn parse_model_source(text: &str, root: &Path) -> ModelSource {
    match text {
        "empty" => ModelSource::Empty,
        "padded-empty" => ModelSource::PaddedEmpty,
        path => ModelSource::File(root.join(path)),
    }
}

fn words(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}

fn parse_search(value: &str) -> Result<SearchExpectation, String> {
    let (head, sequent) = match value.split_once(':') {
        Some((h, s)) => (h, Some(parse_sequent(s.trim())?)),
        None => (value, None),
    };
    let [profile, size, status] = words(head)[..] else {
        return Err("search wants `<profile> <max-size> <status> [: <sequent>]`".into());
    };
    Ok(SearchExpectation {
        profile: profile.parse().map_err(|e: crate::semantics::UnknownProfile| e.to_string())?,
        max_size: size.parse().map_err(|_| format!("bad size `{size}`"))?,
        status: status.parse()?,
        sequent,
    })
}

fn parse_eval(value: &str, root: &Path) -> Result<EvalExpectation, String> {
    let (head, formula) = value
        .split_once(':')
        .ok_or("eval wants `<model> <profile> <true|false> : <formula>`")?;
    let [model, profile, truth] = words(head)[..] else {
        return Err("eval wants `<model> <profile> <true|false> : <formula>`".into());
    };
    Ok(EvalExpectation {
        model: parse_model_source(model, root),
        profile: profile.parse().map_err(|e: crate::semantics::UnknownProfile| e.to_string())?,
        value: truth.parse().map_err(|_| format!("bad truth value `{truth}`"))?,
        formula: crate::syntax::parse_formula(formula.trim()).map_err(|e| e.to_string())?,
    })
}

/// Parse manifest text. `root` anchors relative file paths.
pub fn parse_manifest(text: &str, root: &Path) -> Result<Manifest, ManifestError> {
    let mut entries: Vec<CorpusEntry> = Vec::new();
    let mut seen = BTreeSet::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let err = |message: String| ManifestError { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| err(format!("expected `key = value`, found `{content}`")))?;
        if key == "id" {
            if value.is_empty() || value.contains(char::is_whitespace) {
                return Err(err(format!("bad id `{value}`")));
            }
            if !seen.insert(value.to_string()) {
                return Err(err(format!("duplicate id `{value}`")));
            }
            entries.push(CorpusEntry {
                id: value.to_string(),
                line,
                ..CorpusEntry::default()
            });
            continue;
        }
        let entry = entries
            .last_mut()
            .ok_or_else(|| err(format!("`{key}` before the first `id`")))?;
        match key {
            "file" => {
                if entry.file.is_some() {
                    return Err(err("second `file` in one entry".into()));
                }
                entry.file = Some(root.join(value));
            }
            "proves" => entry.proves = Some(parse_sequent(value).map_err(err)?),
            "sequent" => entry.sequent = Some(parse_sequent(value).map_err(err)?),
            "uses" => {
                for w in words(value) {
                    entry.uses.push(w.parse().map_err(|e: crate::syntax::UnknownRule| err(e.to_string()))?);
                }
            }
            "search" => entry.searches.push(parse_search(value).map_err(err)?),
            "eval" => entry.evals.push(parse_eval(value, root).map_err(err)?),
            "valid" => {
                let [model, profile] = words(value)[..] else {
                    return Err(err("valid wants `<model> <profile>`".into()));
                };
                let profile = profile.parse().map_err(|e: crate::semantics::UnknownProfile| err(e.to_string()))?;
                entry.validations.push((parse_model_source(model, root), profile));
            }
            _ => {
                let mode = key
                    .strip_prefix("expect.")
                    .ok_or_else(|| err(format!("unknown key `{key}`")))?;
                let mode: Mode = mode.parse().map_err(|e: crate::kernel::UnknownMode| err(e.to_string()))?;
                if entry.expect.iter().any(|(m, _)| *m == mode) {
                    return Err(err(format!("second expectation for {mode}")));
                }
                let verdict = Verdict::parse(value).ok_or_else(|| err(format!("bad verdict `{value}`")))?;
                entry.expect.push((mode, verdict));
            }
        }
    }
    for entry in &entries {
        let err = |message: String| ManifestError {
            line: entry.line,
            message,
        };
        if !entry.expect.is_empty() && entry.file.is_none() {
            return Err(err(format!("entry {} has mode expectations but no file", entry.id)));
        }
        if entry.file.is_none() && entry.searches.is_empty() && entry.evals.is_empty() && entry.validations.is_empty() {
            return Err(err(format!("entry {} checks nothing", entry.id)));
        }
        if entry.searches.iter().any(|s| s.sequent.is_none()) && entry.default_sequent().is_none() {
            return Err(err(format!("entry {} searches without a sequent", entry.id)));
        }
    }
    Ok(Manifest {
        root: root.to_path_buf(),
        entries,
    })
}
