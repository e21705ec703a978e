//! Lemmon-style proof checking with recomputed assumption sets.
//!
//! The three modes differ only in how self-identity may enter a proof:
//!
//! | mode        | `=I` | `GA`                              |
//! |-------------|------|-----------------------------------|
//! | `classical` | yes  | no                                |
//! | `open`      | no   | with `pragma identity: global`    |
//! | `minimal`   | no   | no                                |

mod check;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{HasSignature, Formula, ProofScript, Rule, Signature};

pub use check::check_proof;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Classical,
    #[default]
    Open,
    Minimal,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Classical, Mode::Open, Mode::Minimal];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Classical => "classical",
            Mode::Open => "open",
            Mode::Minimal => "minimal",
        }
    }

    /// Mode a script is checked under: explicit choice, else the script's
    /// pragma, else `open`.
    pub fn effective(explicit: Option<Mode>, script: &ProofScript) -> Mode {
        explicit.or(script.pragmas.mode).unwrap_or_default()
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown mode `{0}` (expected classical, open or minimal)")]
pub struct UnknownMode(pub String);

impl FromStr for Mode {
    type Err = UnknownMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| UnknownMode(s.to_string()))
    }
}

/// What an accepted proof establishes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
    /// The conclusion rests on the global assumption `forall x (x = x)`.
    pub global_identity: bool,
}

impl Sequent {
    pub fn new(premises: Vec<Formula>, conclusion: Formula) -> Self {
        Sequent {
            premises,
            conclusion,
            global_identity: false,
        }
    }

    pub fn theorem(conclusion: Formula) -> Self {
        Sequent::new(Vec::new(), conclusion)
    }

    pub fn is_theorem(&self) -> bool {
        self.premises.is_empty() && !self.global_identity
    }

    /// Premises with `forall x (x = x)` appended when the sequent depends on
    /// the global assumption.
    pub fn effective_premises(&self) -> Vec<Formula> {
        let mut out = self.premises.clone();
        if self.global_identity {
            out.push(Formula::universal_self_identity());
        }
        out
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.global_identity {
            parts.push("G".into());
        }
        parts.extend(self.premises.iter().map(|p| p.to_string()));
        if parts.is_empty() {
            write!(f, "⊢ {}", self.conclusion)
        } else {
            write!(f, "{} ⊢ {}", parts.join(", "), self.conclusion)
        }
    }
}

impl HasSignature for Sequent {
    fn extend_signature(&self, sig: &mut Signature) {
        for p in &self.premises {
            sig.add_formula(p);
        }
        sig.add_formula(&self.conclusion);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LineError {
    #[error("{rule} is not available in {mode} mode")]
    RuleUnavailableInMode { rule: Rule, mode: Mode },
    #[error("{rule} cites {expected} line(s), found {found}")]
    WrongCitationArity {
        rule: Rule,
        expected: usize,
        found: usize,
    },
    #[error("{0}")]
    FormulaMismatch(String),
    #[error("assumptions written as {declared}, computed {computed}")]
    AssumptionSetMismatch { declared: String, computed: String },
    #[error("{0}")]
    SideConditionViolated(String),
    #[error("global self-identity used without `pragma identity: global`")]
    GAWithoutPragma,
    #[error("{0}")]
    BadSelector(String),
}

impl LineError {
    pub fn kind(&self) -> &'static str {
        match self {
            LineError::RuleUnavailableInMode { .. } => "RuleUnavailableInMode",
            LineError::WrongCitationArity { .. } => "WrongCitationArity",
            LineError::FormulaMismatch(_) => "FormulaMismatch",
            LineError::AssumptionSetMismatch { .. } => "AssumptionSetMismatch",
            LineError::SideConditionViolated(_) => "SideConditionViolated",
            LineError::GAWithoutPragma => "GAWithoutPragma",
            LineError::BadSelector(_) => "BadSelector",
        }
    }

    /// `Kind: detail`, the form used in reports.
    pub fn describe(&self) -> String {
        format!("{}: {}", self.kind(), self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineVerdict {
    pub number: usize,
    pub result: Result<(), LineError>,
}

impl LineVerdict {
    pub fn ok(&self) -> bool {
        self.result.is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofVerdict {
    pub mode: Mode,
    pub accepted: bool,
    pub per_line: Vec<LineVerdict>,
    pub sequent: Option<Sequent>,
    pub uses_identity_intro: bool,
    pub uses_global_assumption: bool,
}

impl ProofVerdict {
    pub fn first_error(&self) -> Option<(usize, &LineError)> {
        self.per_line
            .iter()
            .find_map(|l| l.result.as_ref().err().map(|e| (l.number, e)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("proof rejected at line {line}: {error}")]
pub struct NotAccepted {
    pub line: usize,
    pub error: String,
}

/// The sequent established by `script` under `mode`.
pub fn sequent_of(script: &ProofScript, mode: Mode) -> Result<Sequent, NotAccepted> {
    let verdict = check_proof(script, mode);
    match verdict.sequent {
        Some(s) => Ok(s),
        None => {
            let (line, error) = verdict
                .first_error()
                .map(|(n, e)| (n, e.describe()))
                .unwrap_or((0, "rejected".into()));
            Err(NotAccepted { line, error })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Availability {
    Available,
    /// Usable only when the script carries `pragma identity: global`.
    RequiresPragma,
    Unavailable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RuleDescriptor {
    pub rule: Rule,
    pub citations: usize,
    pub availability: Availability,
}

impl RuleDescriptor {
    pub fn usable(&self, identity_global: bool) -> bool {
        match self.availability {
            Availability::Available => true,
            Availability::RequiresPragma => identity_global,
            Availability::Unavailable => false,
        }
    }
}

pub fn rule_availability(rule: Rule, mode: Mode) -> Availability {
    match (rule, mode) {
        (Rule::IdentityIntro, Mode::Classical) => Availability::Available,
        (Rule::IdentityIntro, _) => Availability::Unavailable,
        (Rule::GlobalAssumption, Mode::Open) => Availability::RequiresPragma,
        (Rule::GlobalAssumption, _) => Availability::Unavailable,
        _ => Availability::Available,
    }
}

/// The whole rule table, in canonical rule order, with availability under
/// `mode`.
pub fn available_rules(mode: Mode) -> Vec<RuleDescriptor> {
    Rule::ALL
        .iter()
        .map(|&rule| RuleDescriptor {
            rule,
            citations: rule.citation_arity(),
            availability: rule_availability(rule, mode),
        })
        .collect()
}
