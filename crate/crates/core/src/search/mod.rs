//! Bounded model search: enumeration, countermodels for sequents, and a
//! brute-force soundness audit of the kernel's rules.

mod audit;
mod enumerate;
mod pool;

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::kernel::Sequent;
use crate::semantics::{eval_sequent, EvalError, Model, Profile};
use crate::syntax::{signature_of, Signature};

pub use audit::{
    audit_all, audit_rule, audit_signature, AuditReport, AuditStatus, Judgement, Witness,
    AUDITED_RULES,
};
pub use enumerate::{enumerate_models, Models};
pub use pool::{body_pool, closed_pool};

/// Largest domain the enumerator accepts.
pub const MAX_DOMAIN_SIZE: usize = 4;
/// Largest number of argument tuples per predicate (extensions are bitmasks
/// over tuples, and their subsets are enumerated).
pub const MAX_TUPLES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_domain_size: usize,
    /// Vocabulary to interpret; `None` means the query's own.
    pub signature: Option<Signature>,
    /// Stop after this many models and report `INCONCLUSIVE`.
    pub max_models: Option<u64>,
}

impl Bounds {
    pub fn new(max_domain_size: usize) -> Self {
        Bounds {
            max_domain_size,
            signature: None,
            max_models: None,
        }
    }

    pub fn with_signature(mut self, sig: Signature) -> Self {
        self.signature = Some(sig);
        self
    }

    pub fn with_max_models(mut self, cap: u64) -> Self {
        self.max_models = Some(cap);
        self
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds::new(3)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("domain size {requested} exceeds the supported maximum of {limit}")]
    Bounds { requested: usize, limit: usize },
    #[error("predicate {symbol}/{arity} has {tuples} tuples over {size} elements; at most {MAX_TUPLES} are supported")]
    TooManyTuples {
        symbol: String,
        arity: usize,
        size: usize,
        tuples: usize,
    },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("{0}")]
    Eval(#[from] EvalError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchStatus {
    ValidUpToBound,
    Countermodel,
    Inconclusive,
}

impl SearchStatus {
    pub fn name(self) -> &'static str {
        match self {
            SearchStatus::ValidUpToBound => "VALID_UP_TO_BOUND",
            SearchStatus::Countermodel => "COUNTERMODEL",
            SearchStatus::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SearchStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            SearchStatus::ValidUpToBound,
            SearchStatus::Countermodel,
            SearchStatus::Inconclusive,
        ]
        .into_iter()
        .find(|st| st.name() == s)
        .ok_or_else(|| format!("unknown search status `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountermodelResult {
    pub status: SearchStatus,
    pub model: Option<Model>,
    pub models_examined: u64,
}

impl CountermodelResult {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "status": self.status.name(),
            "models_examined": self.models_examined,
        });
        if let Some(m) = &self.model {
            v["model"] = m.to_json();
        }
        v
    }
}

/// Scan models in canonical order for one that makes every premise true
/// and the conclusion false.
pub fn find_countermodel(
    s: &Sequent,
    bounds: &Bounds,
    profile: Profile,
) -> Result<CountermodelResult, SearchError> {
    let mut sig = signature_of(s);
    if let Some(extra) = &bounds.signature {
        sig.merge(extra);
    }
    let mut models = enumerate_models(&sig, bounds, profile)?.peekable();
    let mut examined = 0u64;
    while let Some(m) = models.next() {
        examined += 1;
        if !eval_sequent(&m, s, profile)? {
            return Ok(CountermodelResult {
                status: SearchStatus::Countermodel,
                model: Some(m),
                models_examined: examined,
            });
        }
        if bounds.max_models == Some(examined) && models.peek().is_some() {
            return Ok(CountermodelResult {
                status: SearchStatus::Inconclusive,
                model: None,
                models_examined: examined,
            });
        }
    }
    Ok(CountermodelResult {
        status: SearchStatus::ValidUpToBound,
        model: None,
        models_examined: examined,
    })
}
