//! Formulas, proof scripts, and the operations on them.

mod formula;
mod parser;
mod script;
mod signature;
mod subst;

pub use formula::{format_formula, Formula, Term};
pub use parser::{parse_formula, parse_formula_with, Arities, ParseError};
pub use script::{
    parse_proof_script, AssumptionSet, Direction, Justification, Pragmas, ProofLine, ProofScript,
    Rewrite, Rule, ScriptError, Side, UnknownRule,
};
pub use signature::{signature_of, HasSignature, Signature};
pub use subst::{
    alpha_eq, binds_anything, contains_name, count_name, free_variables, instantiate, is_closed,
    names_in, replace_occurrences, Selector, SubstError,
};
