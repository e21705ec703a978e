//! Finite models in which `=` denotes a congruent partial equivalence
//! relation. Elements outside that relation's field are null elements: they
//! exist, are quantified over, and are not self-identical.

mod json;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::kernel::Sequent;
use crate::syntax::{Formula, Term};

pub use json::ModelJsonError;
pub use validate::{validate_model, Violation, ViolationKind};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    /// Every name denotes; predicates may hold of null elements.
    #[default]
    Total,
    /// Every name denotes; null elements satisfy no predicate.
    NullStrict,
    /// Names may fail to denote and the domain may be empty.
    Partial,
    /// Evaluate after adding one fresh null element, under `NullStrict`.
    NullPadded,
}

impl Profile {
    pub const ALL: [Profile; 4] = [
        Profile::Total,
        Profile::NullStrict,
        Profile::Partial,
        Profile::NullPadded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Profile::Total => "total",
            Profile::NullStrict => "null-strict",
            Profile::Partial => "partial",
            Profile::NullPadded => "null-padded",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown profile `{0}` (expected total, null-strict, partial or null-padded)")]
pub struct UnknownProfile(pub String);

impl FromStr for Profile {
    type Err = UnknownProfile;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Profile::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| UnknownProfile(s.to_string()))
    }
}

/// Extension of one predicate symbol. For arity 0 the set holds the empty
/// tuple exactly when the sentence letter is true.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Extension {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

impl Extension {
    pub fn new(arity: usize) -> Self {
        Extension {
            arity,
            tuples: BTreeSet::new(),
        }
    }

    pub fn with_tuples<I: IntoIterator<Item = Vec<usize>>>(arity: usize, tuples: I) -> Self {
        Extension {
            arity,
            tuples: tuples.into_iter().collect(),
        }
    }

    pub fn truth(value: bool) -> Self {
        Extension::with_tuples(0, value.then(Vec::new))
    }

    pub fn holds(&self, args: &[usize]) -> bool {
        self.tuples.contains(args)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Model {
    pub domain_size: usize,
    /// `None` marks an undenoting name.
    pub names: BTreeMap<String, Option<usize>>,
    pub predicates: BTreeMap<String, Extension>,
    pub identity: BTreeSet<(usize, usize)>,
}

impl Model {
    pub fn new(domain_size: usize) -> Self {
        Model {
            domain_size,
            ..Model::default()
        }
    }

    pub fn with_name(mut self, name: &str, element: Option<usize>) -> Self {
        self.names.insert(name.to_string(), element);
        self
    }

    pub fn with_predicate(mut self, symbol: &str, ext: Extension) -> Self {
        self.predicates.insert(symbol.to_string(), ext);
        self
    }

    pub fn with_identity<I: IntoIterator<Item = (usize, usize)>>(mut self, pairs: I) -> Self {
        self.identity.extend(pairs);
        self
    }

    /// Identity over every element.
    pub fn reflexive(mut self) -> Self {
        self.identity.extend((0..self.domain_size).map(|d| (d, d)));
        self
    }

    /// Whether `d` stands in the identity relation to anything.
    pub fn in_identity_field(&self, d: usize) -> bool {
        self.identity.iter().any(|&(x, y)| x == d || y == d)
    }

    pub fn null_elements(&self) -> Vec<usize> {
        (0..self.domain_size)
            .filter(|&d| !self.in_identity_field(d))
            .collect()
    }
}

/// Values of free variables, innermost binding last.
pub type Assignment = BTreeMap<String, usize>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("name {0} is not interpreted by the model")]
    UnknownName(String),
    #[error("predicate {symbol}/{arity} is not interpreted by the model")]
    UnknownPredicate { symbol: String, arity: usize },
    #[error("variable {0} is not assigned")]
    UnassignedVariable(String),
}

/// Truth value of `f` in `m` under `a`.
///
/// Atoms with an undenoting term are false, identity atoms included.
/// Quantifiers range over every element, null ones too.
pub fn eval_formula(m: &Model, a: &Assignment, f: &Formula, p: Profile) -> Result<bool, EvalError> {
    let mut env: Vec<(&str, usize)> = a.iter().map(|(v, &d)| (v.as_str(), d)).collect();
    if p == Profile::NullPadded {
        let padded = null_pad(m);
        return eval(&padded, &mut env, f, false);
    }
    eval(m, &mut env, f, p == Profile::Partial)
}

/// `true` unless every (effective) premise holds and the conclusion fails.
pub fn eval_sequent(m: &Model, s: &Sequent, p: Profile) -> Result<bool, EvalError> {
    let none = Assignment::new();
    for premise in s.effective_premises() {
        if !eval_formula(m, &none, &premise, p)? {
            return Ok(true);
        }
    }
    eval_formula(m, &none, &s.conclusion, p)
}

fn denote(m: &Model, env: &[(&str, usize)], t: &Term, partial: bool) -> Result<Option<usize>, EvalError> {
    match t {
        Term::Var(v) => env
            .iter()
            .rev()
            .find(|(w, _)| w == v)
            .map(|&(_, d)| Some(d))
            .ok_or_else(|| EvalError::UnassignedVariable(v.clone())),
        Term::Name(n) => match m.names.get(n) {
            Some(d) => Ok(*d),
            None if partial => Ok(None),
            None => Err(EvalError::UnknownName(n.clone())),
        },
    }
}

fn eval<'f>(
    m: &Model,
    env: &mut Vec<(&'f str, usize)>,
    f: &'f Formula,
    partial: bool,
) -> Result<bool, EvalError> {
    Ok(match f {
        Formula::Pred(symbol, args) => {
            let ext = m
                .predicates
                .get(symbol)
                .filter(|e| e.arity == args.len())
                .ok_or_else(|| EvalError::UnknownPredicate {
                    symbol: symbol.clone(),
                    arity: args.len(),
                })?;
            let mut tuple = Vec::with_capacity(args.len());
            for t in args {
                match denote(m, env, t, partial)? {
                    Some(d) => tuple.push(d),
                    None => return Ok(false),
                }
            }
            ext.holds(&tuple)
        }
        Formula::Eq(l, r) => match (denote(m, env, l, partial)?, denote(m, env, r, partial)?) {
            (Some(d), Some(e)) => m.identity.contains(&(d, e)),
            _ => false,
        },
        Formula::Not(inner) => !eval(m, env, inner, partial)?,
        Formula::And(l, r) => eval(m, env, l, partial)? && eval(m, env, r, partial)?,
        Formula::Or(l, r) => eval(m, env, l, partial)? || eval(m, env, r, partial)?,
        Formula::Imp(l, r) => !eval(m, env, l, partial)? || eval(m, env, r, partial)?,
        Formula::Iff(l, r) => eval(m, env, l, partial)? == eval(m, env, r, partial)?,
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(f, Formula::Forall(..));
            for d in 0..m.domain_size {
                env.push((v.as_str(), d));
                let value = eval(m, env, body, partial);
                env.pop();
                if value? != universal {
                    return Ok(!universal);
                }
            }
            universal
        }
    })
}

/// Append one fresh null element and send every undenoting name to it.
pub fn null_pad(m: &Model) -> Model {
    let fresh = m.domain_size;
    let mut out = m.clone();
    out.domain_size += 1;
    for d in out.names.values_mut() {
        d.get_or_insert(fresh);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn holds(m: &Model, text: &str, p: Profile) -> bool {
        eval_formula(m, &Assignment::new(), &parse_formula(text).unwrap(), p).unwrap()
    }

    fn empty_partial() -> Model {
        Model::new(0)
            .with_name("a", None)
            .with_predicate("F", Extension::new(1))
    }

    #[test]
    fn empty_universe() {
        let m = empty_partial();
        assert!(holds(&m, "F(a) | ~F(a)", Profile::Partial));
        assert!(!holds(&m, "exists x (F(x) | ~F(x))", Profile::Partial));
        assert!(holds(&m, "forall x (F(x))", Profile::Partial));

        let padded = null_pad(&m);
        assert_eq!(padded.domain_size, 1);
        assert_eq!(padded.names["a"], Some(0));
        assert!(padded.identity.is_empty());
        assert!(holds(&padded, "F(a) | ~F(a)", Profile::NullStrict));
        assert!(holds(&padded, "exists x (F(x) | ~F(x))", Profile::NullStrict));
    }

    #[test]
    fn null_pad_shapes() {
        let twice = null_pad(&null_pad(&empty_partial()));
        assert_eq!(twice.domain_size, 2);
        assert_eq!(twice.null_elements(), vec![0, 1]);

        let one = Model::new(1).with_name("a", Some(0)).reflexive();
        let padded = null_pad(&one);
        assert_eq!(padded.domain_size, 2);
        assert_eq!(padded.identity, BTreeSet::from([(0, 0)]));
        assert_eq!(padded.null_elements(), vec![1]);
    }

    #[test]
    fn null_element_witnesses_non_self_identity() {
        let m = Model::new(1).with_name("a", Some(0));
        assert!(holds(&m, "exists x ~(x = x)", Profile::Total));
        assert!(!holds(&m, "a = a", Profile::Total));

        let refl = Model::new(2).reflexive();
        assert!(holds(&refl, "forall x (x = x)", Profile::Total));
        assert!(!holds(&refl, "exists x ~(x = x)", Profile::Total));
    }

    #[test]
    fn undenoting_names_make_atoms_false() {
        let m = Model::new(1)
            .with_name("a", None)
            .with_predicate("F", Extension::with_tuples(1, [vec![0]]))
            .reflexive();
        assert!(!holds(&m, "a = a", Profile::Partial));
        assert!(!holds(&m, "F(a)", Profile::Partial));
        assert!(holds(&m, "~F(a)", Profile::Partial));
        assert!(holds(&m, "forall x (F(x))", Profile::Partial));
    }

    #[test]
    fn unknown_symbols() {
        let m = Model::new(1).with_name("a", Some(0));
        let none = Assignment::new();
        let f = parse_formula("b = b").unwrap();
        assert_eq!(
            eval_formula(&m, &none, &f, Profile::Total),
            Err(EvalError::UnknownName("b".into()))
        );
        assert_eq!(eval_formula(&m, &none, &f, Profile::Partial), Ok(false));
        let g = parse_formula("P(a)").unwrap();
        assert!(matches!(
            eval_formula(&m, &none, &g, Profile::Total),
            Err(EvalError::UnknownPredicate { .. })
        ));
    }

    #[test]
    fn sequents_with_global_identity() {
        let m = Model::new(1).with_name("a", Some(0));
        let mut s = Sequent::theorem(parse_formula("a = a").unwrap());
        assert!(!eval_sequent(&m, &s, Profile::Total).unwrap());
        s.global_identity = true;
        assert!(eval_sequent(&m, &s, Profile::Total).unwrap());
    }

    #[test]
    fn sentence_letters() {
        let m = Model::new(1)
            .with_predicate("Q", Extension::truth(true))
            .with_predicate("R", Extension::truth(false));
        assert!(holds(&m, "Q & ~R", Profile::Total));
    }

    #[test]
    fn profile_names_round_trip() {
        for p in Profile::ALL {
            assert_eq!(p.name().parse::<Profile>().unwrap(), p);
        }
        assert!("free".parse::<Profile>().is_err());
    }
}
