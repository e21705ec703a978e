use std::collections::BTreeSet;

use serde::Serialize;

use super::formula::{Formula, Term};

/// Names and predicate symbols (with arity) used by some piece of syntax.
/// Both sets are kept in lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub names: BTreeSet<String>,
    pub predicates: BTreeSet<(String, usize)>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_names<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.names.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn with_predicate(mut self, symbol: impl Into<String>, arity: usize) -> Self {
        self.predicates.insert((symbol.into(), arity));
        self
    }

    pub fn add_formula(&mut self, f: &Formula) {
        let add_term = |names: &mut BTreeSet<String>, t: &Term| {
            if let Term::Name(n) = t {
                names.insert(n.clone());
            }
        };
        match f {
            Formula::Pred(p, args) => {
                self.predicates.insert((p.clone(), args.len()));
                for t in args {
                    add_term(&mut self.names, t);
                }
            }
            Formula::Eq(l, r) => {
                add_term(&mut self.names, l);
                add_term(&mut self.names, r);
            }
            Formula::Not(inner) | Formula::Forall(_, inner) | Formula::Exists(_, inner) => {
                self.add_formula(inner)
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) | Formula::Iff(l, r) => {
                self.add_formula(l);
                self.add_formula(r);
            }
        }
    }

    pub fn merge(&mut self, other: &Signature) {
        self.names.extend(other.names.iter().cloned());
        self.predicates.extend(other.predicates.iter().cloned());
    }

    pub fn is_subset(&self, other: &Signature) -> bool {
        self.names.is_subset(&other.names) && self.predicates.is_subset(&other.predicates)
    }

    /// Arity of `symbol`, if it is declared.
    pub fn arity_of(&self, symbol: &str) -> Option<usize> {
        self.predicates
            .iter()
            .find(|(p, _)| p == symbol)
            .map(|(_, a)| *a)
    }
}

/// Anything whose vocabulary can be read off.
pub trait HasSignature {
    fn extend_signature(&self, sig: &mut Signature);
}

impl HasSignature for Formula {
    fn extend_signature(&self, sig: &mut Signature) {
        sig.add_formula(self);
    }
}

impl<T: HasSignature> HasSignature for [T] {
    fn extend_signature(&self, sig: &mut Signature) {
        for item in self {
            item.extend_signature(sig);
        }
    }
}

pub fn signature_of<T: HasSignature + ?Sized>(x: &T) -> Signature {
    let mut sig = Signature::new();
    x.extend_signature(&mut sig);
    sig
}
