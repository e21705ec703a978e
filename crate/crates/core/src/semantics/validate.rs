use std::collections::BTreeSet;
use std::fmt;

use super::{Model, Profile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    OutOfRange,
    EmptyDomain,
    Undenoting,
    NotSymmetric,
    NotTransitive,
    NotCongruent,
    NullInPredicate,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl Violation {
    fn new(kind: ViolationKind, message: String) -> Self {
        Violation { kind, message }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn tuple_text(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(|d| d.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Every way `m` fails to be a model under `p`. Empty means valid.
///
/// Transitivity is checked over the symmetric closure, so a lone `(0,1)`
/// reports both the missing `(1,0)` and the missing `(0,0)`.
pub fn validate_model(m: &Model, p: Profile) -> Vec<Violation> {
    use ViolationKind::*;
    let mut out = Vec::new();
    let n = m.domain_size;

    for (name, d) in &m.names {
        match d {
            Some(d) if *d >= n => out.push(Violation::new(
                OutOfRange,
                format!("name {name} denotes {d}, outside domain of size {n}"),
            )),
            None if p != Profile::Partial => out.push(Violation::new(
                Undenoting,
                format!("name {name} does not denote under profile {p}"),
            )),
            _ => {}
        }
    }
    if n == 0 && p != Profile::Partial {
        out.push(Violation::new(
            EmptyDomain,
            format!("empty domain not allowed under profile {p}"),
        ));
    }
    for (symbol, ext) in &m.predicates {
        for t in &ext.tuples {
            if t.len() != ext.arity || t.iter().any(|&d| d >= n) {
                out.push(Violation::new(
                    OutOfRange,
                    format!("tuple {} invalid for {symbol}/{}", tuple_text(t), ext.arity),
                ));
            }
        }
    }
    for &(d, e) in &m.identity {
        if d >= n || e >= n {
            out.push(Violation::new(
                OutOfRange,
                format!("identity pair ({d},{e}) outside domain of size {n}"),
            ));
        }
    }
    if !out.is_empty() {
        return out;
    }

    for &(d, e) in &m.identity {
        if !m.identity.contains(&(e, d)) {
            out.push(Violation::new(
                NotSymmetric,
                format!("not symmetric: ({e},{d}) missing"),
            ));
        }
    }
    let closure: BTreeSet<(usize, usize)> = m
        .identity
        .iter()
        .flat_map(|&(d, e)| [(d, e), (e, d)])
        .collect();
    let mut missing = BTreeSet::new();
    for &(d, e) in &closure {
        for &(_, f) in closure.range((e, 0)..=(e, usize::MAX)) {
            if !m.identity.contains(&(d, f)) {
                missing.insert((d, f));
            }
        }
    }
    for (d, f) in missing {
        out.push(Violation::new(
            NotTransitive,
            format!("not transitive: ({d},{f}) missing"),
        ));
    }

    for &(d, e) in &m.identity {
        if d == e {
            continue;
        }
        for (symbol, ext) in &m.predicates {
            for t in &ext.tuples {
                for i in (0..t.len()).filter(|&i| t[i] == d) {
                    let mut swapped = t.clone();
                    swapped[i] = e;
                    if !ext.tuples.contains(&swapped) {
                        out.push(Violation::new(
                            NotCongruent,
                            format!(
                                "not congruent: {symbol}{} holds but {symbol}{} does not, though {d} = {e}",
                                tuple_text(t),
                                tuple_text(&swapped)
                            ),
                        ));
                    }
                }
            }
        }
    }

    if matches!(p, Profile::NullStrict | Profile::NullPadded) {
        for d in m.null_elements() {
            for (symbol, ext) in &m.predicates {
                if ext.tuples.iter().any(|t| t.contains(&d)) {
                    out.push(Violation::new(
                        NullInPredicate,
                        format!("null element {d} in predicate {symbol}"),
                    ));
                }
            }
        }
    }
    out
}
