//! Helpers shared by integration tests.

use std::collections::BTreeSet;

use openfol::semantics::{Extension, Model, Profile};
use openfol::syntax::Signature;

/// Names, predicates with arities, and a domain bound.
pub type Vocabulary<'a> = (&'a [&'a str], &'a [(&'a str, usize)], usize);

fn tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |d| {
                    let mut t = t.clone();
                    t.push(d);
                    t
                })
            })
            .collect();
    }
    out
}

fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (0u32..(1 << items.len()))
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

fn is_per(r: &BTreeSet<(usize, usize)>) -> bool {
    r.iter().all(|&(d, e)| r.contains(&(e, d)))
        && r.iter()
            .all(|&(d, e)| r.iter().filter(|&&(e2, _)| e2 == e).all(|&(_, f)| r.contains(&(d, f))))
}

fn congruent(r: &BTreeSet<(usize, usize)>, ext: &BTreeSet<Vec<usize>>, all: &[Vec<usize>]) -> bool {
    all.iter().all(|t| {
        (0..t.len()).all(|i| {
            r.iter().filter(|&&(d, _)| d == t[i]).all(|&(_, e)| {
                let mut u = t.clone();
                u[i] = e;
                ext.contains(t) == ext.contains(&u)
            })
        })
    })
}

/// Models of size `n` as JSON strings, found by generating every
/// relation, denotation and extension and then filtering: no canonical
/// forms, no ordering, nothing shared with the enumerator.
pub fn oracle(names: &[&str], predicates: &[(&str, usize)], n: usize, p: Profile) -> Vec<String> {
    let partial = p == Profile::Partial;
    let strict = matches!(p, Profile::NullStrict | Profile::NullPadded);
    if n == 0 && !partial {
        return Vec::new();
    }
    let mut values: Vec<Option<usize>> = (0..n).map(Some).collect();
    if partial {
        values.push(None);
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|d| (0..n).map(move |e| (d, e))).collect();
    let mut out = Vec::new();
    for r in subsets(&pairs) {
        let r: BTreeSet<(usize, usize)> = r.into_iter().collect();
        if !is_per(&r) {
            continue;
        }
        let field: BTreeSet<usize> = r.iter().map(|&(d, _)| d).collect();
        // Every choice of extension per predicate.
        let mut ext_choices: Vec<Vec<(String, Extension)>> = vec![Vec::new()];
        for &(symbol, arity) in predicates {
            let all = tuples(n, arity);
            let allowed: Vec<Vec<usize>> = all
                .iter()
                .filter(|t| !strict || t.iter().all(|d| field.contains(d)))
                .cloned()
                .collect();
            let mut next = Vec::new();
            for chosen in subsets(&allowed) {
                let ext: BTreeSet<Vec<usize>> = chosen.into_iter().collect();
                if !congruent(&r, &ext, &all) {
                    continue;
                }
                for prefix in &ext_choices {
                    let mut v = prefix.clone();
                    v.push((symbol.to_string(), Extension::with_tuples(arity, ext.iter().cloned())));
                    next.push(v);
                }
            }
            ext_choices = next;
        }
        let mut denotations: Vec<Vec<Option<usize>>> = vec![Vec::new()];
        for _ in names {
            denotations = denotations
                .into_iter()
                .flat_map(|d| {
                    values.iter().map(move |v| {
                        let mut d = d.clone();
                        d.push(*v);
                        d
                    })
                })
                .collect();
        }
        for den in &denotations {
            for exts in &ext_choices {
                let mut m = Model::new(n).with_identity(r.iter().copied());
                for (name, d) in names.iter().zip(den) {
                    m = m.with_name(name, *d);
                }
                for (symbol, ext) in exts {
                    m = m.with_predicate(symbol, ext.clone());
                }
                out.push(m.to_json_string());
            }
        }
    }
    out
}

pub fn signature(names: &[&str], predicates: &[(&str, usize)]) -> Signature {
    let mut sig = Signature::new().with_names(names.iter().copied());
    for &(p, n) in predicates {
        sig = sig.with_predicate(p, n);
    }
    sig
}
