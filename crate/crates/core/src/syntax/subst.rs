//! Substitution machinery: quantifier instantiation, selective replacement of
//! name occurrences, and alpha-equivalence.

use std::collections::BTreeSet;

use thiserror::Error;

use super::formula::{Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("formula is not quantified: {0}")]
    NotQuantified(String),
    #[error("occurrence {index} requested but only {count} occurrence(s) of {name} present")]
    BadSelector {
        name: String,
        index: usize,
        count: usize,
    },
    #[error("expected a name, found variable {0}")]
    NotAName(String),
}

/// Which occurrences of a name to replace, counted 1-based left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Selector {
    All,
    Indices(BTreeSet<usize>),
}

impl Selector {
    pub fn indices(ix: impl IntoIterator<Item = usize>) -> Self {
        Selector::Indices(ix.into_iter().collect())
    }

    fn selects(&self, index: usize) -> bool {
        match self {
            Selector::All => true,
            Selector::Indices(set) => set.contains(&index),
        }
    }
}

impl std::fmt::Display for Selector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Selector::All => f.write_str("*"),
            Selector::Indices(set) => {
                let parts: Vec<String> = set.iter().map(|i| i.to_string()).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

/// Every identifier spelled anywhere in `f`, bound or not.
fn identifiers(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Pred(_, args) => out.extend(args.iter().map(|t| t.ident().to_string())),
        Formula::Eq(l, r) => {
            out.insert(l.ident().to_string());
            out.insert(r.ident().to_string());
        }
        Formula::Not(inner) => identifiers(inner, out),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) | Formula::Iff(l, r) => {
            identifiers(l, out);
            identifiers(r, out);
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            out.insert(v.clone());
            identifiers(body, out);
        }
    }
}

fn fresh_variable(base: &str, avoid: &BTreeSet<String>) -> String {
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|cand| !avoid.contains(cand))
        .expect("unbounded supply of identifiers")
}

/// Names (not variables) occurring in `f`.
pub fn names_in(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_names(f, &mut out);
    out
}

fn collect_names(f: &Formula, out: &mut BTreeSet<String>) {
    let mut add = |t: &Term| {
        if let Term::Name(n) = t {
            out.insert(n.clone());
        }
    };
    match f {
        Formula::Pred(_, args) => args.iter().for_each(&mut add),
        Formula::Eq(l, r) => {
            add(l);
            add(r);
        }
        Formula::Not(inner) | Formula::Forall(_, inner) | Formula::Exists(_, inner) => {
            collect_names(inner, out)
        }
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) | Formula::Iff(l, r) => {
            collect_names(l, out);
            collect_names(r, out);
        }
    }
}

pub fn contains_name(f: &Formula, name: &str) -> bool {
    count_name(f, name) > 0
}

/// Number of occurrences of the name `name` in `f`.
pub fn count_name(f: &Formula, name: &str) -> usize {
    let hit = |t: &Term| usize::from(matches!(t, Term::Name(n) if n == name));
    match f {
        Formula::Pred(_, args) => args.iter().map(hit).sum(),
        Formula::Eq(l, r) => hit(l) + hit(r),
        Formula::Not(inner) | Formula::Forall(_, inner) | Formula::Exists(_, inner) => {
            count_name(inner, name)
        }
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) | Formula::Iff(l, r) => {
            count_name(l, name) + count_name(r, name)
        }
    }
}

/// Variables occurring free in `f`.
pub fn free_variables(f: &Formula) -> BTreeSet<String> {
    fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut check = |t: &Term, bound: &Vec<String>| {
            if let Term::Var(v) = t {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
        };
        match f {
            Formula::Pred(_, args) => args.iter().for_each(|t| check(t, bound)),
            Formula::Eq(l, r) => {
                check(l, bound);
                check(r, bound);
            }
            Formula::Not(inner) => go(inner, bound, out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) | Formula::Iff(l, r) => {
                go(l, bound, out);
                go(r, bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                go(body, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(f, &mut Vec::new(), &mut out);
    out
}

pub fn is_closed(f: &Formula) -> bool {
    free_variables(f).is_empty()
}

/// Whether the bound variable of a quantifier actually occurs in its body.
pub fn binds_anything(var: &str, body: &Formula) -> bool {
    free_variables(body).contains(var)
}

fn map_terms(f: &Formula, g: &mut impl FnMut(&Term) -> Term) -> Formula {
    match f {
        Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(&mut *g).collect()),
        Formula::Eq(l, r) => Formula::Eq(g(l), g(r)),
        Formula::Not(inner) => Formula::not(map_terms(inner, g)),
        Formula::And(l, r) => Formula::and(map_terms(l, g), map_terms(r, g)),
        Formula::Or(l, r) => Formula::or(map_terms(l, g), map_terms(r, g)),
        Formula::Imp(l, r) => Formula::imp(map_terms(l, g), map_terms(r, g)),
        Formula::Iff(l, r) => Formula::iff(map_terms(l, g), map_terms(r, g)),
        Formula::Forall(v, body) => Formula::forall(v.clone(), map_terms(body, g)),
        Formula::Exists(v, body) => Formula::exists(v.clone(), map_terms(body, g)),
    }
}

/// Rename the bound variable `from` to `to` throughout `body` (the scope of
/// the binder being renamed).
fn rename_var(body: &Formula, from: &str, to: &str) -> Formula {
    map_terms(body, &mut |t| match t {
        Term::Var(v) if v == from => Term::Var(to.to_string()),
        other => other.clone(),
    })
}

/// Replace free occurrences of variable `var` by name `name`, renaming any
/// inner binder spelled like `name` so the result prints unambiguously.
fn subst_var(f: &Formula, var: &str, name: &str) -> Formula {
    match f {
        Formula::Pred(p, args) => Formula::Pred(
            p.clone(),
            args.iter().map(|t| replace_var_term(t, var, name)).collect(),
        ),
        Formula::Eq(l, r) => Formula::Eq(
            replace_var_term(l, var, name),
            replace_var_term(r, var, name),
        ),
        Formula::Not(inner) => Formula::not(subst_var(inner, var, name)),
        Formula::And(l, r) => Formula::and(subst_var(l, var, name), subst_var(r, var, name)),
        Formula::Or(l, r) => Formula::or(subst_var(l, var, name), subst_var(r, var, name)),
        Formula::Imp(l, r) => Formula::imp(subst_var(l, var, name), subst_var(r, var, name)),
        Formula::Iff(l, r) => Formula::iff(subst_var(l, var, name), subst_var(r, var, name)),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let (v, body) = if v == var {
                // `var` is rebound here; nothing free below.
                return f.clone();
            } else if v == name && binds_anything(var, body) {
                let mut avoid = BTreeSet::new();
                identifiers(body, &mut avoid);
                avoid.insert(name.to_string());
                avoid.insert(var.to_string());
                let fresh = fresh_variable(v, &avoid);
                let renamed = rename_var(body, v, &fresh);
                (fresh, renamed)
            } else {
                (v.clone(), body.as_ref().clone())
            };
            let body = subst_var(&body, var, name);
            if matches!(f, Formula::Forall(..)) {
                Formula::forall(v, body)
            } else {
                Formula::exists(v, body)
            }
        }
    }
}

fn replace_var_term(t: &Term, var: &str, name: &str) -> Term {
    match t {
        Term::Var(v) if v == var => Term::Name(name.to_string()),
        other => other.clone(),
    }
}

/// Strip the outer quantifier of `f` and put the name `t` for its variable.
pub fn instantiate(f: &Formula, t: &Term) -> Result<Formula, SubstError> {
    let name = match t {
        Term::Name(n) => n,
        Term::Var(v) => return Err(SubstError::NotAName(v.clone())),
    };
    match f {
        Formula::Forall(var, body) | Formula::Exists(var, body) => Ok(subst_var(body, var, name)),
        other => Err(SubstError::NotQuantified(other.to_string())),
    }
}

/// Replace the selected occurrences of name `from` in `f` by name `to`.
/// Occurrences are numbered 1-based in left-to-right reading order.
pub fn replace_occurrences(
    f: &Formula,
    from: &Term,
    to: &Term,
    selector: &Selector,
) -> Result<Formula, SubstError> {
    let (from, to) = match (from, to) {
        (Term::Name(a), Term::Name(b)) => (a.as_str(), b.as_str()),
        (Term::Var(v), _) | (_, Term::Var(v)) => return Err(SubstError::NotAName(v.clone())),
    };
    let count = count_name(f, from);
    if let Selector::Indices(set) = selector {
        if let Some(&bad) = set.iter().find(|&&i| i == 0 || i > count) {
            return Err(SubstError::BadSelector {
                name: from.to_string(),
                index: bad,
                count,
            });
        }
    }
    let mut seen = 0;
    Ok(replace_rec(f, from, to, selector, &mut seen))
}

fn replace_rec(f: &Formula, from: &str, to: &str, sel: &Selector, seen: &mut usize) -> Formula {
    let term = |t: &Term, seen: &mut usize| match t {
        Term::Name(n) if n == from => {
            *seen += 1;
            if sel.selects(*seen) {
                Term::Name(to.to_string())
            } else {
                t.clone()
            }
        }
        other => other.clone(),
    };
    match f {
        Formula::Pred(p, args) => {
            Formula::Pred(p.clone(), args.iter().map(|t| term(t, seen)).collect())
        }
        Formula::Eq(l, r) => {
            let l = term(l, seen);
            let r = term(r, seen);
            Formula::Eq(l, r)
        }
        Formula::Not(inner) => Formula::not(replace_rec(inner, from, to, sel, seen)),
        Formula::And(l, r) => {
            let l = replace_rec(l, from, to, sel, seen);
            Formula::and(l, replace_rec(r, from, to, sel, seen))
        }
        Formula::Or(l, r) => {
            let l = replace_rec(l, from, to, sel, seen);
            Formula::or(l, replace_rec(r, from, to, sel, seen))
        }
        Formula::Imp(l, r) => {
            let l = replace_rec(l, from, to, sel, seen);
            Formula::imp(l, replace_rec(r, from, to, sel, seen))
        }
        Formula::Iff(l, r) => {
            let l = replace_rec(l, from, to, sel, seen);
            Formula::iff(l, replace_rec(r, from, to, sel, seen))
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let k = count_name(body, from);
            let touches = (*seen + 1..=*seen + k).any(|i| sel.selects(i));
            let (v, body) = if v == to && touches {
                let mut avoid = BTreeSet::new();
                identifiers(body, &mut avoid);
                avoid.insert(to.to_string());
                avoid.insert(from.to_string());
                let fresh = fresh_variable(v, &avoid);
                (fresh.clone(), rename_var(body, v, &fresh))
            } else {
                (v.clone(), body.as_ref().clone())
            };
            let body = replace_rec(&body, from, to, sel, seen);
            if matches!(f, Formula::Forall(..)) {
                Formula::forall(v, body)
            } else {
                Formula::exists(v, body)
            }
        }
    }
}

/// Structural equality up to renaming of bound variables.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    fn term_eq(s: &Term, t: &Term, env: &[(String, String)]) -> bool {
        match (s, t) {
            (Term::Name(x), Term::Name(y)) => x == y,
            (Term::Var(x), Term::Var(y)) => {
                // Innermost binder wins.
                for (l, r) in env.iter().rev() {
                    if l == x || r == y {
                        return l == x && r == y;
                    }
                }
                x == y
            }
            _ => false,
        }
    }
    fn go(a: &Formula, b: &Formula, env: &mut Vec<(String, String)>) -> bool {
        match (a, b) {
            (Formula::Pred(p, xs), Formula::Pred(q, ys)) => {
                p == q
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys).all(|(s, t)| term_eq(s, t, env))
            }
            (Formula::Eq(l1, r1), Formula::Eq(l2, r2)) => {
                term_eq(l1, l2, env) && term_eq(r1, r2, env)
            }
            (Formula::Not(x), Formula::Not(y)) => go(x, y, env),
            (Formula::And(l1, r1), Formula::And(l2, r2))
            | (Formula::Or(l1, r1), Formula::Or(l2, r2))
            | (Formula::Imp(l1, r1), Formula::Imp(l2, r2))
            | (Formula::Iff(l1, r1), Formula::Iff(l2, r2)) => go(l1, l2, env) && go(r1, r2, env),
            (Formula::Forall(v, x), Formula::Forall(w, y))
            | (Formula::Exists(v, x), Formula::Exists(w, y)) => {
                env.push((v.clone(), w.clone()));
                let ok = go(x, y, env);
                env.pop();
                ok
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn n(id: &str) -> Term {
        Term::name(id)
    }

    #[test]
    fn instantiate_universal_self_identity() {
        assert_eq!(
            instantiate(&p("forall x (x = x)"), &n("godzilla")).unwrap(),
            p("godzilla = godzilla")
        );
    }

    #[test]
    fn instantiate_null_witness() {
        assert_eq!(
            instantiate(&p("exists x (x != x)"), &n("a0")).unwrap(),
            p("~(a0 = a0)")
        );
    }

    #[test]
    fn instantiate_requires_quantifier() {
        assert!(matches!(
            instantiate(&p("F(a)"), &n("b")),
            Err(SubstError::NotQuantified(_))
        ));
    }

    #[test]
    fn instantiate_renames_clashing_binder() {
        let f = p("forall x exists y (x = y)");
        let g = instantiate(&f, &n("y")).unwrap();
        assert_eq!(g.to_string(), "exists y1 (y = y1)");
        assert_eq!(p(&g.to_string()), g);
    }

    #[test]
    fn replace_examples() {
        let all = Selector::All;
        assert_eq!(
            replace_occurrences(&p("a = b"), &n("b"), &n("a"), &all).unwrap(),
            p("a = a")
        );
        assert_eq!(
            replace_occurrences(&p("b = c"), &n("b"), &n("a"), &Selector::indices([1])).unwrap(),
            p("a = c")
        );
        assert_eq!(
            replace_occurrences(&p("a = a"), &n("a"), &n("b"), &Selector::indices([1])).unwrap(),
            p("b = a")
        );
        assert_eq!(
            replace_occurrences(&p("a = a"), &n("a"), &n("b"), &Selector::indices([2])).unwrap(),
            p("a = b")
        );
    }

    #[test]
    fn replace_rejects_bad_selector() {
        assert_eq!(
            replace_occurrences(&p("F(a)"), &n("a"), &n("b"), &Selector::indices([2])),
            Err(SubstError::BadSelector {
                name: "a".into(),
                index: 2,
                count: 1
            })
        );
        assert!(
            replace_occurrences(&p("F(a)"), &n("a"), &n("b"), &Selector::indices([0])).is_err()
        );
    }

    #[test]
    fn replace_counts_in_reading_order() {
        let f = p("F(a) & forall x (R(a, x) | a = a)");
        let g = replace_occurrences(&f, &n("a"), &n("b"), &Selector::indices([2, 4])).unwrap();
        assert_eq!(g, p("F(a) & forall x (R(b, x) | a = b)"));
    }

    #[test]
    fn replace_avoids_capture() {
        let f = p("forall x (F(x) & F(a))");
        let g = replace_occurrences(&f, &n("a"), &n("x"), &Selector::All).unwrap();
        assert_eq!(g.to_string(), "forall x1 (F(x1) & F(x))");
    }

    #[test]
    fn alpha_equivalence() {
        assert!(alpha_eq(&p("forall x (x = x)"), &p("forall y (y = y)")));
        assert!(!alpha_eq(&p("forall x (x = a)"), &p("forall y (y = b)")));
        assert!(alpha_eq(
            &p("forall x exists y (R(x, y))"),
            &p("forall y exists x (R(y, x))")
        ));
        assert!(!alpha_eq(
            &p("forall x exists y (R(x, y))"),
            &p("forall y exists x (R(x, y))")
        ));
    }

    #[test]
    fn names_and_free_variables() {
        let f = p("exists x (x = godzilla) & F(a)");
        assert_eq!(
            names_in(&f).into_iter().collect::<Vec<_>>(),
            vec!["a".to_string(), "godzilla".to_string()]
        );
        assert!(is_closed(&f));
        let body = Formula::eq(Term::var("x"), n("a"));
        assert_eq!(free_variables(&body).len(), 1);
    }
}
