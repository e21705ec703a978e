//! Formula pools for the rule audit.

use crate::syntax::{Formula, Signature, Term};

/// Atoms over `terms`: identities first (pairs in term order), then each
/// predicate applied to every argument tuple in lexicographic order.
fn atoms(sig: &Signature, terms: &[Term]) -> Vec<Formula> {
    let mut out = Vec::new();
    for s in terms {
        for t in terms {
            out.push(Formula::eq(s.clone(), t.clone()));
        }
    }
    for (symbol, arity) in &sig.predicates {
        let mut args: Vec<Vec<Term>> = vec![Vec::new()];
        for _ in 0..*arity {
            args = args
                .into_iter()
                .flat_map(|prefix| {
                    terms.iter().map(move |t| {
                        let mut a = prefix.clone();
                        a.push(t.clone());
                        a
                    })
                })
                .collect();
        }
        out.extend(args.into_iter().map(|a| Formula::pred(symbol.clone(), a)));
    }
    out
}

fn binaries(left: &[Formula], right: &[Formula], keep: impl Fn(&Formula, &Formula) -> bool) -> Vec<Formula> {
    let ops: [fn(Formula, Formula) -> Formula; 4] =
        [Formula::and, Formula::or, Formula::imp, Formula::iff];
    let mut out = Vec::new();
    for op in ops {
        for l in left {
            for r in right {
                if keep(l, r) {
                    out.push(op(l.clone(), r.clone()));
                }
            }
        }
    }
    out
}

fn mentions(f: &Formula, var: &str) -> bool {
    crate::syntax::free_variables(f).contains(var)
}

/// Closed formulas of height at most 2 over `sig`: atoms, negated atoms,
/// binary compounds of atoms, and `forall`/`exists` over atoms in `var`.
pub fn closed_pool(sig: &Signature, var: &str) -> Vec<Formula> {
    let names: Vec<Term> = sig.names.iter().map(Term::name).collect();
    let closed_atoms = atoms(sig, &names);
    let mut out = closed_atoms.clone();
    out.extend(closed_atoms.iter().cloned().map(Formula::not));
    out.extend(binaries(&closed_atoms, &closed_atoms, |_, _| true));
    let open_atoms: Vec<Formula> = atoms(sig, &with_var(&names, var))
        .into_iter()
        .filter(|a| mentions(a, var))
        .collect();
    for a in &open_atoms {
        out.push(Formula::forall(var, a.clone()));
    }
    for a in &open_atoms {
        out.push(Formula::exists(var, a.clone()));
    }
    out
}

/// Formulas of height at most 2 in which `var` occurs free: the bodies
/// `phi(x)` that quantifier rules are instantiated with.
pub fn body_pool(sig: &Signature, var: &str) -> Vec<Formula> {
    let names: Vec<Term> = sig.names.iter().map(Term::name).collect();
    let all_atoms = atoms(sig, &with_var(&names, var));
    let open_atoms: Vec<Formula> = all_atoms.iter().filter(|a| mentions(a, var)).cloned().collect();
    let mut out = open_atoms.clone();
    out.extend(open_atoms.iter().cloned().map(Formula::not));
    out.extend(binaries(&all_atoms, &all_atoms, |l, r| {
        mentions(l, var) || mentions(r, var)
    }));
    out
}

fn with_var(names: &[Term], var: &str) -> Vec<Term> {
    let mut terms = names.to_vec();
    terms.push(Term::var(var));
    terms
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::is_closed;

    fn sig() -> Signature {
        Signature::new().with_names(["a", "b"]).with_predicate("F", 1)
    }

    #[test]
    fn closed_pool_shape() {
        let pool = closed_pool(&sig(), "x");
        // 6 atoms, 6 negations, 4 * 36 compounds, 2 * 6 quantified.
        assert_eq!(pool.len(), 6 + 6 + 144 + 12);
        assert!(pool.iter().all(is_closed));
        assert!(pool.iter().all(|f| f.depth() <= 2));
        assert_eq!(pool[0].to_string(), "a = a");
    }

    #[test]
    fn body_pool_shape() {
        let bodies = body_pool(&sig(), "x");
        // 6 open atoms, 6 negations, 4 * (144 - 36) compounds.
        assert_eq!(bodies.len(), 6 + 6 + 4 * 108);
        assert!(bodies.iter().all(|f| mentions(f, "x") && f.depth() <= 2));
    }
}
