use std::collections::BTreeSet;

use super::{rule_availability, Availability, LineError, LineVerdict, Mode, ProofVerdict, Sequent};
use crate::syntax::{
    alpha_eq, contains_name, instantiate, names_in, replace_occurrences, AssumptionSet,
    Direction, Formula, ProofLine, ProofScript, Rule, Side, SubstError, Term,
};

type LineResult = Result<AssumptionSet, LineError>;

/// Check every line of `script` under `mode`.
///
/// Lines are checked locally: a line's citations are read as declared, so an
/// error on one line does not cascade into the lines that cite it.
pub fn check_proof(script: &ProofScript, mode: Mode) -> ProofVerdict {
    let per_line: Vec<LineVerdict> = script
        .lines
        .iter()
        .map(|line| LineVerdict {
            number: line.number,
            result: check_line(script, line, mode),
        })
        .collect();
    let accepted = per_line.iter().all(LineVerdict::ok);
    let uses = |rule: Rule| script.lines.iter().any(|l| l.justification.rule == rule);

    let sequent = if accepted {
        script.lines.last().map(|last| Sequent {
            premises: last
                .assumptions
                .lines
                .iter()
                .map(|&n| script.lines[n - 1].formula.clone())
                .collect(),
            conclusion: last.formula.clone(),
            global_identity: last.assumptions.global,
        })
    } else {
        None
    };

    ProofVerdict {
        mode,
        accepted,
        per_line,
        sequent,
        uses_identity_intro: uses(Rule::IdentityIntro),
        uses_global_assumption: uses(Rule::GlobalAssumption),
    }
}

fn check_line(script: &ProofScript, line: &ProofLine, mode: Mode) -> Result<(), LineError> {
    let rule = line.justification.rule;
    if line.assumptions.global && !script.pragmas.identity_global {
        return Err(LineError::GAWithoutPragma);
    }
    match rule_availability(rule, mode) {
        Availability::Available => {}
        Availability::RequiresPragma if script.pragmas.identity_global => {}
        Availability::RequiresPragma => return Err(LineError::GAWithoutPragma),
        Availability::Unavailable => return Err(LineError::RuleUnavailableInMode { rule, mode }),
    }
    let cited = &line.justification.cited;
    if cited.len() != rule.citation_arity() {
        return Err(LineError::WrongCitationArity {
            rule,
            expected: rule.citation_arity(),
            found: cited.len(),
        });
    }
    let cited: Vec<&ProofLine> = cited.iter().map(|&n| &script.lines[n - 1]).collect();
    let computed = apply_rule(script, line, &cited)?;
    if computed != line.assumptions {
        return Err(LineError::AssumptionSetMismatch {
            declared: line.assumptions.to_string(),
            computed: computed.to_string(),
        });
    }
    Ok(())
}

fn mismatch(message: impl Into<String>) -> LineError {
    LineError::FormulaMismatch(message.into())
}

fn expect_formula(derived: &Formula, declared: &Formula) -> Result<(), LineError> {
    if alpha_eq(derived, declared) {
        Ok(())
    } else {
        Err(mismatch(format!("rule yields {derived}, line states {declared}")))
    }
}

fn require_assumption(line: &ProofLine, role: &str) -> Result<(), LineError> {
    if line.justification.rule == Rule::Assumption {
        Ok(())
    } else {
        Err(mismatch(format!(
            "{role} line {} is not an assumption",
            line.number
        )))
    }
}

/// Formulas of the assumption lines in `set`, skipping `except`.
fn assumption_formulas<'a>(
    script: &'a ProofScript,
    set: &AssumptionSet,
    except: Option<usize>,
) -> impl Iterator<Item = &'a Formula> {
    let lines: Vec<usize> = set
        .lines
        .iter()
        .copied()
        .filter(|&n| Some(n) != except)
        .collect();
    lines
        .into_iter()
        .filter_map(move |n| script.lines.get(n - 1).map(|l| &l.formula))
}

fn subst_error(e: SubstError) -> LineError {
    match e {
        SubstError::BadSelector { .. } => LineError::BadSelector(e.to_string()),
        other => mismatch(other.to_string()),
    }
}

/// A name occurring in none of `formulas`.
fn fresh_name<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> String {
    let used: BTreeSet<String> = formulas.into_iter().flat_map(names_in).collect();
    (0..)
        .map(|i| format!("k{i}"))
        .find(|n| !used.contains(n))
        .expect("unbounded supply of names")
}

/// Candidate witness names for a quantifier step: the one written in the
/// justification, else every name of `instance` (those missing from
/// `general` first) followed by a name occurring in neither, which covers
/// vacuous quantification.
fn witness_candidates(written: Option<&String>, instance: &Formula, general: &Formula) -> Vec<String> {
    if let Some(t) = written {
        return vec![t.clone()];
    }
    let general_names = names_in(general);
    let mut out: Vec<String> = names_in(instance)
        .into_iter()
        .filter(|n| !general_names.contains(n))
        .collect();
    out.extend(names_in(instance).into_iter().filter(|n| general_names.contains(n)));
    out.push(fresh_name([instance, general]));
    out
}

fn apply_rule(script: &ProofScript, line: &ProofLine, c: &[&ProofLine]) -> LineResult {
    let f = &line.formula;
    let j = &line.justification;
    let union = |lines: &[&ProofLine]| {
        lines
            .iter()
            .fold(AssumptionSet::empty(), |acc, l| acc.union(&l.assumptions))
    };

    match j.rule {
        Rule::Assumption => Ok(AssumptionSet::single(line.number)),

        Rule::IdentityIntro | Rule::GlobalAssumption => {
            if !(f.is_name_self_identity() || f.is_universal_self_identity()) {
                return Err(mismatch(format!(
                    "{} introduces only t = t or forall x (x = x), not {f}",
                    j.rule
                )));
            }
            Ok(if j.rule == Rule::GlobalAssumption {
                AssumptionSet::global()
            } else {
                AssumptionSet::empty()
            })
        }

        Rule::IdentityElim => {
            let (s, t) = match &c[0].formula {
                Formula::Eq(s, t) => (s, t),
                other => {
                    return Err(mismatch(format!(
                        "=E needs an identity on line {}, found {other}",
                        c[0].number
                    )))
                }
            };
            let rw = j
                .rewrite
                .as_ref()
                .ok_or_else(|| mismatch("=E needs a direction and an occurrence selector"))?;
            let (from, to) = match rw.direction {
                Direction::LeftToRight => (s, t),
                Direction::RightToLeft => (t, s),
            };
            let derived =
                replace_occurrences(&c[1].formula, from, to, &rw.selector).map_err(subst_error)?;
            expect_formula(&derived, f)?;
            Ok(union(c))
        }

        Rule::ModusPonens => {
            let fits = |imp: &ProofLine, ante: &ProofLine| match &imp.formula {
                Formula::Imp(a, b) => alpha_eq(a, &ante.formula) && alpha_eq(b, f),
                _ => false,
            };
            if fits(c[0], c[1]) || fits(c[1], c[0]) {
                Ok(union(c))
            } else {
                Err(mismatch(format!(
                    "lines {} and {} are not A -> B and A with B = {f}",
                    c[0].number, c[1].number
                )))
            }
        }

        Rule::ModusTollens => {
            let fits = |imp: &ProofLine, neg: &ProofLine| match (&imp.formula, &neg.formula) {
                (Formula::Imp(a, b), Formula::Not(nb)) => {
                    alpha_eq(b, nb) && alpha_eq(&Formula::not((**a).clone()), f)
                }
                _ => false,
            };
            if fits(c[0], c[1]) || fits(c[1], c[0]) {
                Ok(union(c))
            } else {
                Err(mismatch(format!(
                    "lines {} and {} are not A -> B and ~B with ~A = {f}",
                    c[0].number, c[1].number
                )))
            }
        }

        Rule::DoubleNegation => {
            let g = &c[0].formula;
            let dn = |x: &Formula| Formula::not(Formula::not(x.clone()));
            if alpha_eq(&dn(g), f) || alpha_eq(g, &dn(f)) {
                Ok(union(c))
            } else {
                Err(mismatch(format!("{f} and {g} do not differ by a double negation")))
            }
        }

        Rule::ConditionalProof => {
            require_assumption(c[0], "discharged")?;
            expect_formula(&Formula::imp(c[0].formula.clone(), c[1].formula.clone()), f)?;
            Ok(c[1].assumptions.without(c[0].number))
        }

        Rule::AndIntro => {
            let ok = match f {
                Formula::And(l, r) => {
                    (alpha_eq(l, &c[0].formula) && alpha_eq(r, &c[1].formula))
                        || (alpha_eq(l, &c[1].formula) && alpha_eq(r, &c[0].formula))
                }
                _ => false,
            };
            if ok {
                Ok(union(c))
            } else {
                Err(mismatch(format!(
                    "{f} is not the conjunction of lines {} and {}",
                    c[0].number, c[1].number
                )))
            }
        }

        Rule::AndElim => match &c[0].formula {
            Formula::And(l, r) if alpha_eq(l, f) || alpha_eq(r, f) => Ok(union(c)),
            g => Err(mismatch(format!("{f} is not a conjunct of {g}"))),
        },

        Rule::OrIntro => {
            let ok = match f {
                Formula::Or(l, r) => match j.side {
                    Some(Side::Left) => alpha_eq(l, &c[0].formula),
                    Some(Side::Right) => alpha_eq(r, &c[0].formula),
                    None => alpha_eq(l, &c[0].formula) || alpha_eq(r, &c[0].formula),
                },
                _ => false,
            };
            if ok {
                Ok(union(c))
            } else {
                Err(mismatch(format!(
                    "{f} is not a disjunction with {} as a disjunct",
                    c[0].formula
                )))
            }
        }

        Rule::OrElim => {
            let (d, a1, c1, a2, c2) = (c[0], c[1], c[2], c[3], c[4]);
            require_assumption(a1, "first case")?;
            require_assumption(a2, "second case")?;
            let (l, r) = match &d.formula {
                Formula::Or(l, r) => (l, r),
                other => return Err(mismatch(format!("line {} is not a disjunction: {other}", d.number))),
            };
            let cases_fit = (alpha_eq(l, &a1.formula) && alpha_eq(r, &a2.formula))
                || (alpha_eq(l, &a2.formula) && alpha_eq(r, &a1.formula));
            if !cases_fit {
                return Err(mismatch(format!(
                    "assumptions {} and {} are not the disjuncts of {}",
                    a1.number, a2.number, d.formula
                )));
            }
            expect_formula(&c1.formula, f)?;
            expect_formula(&c2.formula, f)?;
            Ok(d.assumptions
                .union(&c1.assumptions.without(a1.number))
                .union(&c2.assumptions.without(a2.number)))
        }

        Rule::ReductioAdAbsurdum => {
            require_assumption(c[0], "discharged")?;
            let contradiction = match &c[1].formula {
                Formula::And(x, y) => match (x.as_ref(), y.as_ref()) {
                    (b, Formula::Not(nb)) if alpha_eq(b, nb) => true,
                    (Formula::Not(nb), b) => alpha_eq(b, nb),
                    _ => false,
                },
                _ => false,
            };
            if !contradiction {
                return Err(mismatch(format!(
                    "line {} is not of the form B & ~B",
                    c[1].number
                )));
            }
            expect_formula(&Formula::not(c[0].formula.clone()), f)?;
            Ok(c[1].assumptions.without(c[0].number))
        }

        Rule::IffIntro => {
            let ok = match f {
                Formula::Iff(a, b) => {
                    let fwd = Formula::imp((**a).clone(), (**b).clone());
                    let bwd = Formula::imp((**b).clone(), (**a).clone());
                    (alpha_eq(&fwd, &c[0].formula) && alpha_eq(&bwd, &c[1].formula))
                        || (alpha_eq(&fwd, &c[1].formula) && alpha_eq(&bwd, &c[0].formula))
                }
                _ => false,
            };
            if ok {
                Ok(union(c))
            } else {
                Err(mismatch(format!(
                    "lines {} and {} are not the two directions of {f}",
                    c[0].number, c[1].number
                )))
            }
        }

        Rule::IffElim => match &c[0].formula {
            Formula::Iff(a, b) => {
                let fwd = Formula::imp((**a).clone(), (**b).clone());
                let bwd = Formula::imp((**b).clone(), (**a).clone());
                if alpha_eq(&fwd, f) || alpha_eq(&bwd, f) {
                    Ok(union(c))
                } else {
                    Err(mismatch(format!("{f} is not a direction of {}", c[0].formula)))
                }
            }
            g => Err(mismatch(format!("line {} is not a biconditional: {g}", c[0].number))),
        },

        Rule::UniversalElim => {
            let g = &c[0].formula;
            if !matches!(g, Formula::Forall(..)) {
                return Err(mismatch(format!("line {} is not universal: {g}", c[0].number)));
            }
            let candidates = witness_candidates(j.term.as_ref(), f, g);
            for t in &candidates {
                if alpha_eq(&instantiate(g, &Term::name(t)).map_err(subst_error)?, f) {
                    return Ok(union(c));
                }
            }
            Err(mismatch(format!("{f} is not an instance of {g}")))
        }

        Rule::ExistentialIntro => {
            let Formula::Exists(..) = f else {
                return Err(mismatch(format!("{f} is not existential")));
            };
            let g = &c[0].formula;
            let candidates = witness_candidates(j.term.as_ref(), g, f);
            for t in &candidates {
                if alpha_eq(&instantiate(f, &Term::name(t)).map_err(subst_error)?, g) {
                    return Ok(union(c));
                }
            }
            Err(mismatch(format!("{g} is not an instance of {f}")))
        }

        Rule::UniversalIntro => {
            let Formula::Forall(..) = f else {
                return Err(mismatch(format!("{f} is not universal")));
            };
            let g = &c[0].formula;
            let mut violation = None;
            for a in witness_candidates(j.term.as_ref(), g, f) {
                if !alpha_eq(&instantiate(f, &Term::name(&a)).map_err(subst_error)?, g) {
                    continue;
                }
                if contains_name(f, &a) {
                    violation = Some(format!("{a} is not generalized everywhere in {f}"));
                    continue;
                }
                let clash = assumption_formulas(script, &c[0].assumptions, None)
                    .find(|h| contains_name(h, &a));
                match clash {
                    Some(h) => violation = Some(format!("{a} occurs in assumption {h}")),
                    None => return Ok(union(c)),
                }
            }
            Err(match violation {
                Some(v) => LineError::SideConditionViolated(v),
                None => mismatch(format!("{g} is not an instance of {f}")),
            })
        }

        Rule::ExistentialElim => {
            let (e, a, n) = (c[0], c[1], c[2]);
            require_assumption(a, "eigen")?;
            let g = &e.formula;
            if !matches!(g, Formula::Exists(..)) {
                return Err(mismatch(format!("line {} is not existential: {g}", e.number)));
            }
            expect_formula(&n.formula, f)?;
            let mut violation = None;
            for name in witness_candidates(j.term.as_ref(), &a.formula, g) {
                if !alpha_eq(&instantiate(g, &Term::name(&name)).map_err(subst_error)?, &a.formula) {
                    continue;
                }
                if contains_name(g, &name) {
                    violation = Some(format!("{name} occurs in {g}"));
                    continue;
                }
                if contains_name(f, &name) {
                    violation = Some(format!("{name} occurs in the conclusion {f}"));
                    continue;
                }
                let clash = assumption_formulas(script, &n.assumptions, Some(a.number))
                    .find(|h| contains_name(h, &name));
                match clash {
                    Some(h) => violation = Some(format!("{name} occurs in assumption {h}")),
                    None => return Ok(e.assumptions.union(&n.assumptions.without(a.number))),
                }
            }
            Err(match violation {
                Some(v) => LineError::SideConditionViolated(v),
                None => mismatch(format!(
                    "assumption line {} is not an instance of {g}",
                    a.number
                )),
            })
        }

        Rule::QuantifierNegation => {
            let g = &c[0].formula;
            if quantifier_duals(g).iter().any(|d| alpha_eq(d, f)) {
                Ok(union(c))
            } else {
                Err(mismatch(format!("{f} is not a quantifier dual of {g}")))
            }
        }
    }
}

/// Formulas reachable from `f` by one quantifier-negation step:
/// `~forall x A` and `exists x ~A` interchange, as do `~exists x A` and
/// `forall x ~A`.
fn quantifier_duals(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    match f {
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Forall(v, body) => out.push(Formula::exists(v.clone(), Formula::not((**body).clone()))),
            Formula::Exists(v, body) => out.push(Formula::forall(v.clone(), Formula::not((**body).clone()))),
            _ => {}
        },
        Formula::Exists(v, body) => {
            if let Formula::Not(b) = body.as_ref() {
                out.push(Formula::not(Formula::forall(v.clone(), (**b).clone())));
            }
        }
        Formula::Forall(v, body) => {
            if let Formula::Not(b) = body.as_ref() {
                out.push(Formula::not(Formula::exists(v.clone(), (**b).clone())));
            }
        }
        _ => {}
    }
    out
}
