//! Brute-force soundness audit.
//!
//! Each rule is instantiated over a pool of small formulas and checked
//! against every enumerated model. Rules that discharge assumptions are
//! read as transformations of judgements `H |- A`; a judgement holds in a
//! model when a false hypothesis or a true conclusion makes it so. Premises
//! that mention the eigen-name must hold however the eigen-name is
//! interpreted, which is how the freshness conditions of `UI` and `EE`
//! appear semantically.
//!
//! Truth values are computed once per formula as a bitvector over the model
//! list, so instances are checked with word operations.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use serde_json::{json, Value};

use super::pool::{body_pool, closed_pool};
use super::{enumerate_models, Bounds, SearchError};
use crate::semantics::{eval_formula, null_pad, validate_model, Assignment, EvalError, Model, Profile};
use crate::syntax::{
    contains_name, count_name, instantiate, replace_occurrences, Formula, Rule, Selector,
    Signature, Term,
};

/// Rules covered by `audit_all`. `=I` is left out: its schema `|- t = t` is
/// exactly what the open and minimal modes reject, and it fails in any model
/// with a null element.
pub const AUDITED_RULES: [Rule; 19] = [
    Rule::Assumption,
    Rule::GlobalAssumption,
    Rule::IdentityElim,
    Rule::ModusPonens,
    Rule::ModusTollens,
    Rule::DoubleNegation,
    Rule::ConditionalProof,
    Rule::AndIntro,
    Rule::AndElim,
    Rule::OrIntro,
    Rule::OrElim,
    Rule::ReductioAdAbsurdum,
    Rule::IffIntro,
    Rule::IffElim,
    Rule::UniversalElim,
    Rule::UniversalIntro,
    Rule::ExistentialIntro,
    Rule::ExistentialElim,
    Rule::QuantifierNegation,
];

const VAR: &str = "x";

/// Vocabulary used when the bounds do not name one: two names and a
/// monadic predicate.
pub fn audit_signature() -> Signature {
    Signature::new().with_names(["a", "b"]).with_predicate("F", 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AuditStatus {
    SoundUpToBound,
    Counterexample,
}

impl AuditStatus {
    pub fn name(self) -> &'static str {
        match self {
            AuditStatus::SoundUpToBound => "SOUND_UP_TO_BOUND",
            AuditStatus::Counterexample => "COUNTEREXAMPLE",
        }
    }
}

impl fmt::Display for AuditStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `hyps |- conclusion`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Judgement {
    pub hyps: Vec<Formula>,
    pub conclusion: Formula,
}

impl Judgement {
    pub fn bare(conclusion: Formula) -> Self {
        Judgement {
            hyps: Vec::new(),
            conclusion,
        }
    }

    pub fn under(hyps: Vec<Formula>, conclusion: Formula) -> Self {
        Judgement { hyps, conclusion }
    }

    fn mentions(&self, name: &str) -> bool {
        contains_name(&self.conclusion, name) || self.hyps.iter().any(|h| contains_name(h, name))
    }

    fn holds_plain(&self, m: &Model, p: Profile) -> Result<bool, EvalError> {
        let none = Assignment::new();
        for h in &self.hyps {
            if !eval_formula(m, &none, h, p)? {
                return Ok(true);
            }
        }
        eval_formula(m, &none, &self.conclusion, p)
    }

    /// Truth in `m`; if the judgement mentions `eigen`, truth under every
    /// interpretation of it.
    pub fn holds(&self, m: &Model, p: Profile, eigen: Option<&str>) -> Result<bool, EvalError> {
        match eigen {
            Some(c) if self.mentions(c) => {
                for variant in eigen_variants(m, c, p) {
                    if !self.holds_plain(&variant, p)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => self.holds_plain(m, p),
        }
    }
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hyps.is_empty() {
            return write!(f, "{}", self.conclusion);
        }
        let hyps: Vec<String> = self.hyps.iter().map(|h| h.to_string()).collect();
        write!(f, "{} ⊢ {}", hyps.join(", "), self.conclusion)
    }
}

fn eigen_variants(m: &Model, c: &str, p: Profile) -> Vec<Model> {
    let mut values: Vec<Option<usize>> = (0..m.domain_size).map(Some).collect();
    if p == Profile::Partial {
        values.push(None);
    }
    values
        .into_iter()
        .map(|v| m.clone().with_name(c, v))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub premises: Vec<Judgement>,
    pub conclusion: Judgement,
    pub eigen: Option<String>,
    pub model: Model,
}

impl Witness {
    /// Re-check from scratch that the model is valid, the premises hold and
    /// the conclusion fails.
    pub fn reproduces(&self, p: Profile) -> Result<bool, EvalError> {
        if !validate_model(&self.model, p).is_empty() {
            return Ok(false);
        }
        let eigen = self.eigen.as_deref();
        for j in &self.premises {
            if !j.holds(&self.model, p, eigen)? {
                return Ok(false);
            }
        }
        Ok(!self.conclusion.holds(&self.model, p, eigen)?)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "premises": self.premises.iter().map(|j| j.to_string()).collect::<Vec<_>>(),
            "conclusion": self.conclusion.to_string(),
            "model": self.model.to_json(),
        });
        if let Some(c) = &self.eigen {
            v["eigen"] = json!(c);
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub rule: Rule,
    pub profile: Profile,
    pub status: AuditStatus,
    pub witness: Option<Witness>,
    pub instances_checked: u64,
    pub models: u64,
}

impl AuditReport {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "rule": self.rule.name(),
            "profile": self.profile.name(),
            "status": self.status.name(),
            "instances_checked": self.instances_checked,
            "models": self.models,
        });
        if let Some(w) = &self.witness {
            v["witness"] = w.to_json();
        }
        v
    }
}

type Bits = Rc<Vec<u64>>;

struct Universe {
    profile: Profile,
    models: Vec<Model>,
    /// Models as evaluated (padded under `null-padded`).
    eval_models: Vec<Model>,
    eval_profile: Profile,
    eigen: String,
    words: usize,
    valid: Vec<u64>,
    cache: HashMap<Formula, Bits>,
    eigen_cache: HashMap<Formula, (Bits, Bits)>,
}

impl Universe {
    fn new(sig: &Signature, bounds: &Bounds, profile: Profile, eigen: String) -> Result<Self, SearchError> {
        let models: Vec<Model> = enumerate_models(sig, bounds, profile)?.collect();
        let (eval_models, eval_profile) = if profile == Profile::NullPadded {
            (models.iter().map(null_pad).collect(), Profile::NullStrict)
        } else {
            (models.clone(), profile)
        };
        let words = models.len().div_ceil(64).max(1);
        let mut valid = vec![0u64; words];
        for i in 0..models.len() {
            valid[i / 64] |= 1 << (i % 64);
        }
        Ok(Universe {
            profile,
            models,
            eval_models,
            eval_profile,
            eigen,
            words,
            valid,
            cache: HashMap::new(),
            eigen_cache: HashMap::new(),
        })
    }

    fn pack(&self, truth: impl Iterator<Item = bool>) -> Bits {
        let mut out = vec![0u64; self.words];
        for (i, t) in truth.enumerate() {
            if t {
                out[i / 64] |= 1 << (i % 64);
            }
        }
        Rc::new(out)
    }

    fn map2(&mut self, l: &Formula, r: &Formula, op: fn(u64, u64) -> u64) -> Result<Bits, EvalError> {
        let l = self.bits(l)?;
        let r = self.bits(r)?;
        Ok(Rc::new(l.iter().zip(r.iter()).map(|(&x, &y)| op(x, y)).collect()))
    }

    /// Truth of a closed formula in every model.
    fn bits(&mut self, f: &Formula) -> Result<Bits, EvalError> {
        match f {
            Formula::Not(inner) => {
                let b = self.bits(inner)?;
                Ok(Rc::new(b.iter().map(|x| !x).collect()))
            }
            Formula::And(l, r) => self.map2(l, r, |x, y| x & y),
            Formula::Or(l, r) => self.map2(l, r, |x, y| x | y),
            Formula::Imp(l, r) => self.map2(l, r, |x, y| !x | y),
            Formula::Iff(l, r) => self.map2(l, r, |x, y| !(x ^ y)),
            _ => {
                if let Some(b) = self.cache.get(f) {
                    return Ok(b.clone());
                }
                let none = Assignment::new();
                let truth = self
                    .eval_models
                    .iter()
                    .map(|m| eval_formula(m, &none, f, self.eval_profile))
                    .collect::<Result<Vec<bool>, _>>()?;
                let b = self.pack(truth.into_iter());
                self.cache.insert(f.clone(), b.clone());
                Ok(b)
            }
        }
    }

    /// For a formula mentioning the eigen-name: (true under every
    /// interpretation of it, true under some).
    fn eigen_bits(&mut self, f: &Formula) -> Result<(Bits, Bits), EvalError> {
        if let Some(b) = self.eigen_cache.get(f) {
            return Ok(b.clone());
        }
        let none = Assignment::new();
        let mut all = Vec::with_capacity(self.models.len());
        let mut some = Vec::with_capacity(self.models.len());
        for m in &self.models {
            let (mut a, mut s) = (true, false);
            for v in eigen_variants(m, &self.eigen, self.profile) {
                let t = eval_formula(&v, &none, f, self.profile)?;
                a &= t;
                s |= t;
            }
            all.push(a);
            some.push(s);
        }
        let pair = (self.pack(all.into_iter()), self.pack(some.into_iter()));
        self.eigen_cache.insert(f.clone(), pair.clone());
        Ok(pair)
    }

    /// First model where `failing(w)` has a bit set.
    fn first_failure(&self, failing: impl Fn(usize) -> u64) -> Option<usize> {
        (0..self.words).find_map(|w| {
            let x = failing(w) & self.valid[w];
            (x != 0).then(|| w * 64 + x.trailing_zeros() as usize)
        })
    }
}

struct Auditor {
    u: Universe,
    instances: u64,
    witness: Option<Witness>,
}

impl Auditor {
    /// Record one instance; on failure keep the witness and return `true`.
    fn check(
        &mut self,
        failing: impl Fn(usize) -> u64,
        premises: impl FnOnce() -> Vec<Judgement>,
        conclusion: impl FnOnce() -> Judgement,
        eigen: bool,
    ) -> bool {
        self.instances += 1;
        match self.u.first_failure(failing) {
            Some(i) => {
                self.witness = Some(Witness {
                    premises: premises(),
                    conclusion: conclusion(),
                    eigen: eigen.then(|| self.u.eigen.clone()),
                    model: self.u.models[i].clone(),
                });
                true
            }
            None => false,
        }
    }

    /// Single-step rule `premises / conclusion` with all formulas closed.
    fn check_formulas(&mut self, premises: &[Formula], conclusion: &Formula) -> Result<bool, EvalError> {
        let mut acc = self.u.valid.clone();
        for p in premises {
            let b = self.u.bits(p)?;
            acc.iter_mut().zip(b.iter()).for_each(|(a, x)| *a &= x);
        }
        let c = self.u.bits(conclusion)?;
        Ok(self.check(
            |w| acc[w] & !c[w],
            || premises.iter().cloned().map(Judgement::bare).collect(),
            || Judgement::bare(conclusion.clone()),
            false,
        ))
    }
}

fn name_term(n: &str) -> Term {
    Term::name(n)
}

fn fresh_eigen(sig: &Signature) -> String {
    std::iter::once("c".to_string())
        .chain((1..).map(|i| format!("c{i}")))
        .find(|c| !sig.names.contains(c))
        .expect("unbounded supply of names")
}

/// Audit one rule. The signature defaults to [`audit_signature`].
pub fn audit_rule(rule: Rule, bounds: &Bounds, profile: Profile) -> Result<AuditReport, SearchError> {
    let sig = bounds.signature.clone().unwrap_or_else(audit_signature);
    let eigen = fresh_eigen(&sig);
    let universe = Universe::new(&sig, bounds, profile, eigen.clone())?;
    let models = universe.models.len() as u64;
    let mut a = Auditor {
        u: universe,
        instances: 0,
        witness: None,
    };
    run_rule(&mut a, rule, &sig, &eigen)?;
    Ok(AuditReport {
        rule,
        profile,
        status: if a.witness.is_some() {
            AuditStatus::Counterexample
        } else {
            AuditStatus::SoundUpToBound
        },
        witness: a.witness,
        instances_checked: a.instances,
        models,
    })
}

/// Audit every rule in [`AUDITED_RULES`], in that order.
pub fn audit_all(bounds: &Bounds, profile: Profile) -> Result<Vec<AuditReport>, SearchError> {
    AUDITED_RULES
        .iter()
        .map(|&r| audit_rule(r, bounds, profile))
        .collect()
}

fn run_rule(a: &mut Auditor, rule: Rule, sig: &Signature, eigen: &str) -> Result<(), SearchError> {
    let pool = closed_pool(sig, VAR);
    let bodies = body_pool(sig, VAR);
    let names: Vec<String> = sig.names.iter().cloned().collect();
    let pb: Vec<Bits> = pool
        .iter()
        .map(|f| a.u.bits(f))
        .collect::<Result<_, _>>()?;
    let n = pool.len();

    // Most arms return as soon as a witness is found.
    macro_rules! stop_if {
        ($e:expr) => {
            if $e {
                return Ok(());
            }
        };
    }

    match rule {
        Rule::Assumption => {
            for f in &pool {
                stop_if!(a.check_formulas(std::slice::from_ref(f), f)?);
            }
        }
        Rule::IdentityIntro => {
            for t in &names {
                stop_if!(a.check_formulas(&[], &Formula::self_identity(t))?);
            }
        }
        Rule::GlobalAssumption => {
            let g = Formula::universal_self_identity();
            for t in &names {
                stop_if!(a.check_formulas(std::slice::from_ref(&g), &Formula::self_identity(t))?);
            }
        }
        Rule::IdentityElim => {
            for s in &names {
                for t in &names {
                    let eq = Formula::eq(name_term(s), name_term(t));
                    for phi in &pool {
                        for (from, to) in [(s, t), (t, s)] {
                            let k = count_name(phi, from);
                            for pick in 1u32..(1 << k) {
                                let sel = Selector::indices(
                                    (0..k).filter(|i| pick & (1 << i) != 0).map(|i| i + 1),
                                );
                                let out = replace_occurrences(phi, &name_term(from), &name_term(to), &sel)
                                    .expect("selector within range");
                                stop_if!(a.check_formulas(&[eq.clone(), phi.clone()], &out)?);
                            }
                        }
                    }
                }
            }
        }
        Rule::ModusPonens | Rule::ModusTollens | Rule::AndIntro | Rule::IffIntro | Rule::ConditionalProof
        | Rule::ReductioAdAbsurdum => {
            for i in 0..n {
                for j in 0..n {
                    let (x, y) = (&pb[i], &pb[j]);
                    let (p, q) = (&pool[i], &pool[j]);
                    let imp = || Formula::imp(p.clone(), q.clone());
                    let found = match rule {
                        Rule::ModusPonens => a.check(
                            |w| (!x[w] | y[w]) & x[w] & !y[w],
                            || vec![Judgement::bare(imp()), Judgement::bare(p.clone())],
                            || Judgement::bare(q.clone()),
                            false,
                        ),
                        Rule::ModusTollens => a.check(
                            |w| (!x[w] | y[w]) & !y[w] & x[w],
                            || vec![Judgement::bare(imp()), Judgement::bare(Formula::not(q.clone()))],
                            || Judgement::bare(Formula::not(p.clone())),
                            false,
                        ),
                        Rule::AndIntro => a.check(
                            |w| x[w] & y[w] & !(x[w] & y[w]),
                            || vec![Judgement::bare(p.clone()), Judgement::bare(q.clone())],
                            || Judgement::bare(Formula::and(p.clone(), q.clone())),
                            false,
                        ),
                        Rule::IffIntro => a.check(
                            |w| (!x[w] | y[w]) & (!y[w] | x[w]) & (x[w] ^ y[w]),
                            || {
                                vec![
                                    Judgement::bare(imp()),
                                    Judgement::bare(Formula::imp(q.clone(), p.clone())),
                                ]
                            },
                            || Judgement::bare(Formula::iff(p.clone(), q.clone())),
                            false,
                        ),
                        Rule::ConditionalProof => a.check(
                            |w| (!x[w] | y[w]) & !(!x[w] | y[w]),
                            || vec![Judgement::under(vec![p.clone()], q.clone())],
                            || Judgement::bare(imp()),
                            false,
                        ),
                        _ => {
                            // RAA: from `p |- q & ~q` infer `~p`.
                            a.check(
                                |w| (!x[w] | (y[w] & !y[w])) & x[w],
                                || {
                                    vec![Judgement::under(
                                        vec![p.clone()],
                                        Formula::and(q.clone(), Formula::not(q.clone())),
                                    )]
                                },
                                || Judgement::bare(Formula::not(p.clone())),
                                false,
                            )
                        }
                    };
                    stop_if!(found);
                }
            }
        }
        Rule::DoubleNegation => {
            for p in &pool {
                let dn = Formula::not(Formula::not(p.clone()));
                stop_if!(a.check_formulas(std::slice::from_ref(&dn), p)?);
                stop_if!(a.check_formulas(std::slice::from_ref(p), &dn)?);
            }
        }
        Rule::AndElim | Rule::OrIntro | Rule::IffElim => {
            for i in 0..n {
                for j in 0..n {
                    let (p, q) = (&pool[i], &pool[j]);
                    let steps: Vec<(Formula, Formula)> = match rule {
                        Rule::AndElim => {
                            let c = Formula::and(p.clone(), q.clone());
                            vec![(c.clone(), p.clone()), (c, q.clone())]
                        }
                        Rule::OrIntro => {
                            let d = Formula::or(p.clone(), q.clone());
                            vec![(p.clone(), d.clone()), (q.clone(), d)]
                        }
                        _ => {
                            let e = Formula::iff(p.clone(), q.clone());
                            vec![
                                (e.clone(), Formula::imp(p.clone(), q.clone())),
                                (e, Formula::imp(q.clone(), p.clone())),
                            ]
                        }
                    };
                    for (premise, conclusion) in steps {
                        stop_if!(a.check_formulas(&[premise], &conclusion)?);
                    }
                }
            }
        }
        Rule::OrElim => {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let (x, y, z) = (&pb[i], &pb[j], &pb[k]);
                        let (p, q, r) = (&pool[i], &pool[j], &pool[k]);
                        stop_if!(a.check(
                            |w| (x[w] | y[w]) & (!x[w] | z[w]) & (!y[w] | z[w]) & !z[w],
                            || {
                                vec![
                                    Judgement::bare(Formula::or(p.clone(), q.clone())),
                                    Judgement::under(vec![p.clone()], r.clone()),
                                    Judgement::under(vec![q.clone()], r.clone()),
                                ]
                            },
                            || Judgement::bare(r.clone()),
                            false,
                        ));
                    }
                }
            }
        }
        Rule::UniversalElim | Rule::ExistentialIntro => {
            for phi in &bodies {
                let general = if rule == Rule::UniversalElim {
                    Formula::forall(VAR, phi.clone())
                } else {
                    Formula::exists(VAR, phi.clone())
                };
                for t in &names {
                    let instance = instantiate(&general, &name_term(t)).expect("quantified");
                    let found = if rule == Rule::UniversalElim {
                        a.check_formulas(std::slice::from_ref(&general), &instance)?
                    } else {
                        a.check_formulas(std::slice::from_ref(&instance), &general)?
                    };
                    stop_if!(found);
                }
            }
        }
        Rule::UniversalIntro => {
            let contexts: Vec<Option<usize>> = std::iter::once(None).chain((0..n).map(Some)).collect();
            for phi in &bodies {
                let general = Formula::forall(VAR, phi.clone());
                let instance = instantiate(&general, &name_term(eigen)).expect("quantified");
                let (all_c, _) = a.u.eigen_bits(&instance)?;
                let gen = a.u.bits(&general)?;
                for ctx in &contexts {
                    let hyps: Vec<Formula> = ctx.iter().map(|&i| pool[i].clone()).collect();
                    let g: Vec<u64> = match ctx {
                        Some(i) => pb[*i].to_vec(),
                        None => vec![!0; a.u.words],
                    };
                    stop_if!(a.check(
                        |w| (!g[w] | all_c[w]) & g[w] & !gen[w],
                        || vec![Judgement::under(hyps.clone(), instance.clone())],
                        || Judgement::under(hyps.clone(), general.clone()),
                        true,
                    ));
                }
            }
        }
        Rule::ExistentialElim => {
            for phi in &bodies {
                let general = Formula::exists(VAR, phi.clone());
                let instance = instantiate(&general, &name_term(eigen)).expect("quantified");
                let (_, some_c) = a.u.eigen_bits(&instance)?;
                let e = a.u.bits(&general)?;
                for (psi, y) in pool.iter().zip(&pb) {
                    stop_if!(a.check(
                        |w| e[w] & (!some_c[w] | y[w]) & !y[w],
                        || {
                            vec![
                                Judgement::bare(general.clone()),
                                Judgement::under(vec![instance.clone()], psi.clone()),
                            ]
                        },
                        || Judgement::bare(psi.clone()),
                        true,
                    ));
                }
            }
        }
        Rule::QuantifierNegation => {
            for phi in &bodies {
                let neg = Formula::not(phi.clone());
                let pairs = [
                    (
                        Formula::not(Formula::forall(VAR, phi.clone())),
                        Formula::exists(VAR, neg.clone()),
                    ),
                    (
                        Formula::not(Formula::exists(VAR, phi.clone())),
                        Formula::forall(VAR, neg.clone()),
                    ),
                ];
                for (l, r) in pairs {
                    stop_if!(a.check_formulas(std::slice::from_ref(&l), &r)?);
                    stop_if!(a.check_formulas(std::slice::from_ref(&r), &l)?);
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn propositional_rules_are_sound_at_size_one() {
        for rule in [Rule::ModusPonens, Rule::AndElim, Rule::QuantifierNegation, Rule::IdentityElim] {
            let r = audit_rule(rule, &Bounds::new(1), Profile::Total).unwrap();
            assert_eq!(r.status, AuditStatus::SoundUpToBound, "{rule}");
            assert!(r.instances_checked > 0);
        }
    }

    #[test]
    fn identity_intro_schema_fails_with_null_elements() {
        let r = audit_rule(Rule::IdentityIntro, &Bounds::new(1), Profile::Total).unwrap();
        assert_eq!(r.status, AuditStatus::Counterexample);
        let w = r.witness.unwrap();
        assert!(w.premises.is_empty());
        assert!(w.reproduces(Profile::Total).unwrap());
    }

    #[test]
    fn partial_profile_breaks_quantifier_rules() {
        for rule in [Rule::ExistentialIntro, Rule::UniversalElim] {
            let r = audit_rule(rule, &Bounds::new(1), Profile::Partial).unwrap();
            assert_eq!(r.status, AuditStatus::Counterexample, "{rule}");
            assert!(r.witness.unwrap().reproduces(Profile::Partial).unwrap());
        }
    }

    #[test]
    fn eigen_judgements_quantify_over_the_eigen_name() {
        let m = Model::new(2)
            .with_name("a", Some(0))
            .with_predicate("F", crate::semantics::Extension::with_tuples(1, [vec![0]]))
            .reflexive();
        let fc = Formula::pred("F", vec![Term::name("c")]);
        let j = Judgement::bare(fc);
        assert!(!j.holds(&m, Profile::Total, Some("c")).unwrap());
        let fa = Judgement::bare(Formula::pred("F", vec![Term::name("a")]));
        assert!(fa.holds(&m, Profile::Total, Some("c")).unwrap());
    }
}
