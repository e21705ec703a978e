use std::path::Path;
use std::sync::OnceLock;

use openfol::kernel::{check_proof, Mode};
use openfol::search::{enumerate_models, find_countermodel, Bounds, SearchStatus};
use openfol::semantics::{eval_formula, validate_model, Assignment, Model, Profile};
use openfol::syntax::{
    format_formula, instantiate, is_closed, names_in, parse_formula, parse_proof_script, signature_of,
    AssumptionSet, Formula, Signature, Term,
};
use proptest::prelude::*;

const NAMES: [&str; 3] = ["a", "b", "c"];
const VARS: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
const PREDICATES: [(&str, usize); 3] = [("Q", 0), ("P", 1), ("R", 2)];

/// Formula skeletons; term slots index into the names followed by the
/// variables in scope, so every variable use is bound and none is shadowed.
#[derive(Clone, Debug)]
enum Shape {
    Eq(usize, usize),
    Pred(usize, usize, usize),
    Not(Box<Shape>),
    Bin(u8, Box<Shape>, Box<Shape>),
    Quant(bool, Box<Shape>),
}

fn build(shape: &Shape, bound: &mut Vec<&'static str>) -> Formula {
    let term = |i: usize, bound: &Vec<&'static str>| {
        let k = i % (NAMES.len() + bound.len());
        if k < NAMES.len() {
            Term::name(NAMES[k])
        } else {
            Term::var(bound[k - NAMES.len()])
        }
    };
    match shape {
        Shape::Eq(l, r) => Formula::eq(term(*l, bound), term(*r, bound)),
        Shape::Pred(p, s, t) => {
            let (symbol, arity) = PREDICATES[*p % PREDICATES.len()];
            let args = [term(*s, bound), term(*t, bound)];
            Formula::pred(symbol, args[..arity].to_vec())
        }
        Shape::Not(inner) => Formula::not(build(inner, bound)),
        Shape::Bin(op, l, r) => {
            let (l, r) = (build(l, bound), build(r, bound));
            match op % 4 {
                0 => Formula::and(l, r),
                1 => Formula::or(l, r),
                2 => Formula::imp(l, r),
                _ => Formula::iff(l, r),
            }
        }
        Shape::Quant(universal, body) => {
            let var = VARS[bound.len()];
            bound.push(var);
            let body = build(body, bound);
            bound.pop();
            if *universal {
                Formula::forall(var, body)
            } else {
                Formula::exists(var, body)
            }
        }
    }
}

/// Shapes of height at most `levels + 1`.
fn shape(levels: u32) -> impl Strategy<Value = Shape> {
    let leaf = prop_oneof![
        (0..9usize, 0..9usize).prop_map(|(l, r)| Shape::Eq(l, r)),
        (0..3usize, 0..9usize, 0..9usize).prop_map(|(p, s, t)| Shape::Pred(p, s, t)),
    ];
    leaf.prop_recursive(levels, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|s| Shape::Not(Box::new(s))),
            (0..4u8, inner.clone(), inner.clone()).prop_map(|(op, l, r)| Shape::Bin(op, Box::new(l), Box::new(r))),
            (any::<bool>(), inner).prop_map(|(u, s)| Shape::Quant(u, Box::new(s))),
        ]
    })
}

fn closed_formula(levels: u32) -> impl Strategy<Value = Formula> {
    shape(levels).prop_map(|s| build(&s, &mut Vec::new()))
}

/// A closed quantified formula and its body.
fn quantified() -> impl Strategy<Value = Formula> {
    (any::<bool>(), shape(3)).prop_map(|(u, s)| build(&Shape::Quant(u, Box::new(s)), &mut Vec::new()))
}

fn vocabulary() -> Signature {
    let mut sig = Signature::new().with_names(NAMES);
    for (p, n) in PREDICATES {
        sig = sig.with_predicate(p, n);
    }
    sig
}

/// Every model of the fixed vocabulary up to size 2, per profile.
fn models(p: Profile) -> &'static [Model] {
    static CACHE: OnceLock<Vec<Vec<Model>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        Profile::ALL
            .iter()
            .map(|&p| enumerate_models(&vocabulary(), &Bounds::new(2), p).unwrap().collect())
            .collect()
    });
    &all[Profile::ALL.iter().position(|&q| q == p).unwrap()]
}

fn holds(m: &Model, f: &Formula, p: Profile) -> bool {
    eval_formula(m, &Assignment::new(), f, p).unwrap()
}

fn profile() -> impl Strategy<Value = Profile> {
    prop::sample::select(Profile::ALL.to_vec())
}

proptest! {
    #[test]
    fn printing_round_trips(f in closed_formula(5)) {
        prop_assert!(f.depth() <= 6);
        let text = format_formula(&f);
        let back = parse_formula(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(format_formula(&back), text);
    }

    #[test]
    fn signature_survives_printing(f in closed_formula(5)) {
        let back = parse_formula(&f.to_string()).unwrap();
        prop_assert_eq!(signature_of(&back), signature_of(&f));
        prop_assert!(signature_of(&f).is_subset(&vocabulary()));
    }

    #[test]
    fn instantiation_closes_and_adds_one_name(f in quantified(), k in 0..3usize) {
        let t = Term::name(NAMES[k]);
        let (Formula::Forall(_, body) | Formula::Exists(_, body)) = &f else { unreachable!() };
        let inst = instantiate(&f, &t).unwrap();
        prop_assert!(is_closed(&inst));
        prop_assert_eq!(inst.depth(), body.depth());
        let mut allowed = names_in(body);
        allowed.insert(NAMES[k].to_string());
        prop_assert!(names_in(&inst).is_subset(&allowed));
    }

    /// Putting a name for the variable means the same as assigning the
    /// variable the name's denotation.
    #[test]
    fn substitution_lemma(f in quantified(), k in 0..3usize, pick in any::<prop::sample::Index>(), p in profile()) {
        let (Formula::Forall(var, body) | Formula::Exists(var, body)) = &f else { unreachable!() };
        let ms = models(p);
        let m = &ms[pick.index(ms.len())];
        let inst = instantiate(&f, &Term::name(NAMES[k])).unwrap();
        if let Some(d) = m.names[NAMES[k]] {
            let mut a = Assignment::new();
            a.insert(var.clone(), d);
            prop_assert_eq!(holds(m, &inst, p), eval_formula(m, &a, body, p).unwrap());
        }
    }

    #[test]
    fn bivalence(f in closed_formula(4), pick in any::<prop::sample::Index>(), p in profile()) {
        let ms = models(p);
        let m = &ms[pick.index(ms.len())];
        prop_assert!(validate_model(m, p).is_empty());
        prop_assert_ne!(holds(m, &f, p), holds(m, &Formula::not(f.clone()), p));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// An extra premise never turns a valid sequent invalid.
    #[test]
    fn semantic_thinning(premise in closed_formula(2), extra in closed_formula(2), conclusion in closed_formula(2)) {
        let base = openfol::kernel::Sequent::new(vec![premise.clone()], conclusion.clone());
        let thick = openfol::kernel::Sequent::new(vec![premise, extra], conclusion);
        let bounds = Bounds::new(2).with_signature(vocabulary());
        let r = find_countermodel(&base, &bounds, Profile::Total).unwrap();
        if r.status == SearchStatus::ValidUpToBound {
            let r = find_countermodel(&thick, &bounds, Profile::Total).unwrap();
            prop_assert_eq!(r.status, SearchStatus::ValidUpToBound);
        }
    }

    /// A countermodel within bound k is found, unchanged, within k + 1.
    #[test]
    fn search_is_monotone_in_the_bound(conclusion in closed_formula(3), p in profile()) {
        let s = openfol::kernel::Sequent::theorem(conclusion);
        let small = find_countermodel(&s, &Bounds::new(1), p).unwrap();
        let large = find_countermodel(&s, &Bounds::new(2), p).unwrap();
        if small.status == SearchStatus::Countermodel {
            prop_assert_eq!(&large.model, &small.model);
            prop_assert_eq!(large.models_examined, small.models_examined);
        }
        prop_assert_eq!(find_countermodel(&s, &Bounds::new(2), p).unwrap(), large);
    }
}

fn corpus_scripts() -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut out: Vec<(String, String)> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "lfd"))
        .map(|p| (p.display().to_string(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

/// Minimal mode accepts no more than open, and open no more than classical
/// once GA is out of the picture; checked on every prefix of every bundled
/// script.
#[test]
fn mode_monotonicity() {
    for (path, text) in corpus_scripts() {
        let full = parse_proof_script(&text).unwrap();
        for k in 1..=full.lines.len() {
            let mut prefix = full.clone();
            prefix.lines.truncate(k);
            let accepted = |m| check_proof(&prefix, m).accepted;
            if accepted(Mode::Minimal) {
                assert!(accepted(Mode::Open), "{path} prefix {k}");
            }
            let uses_ga = prefix.lines.iter().any(|l| l.justification.rule == openfol::syntax::Rule::GlobalAssumption);
            if accepted(Mode::Open) && !uses_ga {
                assert!(accepted(Mode::Classical), "{path} prefix {k}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Appending `psi` as an assumption and routing the conclusion through
    /// `&I`/`&E` yields the same conclusion with `psi` as an extra premise.
    #[test]
    fn kernel_thinning(psi in closed_formula(2), which in any::<prop::sample::Index>()) {
        let scripts = corpus_scripts();
        let (path, text) = &scripts[which.index(scripts.len())];
        let script = parse_proof_script(text).unwrap();
        for mode in Mode::ALL {
            let Some(base) = check_proof(&script, mode).sequent else { continue };
            let last = script.lines.last().unwrap();
            let n = last.number;
            let set = last.assumptions.union(&AssumptionSet::single(n + 1));
            let phi = &last.formula;
            let extended = format!(
                "{text}\n{} ({}) {psi} A\n{set} ({}) {} {n},{} AndI\n{set} ({}) {phi} {} AndE\n",
                n + 1, n + 1, n + 2, Formula::and(phi.clone(), psi.clone()), n + 1, n + 3, n + 2
            );
            let thick = parse_proof_script(&extended).unwrap();
            let s = check_proof(&thick, mode).sequent;
            prop_assert!(s.is_some(), "{} under {}", path, mode);
            let s = s.unwrap();
            let mut want = base.premises.clone();
            want.push(psi.clone());
            prop_assert_eq!(s.premises, want);
            prop_assert_eq!(&s.conclusion, phi);
            prop_assert_eq!(s.global_identity, base.global_identity);
        }
    }
}

#[test]
fn repeated_checks_agree() {
    for (_, text) in corpus_scripts() {
        let s = parse_proof_script(&text).unwrap();
        for m in Mode::ALL {
            assert_eq!(check_proof(&s, m), check_proof(&s, m));
        }
    }
}
