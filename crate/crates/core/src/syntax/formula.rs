use std::fmt;

/// A term: either an individual name or a variable bound by an enclosing
/// quantifier. Both are spelled as lowercase identifiers; the parser decides
/// which one an identifier is from its binding context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Name(String),
    Var(String),
}

impl Term {
    pub fn name(id: impl Into<String>) -> Self {
        Term::Name(id.into())
    }

    pub fn var(id: impl Into<String>) -> Self {
        Term::Var(id.into())
    }

    pub fn ident(&self) -> &str {
        match self {
            Term::Name(id) | Term::Var(id) => id,
        }
    }

    pub fn is_name(&self) -> bool {
        matches!(self, Term::Name(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.ident())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    /// Predicate application; an empty argument list is a sentence letter.
    Pred(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn pred(symbol: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Pred(symbol.into(), args)
    }

    pub fn letter(symbol: impl Into<String>) -> Self {
        Formula::Pred(symbol.into(), Vec::new())
    }

    pub fn eq(left: Term, right: Term) -> Self {
        Formula::Eq(left, right)
    }

    /// `a != b` is only surface syntax for this.
    pub fn neq(left: Term, right: Term) -> Self {
        Formula::not(Formula::Eq(left, right))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Formula) -> Self {
        Formula::Not(Box::new(inner))
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Formula, right: Formula) -> Self {
        Formula::Or(Box::new(left), Box::new(right))
    }

    pub fn imp(left: Formula, right: Formula) -> Self {
        Formula::Imp(Box::new(left), Box::new(right))
    }

    pub fn iff(left: Formula, right: Formula) -> Self {
        Formula::Iff(Box::new(left), Box::new(right))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(var.into(), Box::new(body))
    }

    /// `forall x (x = x)`, the universal self-identity formula.
    pub fn universal_self_identity() -> Self {
        Formula::forall("x", Formula::eq(Term::var("x"), Term::var("x")))
    }

    /// `t = t` for a name `t`.
    pub fn self_identity(name: &str) -> Self {
        Formula::eq(Term::name(name), Term::name(name))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Pred(..) | Formula::Eq(..))
    }

    pub fn is_binary(&self) -> bool {
        matches!(
            self,
            Formula::And(..) | Formula::Or(..) | Formula::Imp(..) | Formula::Iff(..)
        )
    }

    /// Height of the syntax tree; atoms have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Pred(..) | Formula::Eq(..) => 1,
            Formula::Not(inner) | Formula::Forall(_, inner) | Formula::Exists(_, inner) => {
                1 + inner.depth()
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) | Formula::Iff(l, r) => {
                1 + l.depth().max(r.depth())
            }
        }
    }

    /// Whether `self` is `forall v (v = v)` for some variable `v`.
    pub fn is_universal_self_identity(&self) -> bool {
        match self {
            Formula::Forall(v, body) => match body.as_ref() {
                Formula::Eq(Term::Var(l), Term::Var(r)) => l == v && r == v,
                _ => false,
            },
            _ => false,
        }
    }

    /// Whether `self` is `t = t` for a name `t`.
    pub fn is_name_self_identity(&self) -> bool {
        matches!(self, Formula::Eq(Term::Name(l), Term::Name(r)) if l == r)
    }
}

/// Canonical rendering: every binary node is parenthesized, every operand of
/// `~` or a quantifier is parenthesized, atoms inside binary nodes are bare.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Pred(symbol, args) => {
                f.write_str(symbol)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, arg) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{arg}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
            Formula::Eq(l, r) => write!(f, "{l} = {r}"),
            Formula::Not(inner) => {
                f.write_str("~")?;
                write_scoped(f, inner)
            }
            Formula::And(l, r) => write!(f, "({l} & {r})"),
            Formula::Or(l, r) => write!(f, "({l} | {r})"),
            Formula::Imp(l, r) => write!(f, "({l} -> {r})"),
            Formula::Iff(l, r) => write!(f, "({l} <-> {r})"),
            Formula::Forall(v, body) => {
                write!(f, "forall {v} ")?;
                write_scoped(f, body)
            }
            Formula::Exists(v, body) => {
                write!(f, "exists {v} ")?;
                write_scoped(f, body)
            }
        }
    }
}

fn write_scoped(f: &mut fmt::Formatter<'_>, inner: &Formula) -> fmt::Result {
    if inner.is_binary() {
        write!(f, "{inner}")
    } else {
        write!(f, "({inner})")
    }
}

/// Render a formula in canonical form.
pub fn format_formula(formula: &Formula) -> String {
    formula.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(id: &str) -> Term {
        Term::name(id)
    }

    #[test]
    fn canonical_forms() {
        let refl = Formula::forall("x", Formula::eq(Term::var("x"), Term::var("x")));
        assert_eq!(format_formula(&refl), "forall x (x = x)");
        assert_eq!(format_formula(&Formula::neq(n("a"), n("a"))), "~(a = a)");
        let fa = Formula::pred("F", vec![n("a")]);
        let lem = Formula::or(fa.clone(), Formula::not(fa));
        assert_eq!(format_formula(&lem), "(F(a) | ~(F(a)))");
    }

    #[test]
    fn nested_unary_and_quantified_operands() {
        let cgc = Formula::imp(
            Formula::universal_self_identity(),
            Formula::exists("x", Formula::eq(Term::var("x"), n("godzilla"))),
        );
        assert_eq!(
            cgc.to_string(),
            "(forall x (x = x) -> exists x (x = godzilla))"
        );
        let dn = Formula::not(Formula::not(Formula::letter("Q")));
        assert_eq!(dn.to_string(), "~(~(Q))");
        let g = Formula::pred("R", vec![n("a"), n("b")]);
        assert_eq!(Formula::not(Formula::and(g.clone(), g)).to_string(), "~(R(a, b) & R(a, b))");
    }

    #[test]
    fn depth_counts_atoms_as_one() {
        let fa = Formula::pred("F", vec![n("a")]);
        assert_eq!(fa.depth(), 1);
        assert_eq!(Formula::not(fa.clone()).depth(), 2);
        assert_eq!(Formula::and(Formula::not(fa.clone()), fa).depth(), 3);
    }
}
