//! Lemmon-format proof scripts (`.lfd` files).
//!
//! ```text
//! # comments run to end of line
//! pragma mode: open
//! pragma identity: global
//! G   (1) forall x (x = x)          GA
//! G   (2) godzilla = godzilla       1 UE godzilla
//! 3   (3) a = b                     A
//! 3   (4) b = a                     3,3 =E rtl 1
//! ```
//!
//! Each line is `ASSUMPTIONS (N) FORMULA JUSTIFICATION`. The assumption column
//! is `-` or a comma list of line numbers and the marker `G`. The
//! justification is an optional comma list of cited lines, a rule name, and
//! rule-specific extras: a witness name for `UE`/`UI`/`EI`/`EE`, a direction
//! (`ltr`/`rtl`) and occurrence selector (`*` or `1,3`) for `=E`, a side
//! (`left`/`right`) for `OrI`.
//!
//! Assumption sets are recorded exactly as written; the kernel recomputes
//! and compares them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::formula::Formula;
use super::parser::{is_identifier, parse_formula_prefix, Arities, ParseError};
use super::signature::{HasSignature, Signature};
use super::subst::Selector;
use crate::kernel::Mode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Assumption,
    IdentityIntro,
    GlobalAssumption,
    IdentityElim,
    ModusPonens,
    ModusTollens,
    DoubleNegation,
    ConditionalProof,
    AndIntro,
    AndElim,
    OrIntro,
    OrElim,
    ReductioAdAbsurdum,
    IffIntro,
    IffElim,
    UniversalElim,
    UniversalIntro,
    ExistentialIntro,
    ExistentialElim,
    QuantifierNegation,
}

impl Rule {
    pub const ALL: [Rule; 20] = [
        Rule::Assumption,
        Rule::IdentityIntro,
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

    pub fn name(self) -> &'static str {
        match self {
            Rule::Assumption => "A",
            Rule::IdentityIntro => "=I",
            Rule::GlobalAssumption => "GA",
            Rule::IdentityElim => "=E",
            Rule::ModusPonens => "MPP",
            Rule::ModusTollens => "MTT",
            Rule::DoubleNegation => "DN",
            Rule::ConditionalProof => "CP",
            Rule::AndIntro => "AndI",
            Rule::AndElim => "AndE",
            Rule::OrIntro => "OrI",
            Rule::OrElim => "OrE",
            Rule::ReductioAdAbsurdum => "RAA",
            Rule::IffIntro => "IffI",
            Rule::IffElim => "IffE",
            Rule::UniversalElim => "UE",
            Rule::UniversalIntro => "UI",
            Rule::ExistentialIntro => "EI",
            Rule::ExistentialElim => "EE",
            Rule::QuantifierNegation => "QN",
        }
    }

    /// Number of lines a justification with this rule must cite.
    pub fn citation_arity(self) -> usize {
        match self {
            Rule::Assumption | Rule::IdentityIntro | Rule::GlobalAssumption => 0,
            Rule::DoubleNegation
            | Rule::AndElim
            | Rule::OrIntro
            | Rule::UniversalElim
            | Rule::UniversalIntro
            | Rule::ExistentialIntro
            | Rule::QuantifierNegation
            | Rule::IffElim => 1,
            Rule::ModusPonens
            | Rule::ModusTollens
            | Rule::ConditionalProof
            | Rule::AndIntro
            | Rule::ReductioAdAbsurdum
            | Rule::IdentityElim
            | Rule::IffIntro => 2,
            Rule::ExistentialElim => 3,
            Rule::OrElim => 5,
        }
    }

    fn takes_term(self) -> bool {
        matches!(
            self,
            Rule::UniversalElim
                | Rule::UniversalIntro
                | Rule::ExistentialIntro
                | Rule::ExistentialElim
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown rule {0}")]
pub struct UnknownRule(pub String);

impl FromStr for Rule {
    type Err = UnknownRule;

    /// Canonical names plus the usual Lemmon spellings (`&I`, `vE`, `MT`,
    /// `Duality`, ...).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(rule) = Rule::ALL.iter().find(|r| r.name() == s) {
            return Ok(*rule);
        }
        Ok(match s {
            "&I" => Rule::AndIntro,
            "&E" => Rule::AndElim,
            "vI" => Rule::OrIntro,
            "vE" => Rule::OrElim,
            "MP" => Rule::ModusPonens,
            "MT" => Rule::ModusTollens,
            "Duality" => Rule::QuantifierNegation,
            _ => return Err(UnknownRule(s.to_string())),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// From `s = t`, put `t` for `s`.
    LeftToRight,
    /// From `s = t`, put `s` for `t`.
    RightToLeft,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rewrite {
    pub direction: Direction,
    pub selector: Selector,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Justification {
    pub rule: Rule,
    pub cited: Vec<usize>,
    /// Witness or eigen-name for the quantifier rules.
    pub term: Option<String>,
    /// Direction and occurrence selection for `=E`.
    pub rewrite: Option<Rewrite>,
    /// Which disjunct `OrI` introduces, when stated.
    pub side: Option<Side>,
}

impl Justification {
    pub fn new(rule: Rule, cited: Vec<usize>) -> Self {
        Justification {
            rule,
            cited,
            term: None,
            rewrite: None,
            side: None,
        }
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.cited.is_empty() {
            let cited: Vec<String> = self.cited.iter().map(|c| c.to_string()).collect();
            write!(f, "{} ", cited.join(","))?;
        }
        f.write_str(self.rule.name())?;
        if let Some(t) = &self.term {
            write!(f, " {t}")?;
        }
        if let Some(rw) = &self.rewrite {
            let dir = match rw.direction {
                Direction::LeftToRight => "ltr",
                Direction::RightToLeft => "rtl",
            };
            write!(f, " {dir} {}", rw.selector)?;
        }
        match self.side {
            Some(Side::Left) => f.write_str(" left")?,
            Some(Side::Right) => f.write_str(" right")?,
            None => {}
        }
        Ok(())
    }
}

/// Set of assumption lines a formula rests on, plus the global
/// self-identity marker `G`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AssumptionSet {
    pub lines: BTreeSet<usize>,
    pub global: bool,
}

impl AssumptionSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(line: usize) -> Self {
        AssumptionSet {
            lines: BTreeSet::from([line]),
            global: false,
        }
    }

    pub fn global() -> Self {
        AssumptionSet {
            lines: BTreeSet::new(),
            global: true,
        }
    }

    pub fn union(&self, other: &AssumptionSet) -> AssumptionSet {
        AssumptionSet {
            lines: self.lines.union(&other.lines).copied().collect(),
            global: self.global || other.global,
        }
    }

    pub fn without(&self, line: usize) -> AssumptionSet {
        let mut lines = self.lines.clone();
        lines.remove(&line);
        AssumptionSet {
            lines,
            global: self.global,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty() && !self.global
    }
}

impl fmt::Display for AssumptionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        let mut parts: Vec<String> = self.lines.iter().map(|l| l.to_string()).collect();
        if self.global {
            parts.push("G".into());
        }
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub assumptions: AssumptionSet,
    pub number: usize,
    pub formula: Formula,
    pub justification: Justification,
}

impl fmt::Display for ProofLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({}) {}  {}",
            self.assumptions, self.number, self.formula, self.justification
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pragmas {
    pub mode: Option<Mode>,
    pub identity_global: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofScript {
    pub pragmas: Pragmas,
    pub lines: Vec<ProofLine>,
}

impl ProofScript {
    pub fn line(&self, number: usize) -> Option<&ProofLine> {
        number
            .checked_sub(1)
            .and_then(|i| self.lines.get(i))
            .filter(|l| l.number == number)
    }
}

impl fmt::Display for ProofScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(mode) = self.pragmas.mode {
            writeln!(f, "pragma mode: {mode}")?;
        }
        if self.pragmas.identity_global {
            writeln!(f, "pragma identity: global")?;
        }
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl HasSignature for ProofScript {
    fn extend_signature(&self, sig: &mut Signature) {
        for line in &self.lines {
            sig.add_formula(&line.formula);
        }
    }
}

/// Errors from reading a proof script. `line` is the 1-based line of the
/// source text.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("line {line}: {source}")]
    Syntax { line: usize, source: ParseError },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: proof line ({number}) is numbered twice")]
    DuplicateLineNumber { line: usize, number: usize },
    #[error("line {line}: proof line ({number}) expected, found ({found})")]
    Numbering {
        line: usize,
        number: usize,
        found: usize,
    },
    #[error("line {line}: proof line ({number}) cites line {cited}, which does not precede it")]
    ForwardCitation {
        line: usize,
        number: usize,
        cited: usize,
    },
    #[error("line {line}: {message}")]
    Pragma { line: usize, message: String },
    #[error("proof script has no lines")]
    Empty,
}

fn malformed(line: usize, message: impl Into<String>) -> ScriptError {
    ScriptError::Malformed {
        line,
        message: message.into(),
    }
}

/// Parse a `.lfd` proof script.
pub fn parse_proof_script(text: &str) -> Result<ProofScript, ScriptError> {
    let mut pragmas = Pragmas::default();
    let mut saw_mode = false;
    let mut lines: Vec<ProofLine> = Vec::new();
    let mut arities = Arities::new();

    for (idx, raw) in text.lines().enumerate() {
        let src = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        if let Some(rest) = content.strip_prefix("pragma") {
            if !rest.starts_with(char::is_whitespace) {
                return Err(malformed(src, "expected a pragma or a proof line"));
            }
            if !lines.is_empty() {
                return Err(ScriptError::Pragma {
                    line: src,
                    message: "pragmas must precede the first proof line".into(),
                });
            }
            parse_pragma(rest, src, &mut pragmas, &mut saw_mode)?;
            continue;
        }

        let line = parse_line(raw, src, &mut arities)?;
        let expected = lines.len() + 1;
        if lines.iter().any(|l| l.number == line.number) {
            return Err(ScriptError::DuplicateLineNumber {
                line: src,
                number: line.number,
            });
        }
        if line.number != expected {
            return Err(ScriptError::Numbering {
                line: src,
                number: expected,
                found: line.number,
            });
        }
        if let Some(&cited) = line
            .justification
            .cited
            .iter()
            .find(|&&c| c >= line.number)
        {
            return Err(ScriptError::ForwardCitation {
                line: src,
                number: line.number,
                cited,
            });
        }
        lines.push(line);
    }

    if lines.is_empty() {
        return Err(ScriptError::Empty);
    }
    Ok(ProofScript { pragmas, lines })
}

fn parse_pragma(
    rest: &str,
    src: usize,
    pragmas: &mut Pragmas,
    saw_mode: &mut bool,
) -> Result<(), ScriptError> {
    let rest = rest.split('#').next().unwrap_or("").trim();
    let err = |message: String| ScriptError::Pragma { line: src, message };
    let (key, value) = rest
        .split_once(':')
        .ok_or_else(|| err(format!("pragma `{rest}` is not of the form `key: value`")))?;
    let (key, value) = (key.trim(), value.trim());
    match key {
        "mode" => {
            if *saw_mode {
                return Err(err("mode pragma given twice".into()));
            }
            let mode = value
                .parse::<Mode>()
                .map_err(|_| err(format!("unknown mode `{value}`")))?;
            pragmas.mode = Some(mode);
            *saw_mode = true;
        }
        "identity" => {
            if value != "global" {
                return Err(err(format!("unknown identity pragma value `{value}`")));
            }
            if pragmas.identity_global {
                return Err(err("identity pragma given twice".into()));
            }
            pragmas.identity_global = true;
        }
        other => return Err(err(format!("unknown pragma `{other}`"))),
    }
    Ok(())
}

fn parse_line(raw: &str, src: usize, arities: &mut Arities) -> Result<ProofLine, ScriptError> {
    let open = raw
        .find('(')
        .ok_or_else(|| malformed(src, "expected `(N)` line number"))?;
    let assumptions = parse_assumptions(raw[..open].trim(), src)?;

    let close = raw[open..]
        .find(')')
        .map(|i| open + i)
        .ok_or_else(|| malformed(src, "unterminated line number"))?;
    let number: usize = raw[open + 1..close]
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| malformed(src, "line number must be a positive integer"))?;

    let body_start = close + 1;
    let body = &raw[body_start..];
    let (formula, end) = parse_formula_prefix(body, arities).map_err(|e| ScriptError::Syntax {
        line: src,
        source: e.offset(body_start),
    })?;
    let justification = parse_justification(&body[end..], src)?;

    Ok(ProofLine {
        assumptions,
        number,
        formula,
        justification,
    })
}

fn parse_assumptions(text: &str, src: usize) -> Result<AssumptionSet, ScriptError> {
    if text.is_empty() {
        return Err(malformed(src, "missing assumption column (use `-` for none)"));
    }
    if text == "-" {
        return Ok(AssumptionSet::empty());
    }
    let mut set = AssumptionSet::empty();
    for part in text.split(',') {
        let part = part.trim();
        if part == "G" {
            set.global = true;
        } else {
            let n: usize = part
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| malformed(src, format!("bad assumption reference `{part}`")))?;
            set.lines.insert(n);
        }
    }
    Ok(set)
}

fn parse_justification(text: &str, src: usize) -> Result<Justification, ScriptError> {
    let text = text.split('#').next().unwrap_or("").trim();
    let citation_len = text
        .find(|c: char| !(c.is_ascii_digit() || c == ',' || c.is_whitespace()))
        .unwrap_or(text.len());
    let (citation_text, rest) = text.split_at(citation_len);
    let mut cited = Vec::new();
    for part in citation_text.split(|c: char| c == ',' || c.is_whitespace()) {
        if part.is_empty() {
            continue;
        }
        let n: usize = part
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| malformed(src, format!("bad citation `{part}`")))?;
        cited.push(n);
    }

    let mut words = rest.split_whitespace();
    let rule_word = words
        .next()
        .ok_or_else(|| malformed(src, "missing justification"))?;
    let rule: Rule = rule_word
        .parse()
        .map_err(|e: UnknownRule| malformed(src, e.to_string()))?;
    let extras: Vec<&str> = words.collect();
    let mut just = Justification::new(rule, cited);

    if rule.takes_term() {
        match extras.as_slice() {
            [] => {}
            [t] if is_identifier(t) => just.term = Some(t.to_string()),
            _ => {
                return Err(malformed(
                    src,
                    format!("{rule} takes at most one name, found `{}`", extras.join(" ")),
                ))
            }
        }
    } else if rule == Rule::IdentityElim {
        let (dir, sel) = extras
            .split_first()
            .ok_or_else(|| malformed(src, "=E needs a direction (ltr|rtl) and a selector"))?;
        let direction = match *dir {
            "ltr" => Direction::LeftToRight,
            "rtl" => Direction::RightToLeft,
            other => return Err(malformed(src, format!("bad =E direction `{other}`"))),
        };
        let sel_text: String = sel.concat();
        let selector = parse_selector(&sel_text)
            .ok_or_else(|| malformed(src, format!("bad =E occurrence selector `{sel_text}`")))?;
        just.rewrite = Some(Rewrite {
            direction,
            selector,
        });
    } else if rule == Rule::OrIntro {
        match extras.as_slice() {
            [] => {}
            ["left"] => just.side = Some(Side::Left),
            ["right"] => just.side = Some(Side::Right),
            _ => return Err(malformed(src, format!("bad OrI side `{}`", extras.join(" ")))),
        }
    } else if !extras.is_empty() {
        return Err(malformed(
            src,
            format!("unexpected `{}` after {rule}", extras.join(" ")),
        ));
    }
    Ok(just)
}

fn parse_selector(text: &str) -> Option<Selector> {
    if text == "*" {
        return Some(Selector::All);
    }
    let mut set = BTreeSet::new();
    for part in text.split(',') {
        set.insert(part.trim().parse::<usize>().ok().filter(|&n| n > 0)?);
    }
    Some(Selector::Indices(set))
}
