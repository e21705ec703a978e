//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "forall" VAR unary | "exists" VAR unary | atom
//! atom    := "(" formula ")" | PRED "(" term ("," term)* ")" | PRED | term ("=" | "!=") term
//! ```
//!
//! A quantifier scopes over the following unary formula only, so
//! `forall x (x = x) -> exists x (x = a)` is an implication. `#` starts a
//! comment running to the end of the line.

use std::collections::BTreeMap;

use thiserror::Error;

use super::formula::{Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("predicate {symbol} used with arity {first} and with arity {second}")]
    Arity {
        symbol: String,
        first: usize,
        second: usize,
    },
    #[error("variable {var} at position {position} is already bound by an enclosing quantifier")]
    Shadowing { position: usize, var: String },
}

impl ParseError {
    fn syntax(position: usize, expected: impl Into<String>) -> Self {
        ParseError::Syntax {
            position,
            expected: expected.into(),
        }
    }

    /// Shift byte positions by `offset`; used when a formula is embedded in a
    /// larger line of text.
    pub(crate) fn offset(self, offset: usize) -> Self {
        match self {
            ParseError::Syntax { position, expected } => ParseError::Syntax {
                position: position + offset,
                expected,
            },
            ParseError::Shadowing { position, var } => ParseError::Shadowing {
                position: position + offset,
                var,
            },
            other => other,
        }
    }
}

/// Predicate arities seen so far. Shared across the lines of a script so
/// that a symbol keeps one arity throughout.
pub type Arities = BTreeMap<String, usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    Equals,
    NotEquals,
    Lower(String),
    Upper(String),
    /// Anything the formula grammar has no use for (digits, `*`, ...). Only
    /// an error if the parser actually needs to consume it.
    Other,
    End,
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Comma => "','".into(),
        Tok::Tilde => "'~'".into(),
        Tok::Amp => "'&'".into(),
        Tok::Bar => "'|'".into(),
        Tok::Arrow => "'->'".into(),
        Tok::DoubleArrow => "'<->'".into(),
        Tok::Equals => "'='".into(),
        Tok::NotEquals => "'!='".into(),
        Tok::Lower(s) | Tok::Upper(s) => format!("'{s}'"),
        Tok::Other => "unexpected character".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if !c.is_ascii() {
            return Err(ParseError::syntax(i, "ASCII input"));
        }
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            b',' => {
                out.push((Tok::Comma, i));
                i += 1;
            }
            b'~' => {
                out.push((Tok::Tilde, i));
                i += 1;
            }
            b'&' => {
                out.push((Tok::Amp, i));
                i += 1;
            }
            b'|' => {
                out.push((Tok::Bar, i));
                i += 1;
            }
            b'=' => {
                out.push((Tok::Equals, i));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((Tok::Arrow, i));
                i += 2;
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                out.push((Tok::DoubleArrow, i));
                i += 3;
            }
            b'!' if bytes.get(i + 1) == Some(&b'=') => {
                out.push((Tok::NotEquals, i));
                i += 2;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = text[start..i].to_string();
                if c.is_ascii_lowercase() {
                    // Lowercase identifiers may not contain uppercase letters.
                    if let Some(bad) = word.bytes().position(|b| b.is_ascii_uppercase()) {
                        out.push((Tok::Other, start + bad));
                    } else {
                        out.push((Tok::Lower(word), start));
                    }
                } else {
                    out.push((Tok::Upper(word), start));
                }
            }
            _ => {
                out.push((Tok::Other, i));
                i += 1;
            }
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

fn is_keyword(word: &str) -> bool {
    word == "forall" || word == "exists"
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    bound: Vec<String>,
    arities: &'a mut Arities,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.idx].0
    }

    fn pos(&self) -> usize {
        self.toks[self.idx].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.idx].0.clone();
        if tok != Tok::End {
            self.idx += 1;
        }
        tok
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::syntax(
            self.pos(),
            format!("{expected}, found {}", describe(self.peek())),
        )
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.imp()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let right = self.imp()?;
            left = Formula::iff(left, right);
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.imp()?;
            return Ok(Formula::imp(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let right = self.and()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Lower(word) if is_keyword(&word) => {
                self.bump();
                let var_pos = self.pos();
                let var = match self.peek().clone() {
                    Tok::Lower(v) if !is_keyword(&v) => {
                        self.bump();
                        v
                    }
                    _ => return Err(self.error("variable")),
                };
                if self.bound.contains(&var) {
                    return Err(ParseError::Shadowing {
                        position: var_pos,
                        var,
                    });
                }
                self.bound.push(var.clone());
                let body = self.unary();
                self.bound.pop();
                let body = body?;
                Ok(if word == "forall" {
                    Formula::forall(var, body)
                } else {
                    Formula::exists(var, body)
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Upper(symbol) => {
                self.bump();
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    args.push(self.term()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.term()?);
                    }
                    self.expect(Tok::RParen, "',' or ')'")?;
                }
                self.record_arity(&symbol, args.len())?;
                Ok(Formula::Pred(symbol, args))
            }
            Tok::Lower(word) if !is_keyword(&word) => {
                let left = self.term()?;
                match self.peek() {
                    Tok::Equals => {
                        self.bump();
                        let right = self.term()?;
                        Ok(Formula::eq(left, right))
                    }
                    Tok::NotEquals => {
                        self.bump();
                        let right = self.term()?;
                        Ok(Formula::neq(left, right))
                    }
                    _ => Err(self.error("'=' or '!='")),
                }
            }
            _ => Err(self.error("formula")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Lower(word) if !is_keyword(&word) => {
                self.bump();
                if self.bound.contains(&word) {
                    Ok(Term::Var(word))
                } else {
                    Ok(Term::Name(word))
                }
            }
            _ => Err(self.error("term")),
        }
    }

    fn record_arity(&mut self, symbol: &str, arity: usize) -> Result<(), ParseError> {
        match self.arities.get(symbol) {
            Some(&first) if first != arity => Err(ParseError::Arity {
                symbol: symbol.to_string(),
                first,
                second: arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.arities.insert(symbol.to_string(), arity);
                Ok(())
            }
        }
    }
}

/// Parse a complete formula.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut arities = Arities::new();
    parse_formula_with(text, &mut arities)
}

/// Parse a complete formula, checking and extending a shared arity table.
pub fn parse_formula_with(text: &str, arities: &mut Arities) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        idx: 0,
        bound: Vec::new(),
        arities,
    };
    let formula = parser.formula()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error("end of input"));
    }
    Ok(formula)
}

/// Parse the longest formula at the start of `text`; returns the formula and
/// the byte offset where the unconsumed remainder begins.
pub(crate) fn parse_formula_prefix(
    text: &str,
    arities: &mut Arities,
) -> Result<(Formula, usize), ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        idx: 0,
        bound: Vec::new(),
        arities,
    };
    let formula = parser.formula()?;
    Ok((formula, parser.pos()))
}

pub(crate) fn is_identifier(word: &str) -> bool {
    let mut chars = word.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        && !is_keyword(word)
}
