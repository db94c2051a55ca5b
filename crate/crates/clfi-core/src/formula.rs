//! The formula language: AST, parser, canonical printer, the
//! full-inability elimination translation, and extended closure sets.
//!
//! The stored AST has exactly five constructors. Derived connectives
//! (`|`, `->`, `<->`, `Box`) are desugared at parse time and never appear
//! in a [`Formula`] value:
//!
//! * `a | b`   becomes `~(~a & ~b)`
//! * `a -> b`  becomes `~(a & ~b)`
//! * `a <-> b` becomes `~(a & ~b) & ~(b & ~a)`
//! * `Box[C](a)` becomes `~[C](~a)`
//!
//! Formulas are immutable values with structural equality. Coalitions are
//! model-independent at parse time; evaluation checks them against the
//! model's agent count.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::sets::{AgentSet, MAX_AGENTS};

/// A formula over atoms, negation, conjunction, effectivity `[C]`, and
/// full inability `FI[C]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// `[C](phi)`: coalition `C` can enforce `phi`.
    Eff(AgentSet, Box<Formula>),
    /// `FI[C](phi)`: coalition `C` can enforce neither `phi` nor `~phi`.
    Fi(AgentSet, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    // a constructor, not a negation of self; keep the name parallel to
    // the other node builders
    #[allow(clippy::should_implement_trait)]
    pub fn not(sub: Formula) -> Self {
        Formula::Not(Box::new(sub))
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::And(Box::new(left), Box::new(right))
    }

    pub fn eff(coalition: AgentSet, sub: Formula) -> Self {
        Formula::Eff(coalition, Box::new(sub))
    }

    pub fn fi(coalition: AgentSet, sub: Formula) -> Self {
        Formula::Fi(coalition, Box::new(sub))
    }

    /// `or`, `implies`, `iff` build the desugared forms directly, matching
    /// what the parser produces for `|`, `->`, `<->`.
    pub fn or(left: Formula, right: Formula) -> Self {
        Formula::not(Formula::and(Formula::not(left), Formula::not(right)))
    }

    pub fn implies(left: Formula, right: Formula) -> Self {
        Formula::not(Formula::and(left, Formula::not(right)))
    }

    pub fn iff(left: Formula, right: Formula) -> Self {
        Formula::and(
            Formula::implies(left.clone(), right.clone()),
            Formula::implies(right, left),
        )
    }

    /// `Box[C](phi) = ~[C](~phi)`.
    pub fn strategic_box(coalition: AgentSet, sub: Formula) -> Self {
        Formula::not(Formula::eff(coalition, Formula::not(sub)))
    }

    /// Eliminate every `FI` node:
    /// `tr(FI[C](phi)) = ~[C](tr phi) & ~[C](~tr phi)`, homomorphic on the
    /// other four constructors. No double-negation simplification is
    /// performed; the translation is idempotent on its image.
    pub fn translate(&self) -> Formula {
        match self {
            Formula::Atom(p) => Formula::Atom(p.clone()),
            Formula::Not(sub) => Formula::not(sub.translate()),
            Formula::And(l, r) => Formula::and(l.translate(), r.translate()),
            Formula::Eff(c, sub) => Formula::eff(*c, sub.translate()),
            Formula::Fi(c, sub) => {
                let t = sub.translate();
                Formula::and(
                    Formula::not(Formula::eff(*c, t.clone())),
                    Formula::not(Formula::eff(*c, Formula::not(t))),
                )
            }
        }
    }

    /// All subterms of `self` (including `self`), deduplicated.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if !out.insert(self.clone()) {
            return; // shared subterm, already expanded
        }
        match self {
            Formula::Atom(_) => {}
            Formula::Not(sub) | Formula::Eff(_, sub) | Formula::Fi(_, sub) => {
                sub.collect_subformulas(out);
            }
            Formula::And(l, r) => {
                l.collect_subformulas(out);
                r.collect_subformulas(out);
            }
        }
    }

    /// The extended closure: every subformula, its negation, and for each
    /// `FI[C](psi)` the four formulas `[C]psi`, `[C]~psi` and their
    /// negations. Built over the shared-subterm set, so the size is at most
    /// `2 * |subformulas| + 8 * #FI-nodes`.
    pub fn closure_fi(&self) -> BTreeSet<Formula> {
        let subs = self.subformulas();
        let mut out = BTreeSet::new();
        for s in &subs {
            out.insert(s.clone());
            out.insert(Formula::not(s.clone()));
            if let Formula::Fi(c, psi) = s {
                let pos = Formula::eff(*c, (**psi).clone());
                let neg = Formula::eff(*c, Formula::not((**psi).clone()));
                out.insert(Formula::not(pos.clone()));
                out.insert(pos);
                out.insert(Formula::not(neg.clone()));
                out.insert(neg);
            }
        }
        out
    }

    /// Number of `FI` nodes in the subterm set (distinct subterms).
    pub fn fi_node_count(&self) -> usize {
        self.subformulas()
            .iter()
            .filter(|f| matches!(f, Formula::Fi(..)))
            .count()
    }

    pub fn contains_fi(&self) -> bool {
        match self {
            Formula::Atom(_) => false,
            Formula::Fi(..) => true,
            Formula::Not(sub) | Formula::Eff(_, sub) => sub.contains_fi(),
            Formula::And(l, r) => l.contains_fi() || r.contains_fi(),
        }
    }

    /// Atom names appearing in the formula, sorted.
    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Atom(p) => {
                out.insert(p.as_str());
            }
            Formula::Not(sub) | Formula::Eff(_, sub) | Formula::Fi(_, sub) => {
                sub.collect_atoms(out)
            }
            Formula::And(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Largest agent index mentioned in any coalition, if any.
    pub fn max_agent(&self) -> Option<usize> {
        match self {
            Formula::Atom(_) => None,
            Formula::Not(sub) => sub.max_agent(),
            Formula::And(l, r) => l.max_agent().max(r.max_agent()),
            Formula::Eff(c, sub) | Formula::Fi(c, sub) => {
                let own = c.iter().last();
                own.max(sub.max_agent())
            }
        }
    }

    /// True when every coalition fits a model with `num_agents` agents.
    pub fn coalitions_fit(&self, num_agents: usize) -> bool {
        self.max_agent().is_none_or(|m| m < num_agents)
    }
}

/// Canonical fully-parenthesized form. `parse(print(f))` is structurally
/// equal to `f`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p) => write!(f, "{}", p),
            Formula::Not(sub) => write!(f, "(~{})", sub),
            Formula::And(l, r) => write!(f, "({} & {})", l, r),
            Formula::Eff(c, sub) => write!(f, "[{}]({})", c, sub),
            Formula::Fi(c, sub) => write!(f, "FI[{}]({})", c, sub),
        }
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Syntax error with the byte position it occurred at.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError { pos, msg: msg.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Number(usize),
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Iff,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Minus,
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'~' => {
                tokens.push((i, Token::Tilde));
                i += 1;
            }
            b'&' => {
                tokens.push((i, Token::Amp));
                i += 1;
            }
            b'|' => {
                tokens.push((i, Token::Pipe));
                i += 1;
            }
            b'(' => {
                tokens.push((i, Token::LParen));
                i += 1;
            }
            b')' => {
                tokens.push((i, Token::RParen));
                i += 1;
            }
            b'[' => {
                tokens.push((i, Token::LBracket));
                i += 1;
            }
            b']' => {
                tokens.push((i, Token::RBracket));
                i += 1;
            }
            b'{' => {
                tokens.push((i, Token::LBrace));
                i += 1;
            }
            b'}' => {
                tokens.push((i, Token::RBrace));
                i += 1;
            }
            b',' => {
                tokens.push((i, Token::Comma));
                i += 1;
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    tokens.push((i, Token::Arrow));
                    i += 2;
                } else {
                    tokens.push((i, Token::Minus));
                    i += 1;
                }
            }
            b'<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    tokens.push((i, Token::Iff));
                    i += 3;
                } else {
                    return Err(ParseError::new(i, "expected '<->'"));
                }
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &input[start..i];
                let n: usize = text
                    .parse()
                    .map_err(|_| ParseError::new(start, format!("number too large: {}", text)))?;
                tokens.push((start, Token::Number(n)));
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push((start, Token::Ident(input[start..i].to_string())));
            }
            _ => {
                return Err(ParseError::new(
                    i,
                    format!("unexpected character '{}'", input[i..].chars().next().unwrap()),
                ));
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [(usize, Token)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t);
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &Token, what: &str) -> Result<(), ParseError> {
        let pos = self.here();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(ParseError::new(pos, format!("expected {}", what))),
        }
    }

    // <-> is left-associative and binds weakest.
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while self.peek() == Some(&Token::Iff) {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    // -> is right-associative.
    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Token::Arrow) {
            self.bump();
            let rhs = self.implication()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Token::Pipe) {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::Amp) {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.peek() == Some(&Token::Tilde) {
            self.bump();
            let sub = self.unary()?;
            Ok(Formula::not(sub))
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.here();
        match self.peek().cloned() {
            Some(Token::LParen) => {
                self.bump();
                let f = self.formula()?;
                self.expect(&Token::RParen, "')'")?;
                Ok(f)
            }
            Some(Token::LBracket) => {
                let c = self.coalition_brackets()?;
                let sub = self.modal_argument()?;
                Ok(Formula::eff(c, sub))
            }
            Some(Token::Ident(name)) => {
                self.bump();
                // FI and Box are operators only when applied to a coalition;
                // bare they are ordinary atoms.
                if self.peek() == Some(&Token::LBracket) {
                    match name.as_str() {
                        "FI" => {
                            let c = self.coalition_brackets()?;
                            let sub = self.modal_argument()?;
                            return Ok(Formula::fi(c, sub));
                        }
                        "Box" => {
                            let c = self.coalition_brackets()?;
                            let sub = self.modal_argument()?;
                            return Ok(Formula::strategic_box(c, sub));
                        }
                        _ => {
                            return Err(ParseError::new(
                                self.here(),
                                format!("unexpected '[' after atom '{}'", name),
                            ));
                        }
                    }
                }
                Ok(Formula::Atom(name))
            }
            _ => Err(ParseError::new(pos, "expected a formula")),
        }
    }

    fn modal_argument(&mut self) -> Result<Formula, ParseError> {
        self.expect(&Token::LParen, "'(' before modal argument")?;
        let f = self.formula()?;
        self.expect(&Token::RParen, "')' after modal argument")?;
        Ok(f)
    }

    fn coalition_brackets(&mut self) -> Result<AgentSet, ParseError> {
        self.expect(&Token::LBracket, "'['")?;
        self.expect(&Token::LBrace, "'{'")?;
        let mut coalition = AgentSet::EMPTY;
        if self.peek() == Some(&Token::RBrace) {
            self.bump();
        } else {
            loop {
                let pos = self.here();
                match self.bump().cloned() {
                    Some(Token::Number(n)) => {
                        if n >= MAX_AGENTS {
                            return Err(ParseError::new(
                                pos,
                                format!("agent index {} exceeds maximum {}", n, MAX_AGENTS - 1),
                            ));
                        }
                        if coalition.contains(n) {
                            return Err(ParseError::new(
                                pos,
                                format!("duplicate agent index {} in coalition", n),
                            ));
                        }
                        coalition = coalition.insert(n);
                    }
                    Some(Token::Minus) => {
                        return Err(ParseError::new(pos, "negative agent index in coalition"));
                    }
                    _ => return Err(ParseError::new(pos, "expected agent index")),
                }
                match self.bump() {
                    Some(Token::Comma) => continue,
                    Some(Token::RBrace) => break,
                    _ => return Err(ParseError::new(pos, "expected ',' or '}'")),
                }
            }
        }
        self.expect(&Token::RBracket, "']'")?;
        Ok(coalition)
    }
}

/// Parse a formula from the ASCII concrete syntax, desugaring derived
/// connectives.
pub fn parse(input: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(input)?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        end: input.len(),
    };
    let f = parser.formula()?;
    if parser.pos < tokens.len() {
        return Err(ParseError::new(parser.here(), "trailing input"));
    }
    Ok(f)
}
