//! Regular expressions over declared letters.
//!
//! ```text
//! expr   := alt ('&' alt)*
//! alt    := concat ('|' concat)*
//! concat := post*
//! post   := atom ('*' | '+' | '?')*
//! atom   := letter | '.' | side '/' side | '(' expr ')' | '(' ')'
//! ```
//!
//! Letters are matched longest-first against the alphabet, so `00^1` reads as
//! `0`, `0^`, `1` when `0^` is declared. An empty body denotes the empty set.

use std::sync::Arc;

use crate::automata::{self, Alphabet, EpsNfa, Nfa, Symbol};

use super::ModelError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Re {
    Eps,
    /// Any letter of the current alphabet.
    Any,
    Letter(Symbol),
    /// Pair letter; `None` is a wildcard side.
    Pair(Option<Symbol>, Option<Symbol>),
    Cat(Vec<Re>),
    Alt(Vec<Re>),
    And(Vec<Re>),
    Star(Box<Re>),
    Plus(Box<Re>),
    Opt(Box<Re>),
}

/// Position of a byte offset as 1-based line and column.
pub(crate) fn line_col(src: &str, off: usize) -> (usize, usize) {
    let before = &src[..off.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

pub(crate) struct Parser<'a> {
    src: &'a str,
    pos: usize,
    end: usize,
    alphabet: &'a Alphabet,
    relation: bool,
    field: &'a str,
}

const OPS: &[char] = &['(', ')', '|', '&', '*', '+', '?', '/', '.'];

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str, start: usize, end: usize, alphabet: &'a Alphabet, relation: bool, field: &'a str) -> Self {
        Parser { src, pos: start, end, alphabet, relation, field }
    }

    fn syntax(&self, at: usize, msg: impl Into<String>) -> ModelError {
        let (line, col) = line_col(self.src, at);
        ModelError::Syntax { line, col, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        loop {
            let rest = &self.src[self.pos..self.end];
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                let nl = trimmed.find('\n').unwrap_or(trimmed.len());
                self.pos += nl;
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..self.end].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    /// Parse the whole range; `None` for an empty body.
    pub(crate) fn parse(mut self) -> Result<Option<Re>, ModelError> {
        if self.peek().is_none() {
            return Ok(None);
        }
        let re = self.expr()?;
        if let Some(c) = self.peek() {
            return Err(self.syntax(self.pos, format!("unexpected `{c}`")));
        }
        Ok(Some(re))
    }

    fn expr(&mut self) -> Result<Re, ModelError> {
        let mut parts = vec![self.alt()?];
        while self.eat('&') {
            parts.push(self.alt()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Re::And(parts) })
    }

    fn alt(&mut self) -> Result<Re, ModelError> {
        let mut parts = vec![self.concat()?];
        while self.eat('|') {
            parts.push(self.concat()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Re::Alt(parts) })
    }

    fn concat(&mut self) -> Result<Re, ModelError> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            if c == ')' || c == '|' || c == '&' {
                break;
            }
            parts.push(self.post()?);
        }
        match parts.len() {
            0 => Err(self.syntax(self.pos, "expected an expression")),
            1 => Ok(parts.pop().unwrap()),
            _ => Ok(Re::Cat(parts)),
        }
    }

    fn post(&mut self) -> Result<Re, ModelError> {
        let mut re = self.atom()?;
        loop {
            if self.eat('*') {
                re = Re::Star(Box::new(re));
            } else if self.eat('+') {
                re = Re::Plus(Box::new(re));
            } else if self.eat('?') {
                re = Re::Opt(Box::new(re));
            } else {
                return Ok(re);
            }
        }
    }

    fn side(&mut self) -> Result<(usize, Option<Symbol>), ModelError> {
        self.skip_ws();
        let at = self.pos;
        if self.eat('.') {
            return Ok((at, None));
        }
        let rest = &self.src[self.pos..self.end];
        match self.alphabet.longest_prefix(rest) {
            Some((s, len)) => {
                self.pos += len;
                Ok((at, Some(s)))
            }
            None => {
                let found: String = rest.chars().take_while(|c| !c.is_whitespace() && !OPS.contains(c)).collect();
                if found.is_empty() {
                    let c = rest.chars().next().map(String::from).unwrap_or_default();
                    return Err(self.syntax(at, format!("unexpected `{c}`")));
                }
                let (line, col) = line_col(self.src, at);
                Err(ModelError::UnknownLetter { line, col, letter: found })
            }
        }
    }

    fn atom(&mut self) -> Result<Re, ModelError> {
        let open = self.pos;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                if self.eat(')') {
                    return Ok(Re::Eps);
                }
                let open = self.pos - 1;
                let re = match self.expr() {
                    Err(_) if self.peek().is_none() => return Err(self.syntax(open, "unclosed parenthesis")),
                    r => r?,
                };
                if !self.eat(')') {
                    return Err(self.syntax(open, "unclosed parenthesis"));
                }
                Ok(re)
            }
            Some(c) if c != '.' && OPS.contains(&c) => Err(self.syntax(open.max(self.pos), format!("unexpected `{c}`"))),
            Some(_) => {
                let (at, first) = self.side()?;
                if self.eat('/') {
                    let (_, second) = self.side()?;
                    if !self.relation {
                        let (line, col) = line_col(self.src, at);
                        return Err(ModelError::PairInSet { line, col, field: self.field.to_string() });
                    }
                    Ok(Re::Pair(first, second))
                } else if self.relation {
                    if first.is_none() {
                        return Ok(Re::Pair(None, None));
                    }
                    let (line, col) = line_col(self.src, at);
                    Err(ModelError::LetterInRelation { line, col, field: self.field.to_string() })
                } else {
                    Ok(first.map_or(Re::Any, Re::Letter))
                }
            }
            None => Err(self.syntax(self.pos, "unexpected end of expression")),
        }
    }
}

fn letters_nfa(alphabet: &Arc<Alphabet>, letters: impl IntoIterator<Item = Symbol>) -> Nfa {
    let t: Vec<_> = letters.into_iter().map(|a| (0, a, 1)).collect();
    Nfa::from_parts(alphabet.clone(), 2, [0], t, [1]).expect("well-formed")
}

/// Compile over `alphabet` (the pair alphabet for relation fields).
pub(crate) fn compile(re: &Re, alphabet: &Arc<Alphabet>) -> Result<Nfa, ModelError> {
    let b = alphabet.base_len() as Symbol;
    Ok(match re {
        Re::Eps => Nfa::from_parts(alphabet.clone(), 1, [0], [], [0]).expect("well-formed"),
        Re::Any => letters_nfa(alphabet, alphabet.symbols()),
        Re::Letter(a) => letters_nfa(alphabet, [*a]),
        Re::Pair(x, y) => {
            let xs: Vec<Symbol> = x.map_or_else(|| (0..b).collect(), |a| vec![a]);
            let ys: Vec<Symbol> = y.map_or_else(|| (0..b).collect(), |a| vec![a]);
            letters_nfa(alphabet, xs.iter().flat_map(|&p| ys.iter().map(move |&q| p * b + q)))
        }
        Re::Cat(parts) => {
            let mut acc = compile(&parts[0], alphabet)?;
            for p in &parts[1..] {
                acc = automata::concat(&acc, &compile(p, alphabet)?)?;
            }
            acc
        }
        Re::Alt(parts) => {
            let ns = parts.iter().map(|p| compile(p, alphabet)).collect::<Result<Vec<_>, _>>()?;
            automata::union_all(&ns)?
        }
        Re::And(parts) => {
            let mut acc = automata::canonical(&compile(&parts[0], alphabet)?)?.to_nfa();
            for p in &parts[1..] {
                let next = automata::intersect(&acc, &compile(p, alphabet)?)?;
                acc = automata::canonical(&next)?.to_nfa();
            }
            acc
        }
        Re::Star(r) => star(&compile(r, alphabet)?),
        Re::Plus(r) => {
            let n = compile(r, alphabet)?;
            automata::concat(&n, &star(&n))?
        }
        Re::Opt(r) => automata::union(&compile(r, alphabet)?, &compile(&Re::Eps, alphabet)?)?,
    })
}

fn star(n: &Nfa) -> Nfa {
    let mut e = EpsNfa::new(n.alphabet().clone());
    let s = e.add_state();
    e.set_accepting(s, true);
    e.set_initial(s);
    let off = e.embed(n);
    for &i in n.initial() {
        e.add_eps(s, i + off);
    }
    for q in 0..n.num_states() as u32 {
        if n.is_accepting(q) {
            e.add_eps(q + off, s);
        }
    }
    e.to_nfa()
}
