//! Game models: file format, structural validation and built-in protocols.

pub mod builtin;
mod print;
mod regex;
mod validate;

use std::sync::Arc;

use thiserror::Error;

use crate::automata::{self, Alphabet, AutomataError, Dfa, Nfa, Transducer};

pub use builtin::{builtin, BUILTIN_NAMES};
pub use print::{print_model, to_regex};
pub use validate::{validate, Convention, Report, Violation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown letter {letter:?}")]
    UnknownLetter { line: usize, col: usize, letter: String },
    #[error("{line}:{col}: pair letter in set-valued section `{field}`")]
    PairInSet { line: usize, col: usize, field: String },
    #[error("{line}:{col}: single letter in relation section `{field}`; write a pair `a/b`")]
    LetterInRelation { line: usize, col: usize, field: String },
    #[error("{line}:{col}: invalid letter name {letter:?}")]
    BadLetter { line: usize, col: usize, letter: String },
    #[error("missing section `{0}`")]
    MissingSection(&'static str),
    #[error("{line}:{col}: section `{name}` given twice")]
    DuplicateSection { line: usize, col: usize, name: String },
    #[error("unknown built-in model {0:?}")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

/// A declared symmetry of the arena.
#[derive(Clone, Debug)]
pub enum SymmetryDecl {
    /// Cyclic left shift `u_1 u_2 … u_n ↦ u_2 … u_n u_1`.
    Rotation,
    Transducer(Transducer),
}

/// An arena `⟨S, →1, →2⟩` with initial set `I0` and target set `F`.
#[derive(Clone, Debug)]
pub struct GameInstance {
    pub name: String,
    pub alphabet: Arc<Alphabet>,
    /// `S`, the universe of configurations.
    pub states: Dfa,
    pub initial: Dfa,
    pub target: Dfa,
    /// `→1`, the Scheduler.
    pub move1: Transducer,
    /// `→2`, the Process.
    pub move2: Transducer,
    pub symmetry: Option<SymmetryDecl>,
}

impl GameInstance {
    pub fn pairs(&self) -> &Arc<Alphabet> {
        self.move1.alphabet()
    }

    /// `→1 ∪ →2`.
    pub fn moves(&self) -> Result<Transducer, AutomataError> {
        automata::union(&self.move1, &self.move2)
    }

    /// `V2 = dom(→2) ∪ range(→1)`.
    pub fn player2_configs(&self) -> Result<Dfa, AutomataError> {
        let u = automata::union(&automata::domain(&self.move2)?, &automata::range(&self.move1)?)?;
        automata::canonical(&u)
    }

    /// `S ∖ F` as an automaton.
    pub fn non_target(&self) -> Result<Dfa, AutomataError> {
        Ok(automata::minimize(&automata::complement(&self.target, &self.states)?))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Field {
    Alphabet,
    States,
    Initial,
    Final,
    Player1,
    Player2,
    Symmetry,
}

struct Section {
    field: Field,
    name: String,
    start: usize,
    end: usize,
}

const FORBIDDEN: &[char] = &['(', ')', '|', '&', '*', '+', '?', '/', '.', ';', ':', ',', '#'];

fn split_sections(src: &str) -> Result<Vec<Section>, ModelError> {
    let syntax = |at: usize, msg: &str| {
        let (line, col) = regex::line_col(src, at);
        ModelError::Syntax { line, col, msg: msg.to_string() }
    };
    let bytes = src.as_bytes();
    let mut out: Vec<Section> = Vec::new();
    let mut i = 0;
    loop {
        while i < bytes.len() {
            if bytes[i] == b'#' {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            } else if (bytes[i] as char).is_ascii_whitespace() {
                i += 1;
            } else {
                break;
            }
        }
        if i >= bytes.len() {
            return Ok(out);
        }
        let name_start = i;
        while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
            i += 1;
        }
        let name = &src[name_start..i];
        if name.is_empty() {
            return Err(syntax(name_start, "expected a section name"));
        }
        let field = match name {
            "alphabet" => Field::Alphabet,
            "states" => Field::States,
            "initial" => Field::Initial,
            "final" => Field::Final,
            "player1" => Field::Player1,
            "player2" => Field::Player2,
            "symmetry" => Field::Symmetry,
            _ => return Err(syntax(name_start, &format!("unknown section `{name}`"))),
        };
        while i < bytes.len() && (bytes[i] as char).is_ascii_whitespace() {
            i += 1;
        }
        if i >= bytes.len() || bytes[i] != b':' {
            return Err(syntax(i, "expected `:` after section name"));
        }
        i += 1;
        let start = i;
        while i < bytes.len() && bytes[i] != b';' {
            if bytes[i] == b'#' {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            } else {
                i += 1;
            }
        }
        if i >= bytes.len() {
            return Err(syntax(name_start, &format!("section `{name}` is not terminated by `;`")));
        }
        if out.iter().any(|s| s.field == field) {
            let (line, col) = regex::line_col(src, name_start);
            return Err(ModelError::DuplicateSection { line, col, name: name.to_string() });
        }
        out.push(Section { field, name: name.to_string(), start, end: i });
        i += 1;
    }
}

fn strip_comments(s: &str) -> String {
    s.lines().map(|l| l.split('#').next().unwrap_or("")).collect::<Vec<_>>().join("\n")
}

fn parse_alphabet(src: &str, sec: &Section) -> Result<Arc<Alphabet>, ModelError> {
    let body = &src[sec.start..sec.end];
    let mut names = Vec::new();
    let mut offset = sec.start;
    for line in body.split_inclusive('\n') {
        let code = line.split('#').next().unwrap_or("");
        let mut col = 0;
        for tok in code.split(|c: char| c == ',' || c.is_whitespace()) {
            if !tok.is_empty() {
                if tok.contains(FORBIDDEN) {
                    let (line, col) = regex::line_col(src, offset + col);
                    return Err(ModelError::BadLetter { line, col, letter: tok.to_string() });
                }
                names.push(tok.to_string());
            }
            col += tok.len() + 1;
        }
        offset += line.len();
    }
    Alphabet::new(&names).map_err(|e| match e {
        AutomataError::EmptyAlphabet => {
            let (line, col) = regex::line_col(src, sec.start);
            ModelError::Syntax { line, col, msg: "alphabet must not be empty".into() }
        }
        AutomataError::DuplicateLetter(l) | AutomataError::BadLetter(l) => {
            let (line, col) = regex::line_col(src, sec.start);
            ModelError::BadLetter { line, col, letter: l }
        }
        other => ModelError::Automata(other),
    })
}

fn compile_field(src: &str, sec: &Section, alphabet: &Arc<Alphabet>, pairs: &Arc<Alphabet>) -> Result<Dfa, ModelError> {
    let relation = matches!(sec.field, Field::Player1 | Field::Player2 | Field::Symmetry);
    let target = if relation { pairs } else { alphabet };
    let re = regex::Parser::new(src, sec.start, sec.end, alphabet, relation, &sec.name).parse()?;
    match re {
        None => Ok(Dfa::empty(target.clone())),
        Some(re) => Ok(automata::canonical(&regex::compile(&re, target)?)?),
    }
}

/// Parse a model; `name` labels the instance (file stem or built-in name).
pub fn parse_model(name: &str, src: &str) -> Result<GameInstance, ModelError> {
    let sections = split_sections(src)?;
    let get = |f: Field| sections.iter().find(|s| s.field == f);
    let alphabet = parse_alphabet(src, get(Field::Alphabet).ok_or(ModelError::MissingSection("alphabet"))?)?;
    let pairs = Alphabet::pairs(&alphabet);
    let field = |f: Field, label: &'static str| -> Result<Dfa, ModelError> {
        compile_field(src, get(f).ok_or(ModelError::MissingSection(label))?, &alphabet, &pairs)
    };
    let initial = field(Field::Initial, "initial")?;
    let target = field(Field::Final, "final")?;
    let move1 = field(Field::Player1, "player1")?.to_nfa();
    let move2 = field(Field::Player2, "player2")?.to_nfa();
    let states = match get(Field::States) {
        Some(_) => field(Field::States, "states")?,
        None => {
            let parts = [
                initial.to_nfa(),
                target.to_nfa(),
                automata::domain(&move1)?,
                automata::range(&move1)?,
                automata::domain(&move2)?,
                automata::range(&move2)?,
            ];
            automata::canonical(&automata::union_all(&parts)?)?
        }
    };
    let symmetry = match get(Field::Symmetry) {
        None => None,
        Some(sec) if strip_comments(&src[sec.start..sec.end]).trim() == "rotation" => {
            Some(SymmetryDecl::Rotation)
        }
        Some(_) => Some(SymmetryDecl::Transducer(field(Field::Symmetry, "symmetry")?.to_nfa())),
    };
    Ok(GameInstance { name: name.to_string(), alphabet, states, initial, target, move1, move2, symmetry })
}

/// `true` when both instances share the alphabet and denote the same five languages.
pub fn same_languages(a: &GameInstance, b: &GameInstance) -> Result<bool, AutomataError> {
    if *a.alphabet != *b.alphabet {
        return Ok(false);
    }
    let pairs: [(Nfa, Nfa); 5] = [
        (a.states.to_nfa(), b.states.to_nfa()),
        (a.initial.to_nfa(), b.initial.to_nfa()),
        (a.target.to_nfa(), b.target.to_nfa()),
        (a.move1.clone(), b.move1.clone()),
        (a.move2.clone(), b.move2.clone()),
    ];
    for (x, y) in &pairs {
        if !automata::equivalent(x, y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A set (or, with `relation`, a relation over `a/b` letters) from one regex.
pub fn parse_language(alphabet: &Arc<Alphabet>, src: &str, relation: bool) -> Result<Dfa, ModelError> {
    let target = if relation { Alphabet::pairs(alphabet) } else { alphabet.clone() };
    let field = if relation { "relation" } else { "set" };
    match regex::Parser::new(src, 0, src.len(), alphabet, relation, field).parse()? {
        None => Ok(Dfa::empty(target)),
        Some(re) => Ok(automata::canonical(&regex::compile(&re, &target)?)?),
    }
}
