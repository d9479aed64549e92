//! Finite automata and length-preserving transducers over a declared alphabet.
//!
//! A transducer is an [`Nfa`] whose alphabet is the pair alphabet `Σ×Σ`
//! (see [`Alphabet::pairs`]); the letter `a/b` reads `a` on the first track
//! and `b` on the second.

mod alphabet;
mod dump;
mod nfa;
pub mod ops;

pub use alphabet::{unzip, zip, Alphabet};
pub use dump::{parse_dump, parse_dumps, write_dump};
pub use nfa::{Dfa, EpsNfa, Nfa};
pub use ops::*;

use thiserror::Error;

pub type Symbol = u32;
pub type State = u32;
pub type Word = Vec<Symbol>;

/// Marker for a missing DFA transition.
pub const NONE: State = u32::MAX;

/// Transducers share the automaton representation; the alphabet has two tracks.
pub type Transducer = Nfa;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomataError {
    #[error("alphabet must not be empty")]
    EmptyAlphabet,
    #[error("invalid letter name {0:?}")]
    BadLetter(String),
    #[error("duplicate letter {0:?}")]
    DuplicateLetter(String),
    #[error("unknown letter at {0:?}")]
    UnknownLetter(String),
    #[error("state {0} out of range")]
    BadState(State),
    #[error("symbol {0} out of range")]
    BadSymbol(Symbol),
    #[error("state {0} has two transitions on symbol {1}")]
    Nondeterministic(State, Symbol),
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
    #[error("track {0} does not exist")]
    BadTrack(usize),
    #[error("union of no automata")]
    EmptyUnion,
    #[error("state limit of {0} exceeded")]
    StateLimit(usize),
    #[error("malformed automaton dump, line {line}: {msg}")]
    Dump { line: usize, msg: String },
}
