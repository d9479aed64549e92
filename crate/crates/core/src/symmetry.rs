//! Declared automorphisms of an arena and closure of sets under them.

use std::fmt;

use crate::automata::{self, unzip, AutomataError, Dfa, Nfa, Symbol, Word};
use crate::model::{GameInstance, SymmetryDecl};

/// Lengths up to which an explicit symmetry is checked to be a bijection.
pub const BIJECTION_BOUND: usize = 6;
/// Iteration cap for closing a language under an explicit symmetry.
pub const CLOSURE_CAP: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymmetryViolation {
    /// `σ(I0) ≠ I0`; the word lies in one side only.
    Initial(Word),
    /// `σ(F) ≠ F`.
    Final(Word),
    /// The move relation of `player` does not commute with `σ`.
    Move { player: u8, x: Word, y: Word },
    /// An explicit `σ` is not a bijection on words of this length.
    NotBijective(Word),
}

impl fmt::Display for SymmetryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetryViolation::Initial(w) => write!(f, "initial set not invariant at {w:?}"),
            SymmetryViolation::Final(w) => write!(f, "final set not invariant at {w:?}"),
            SymmetryViolation::Move { player, x, y } => write!(f, "player {player} move {x:?} -> {y:?} not preserved"),
            SymmetryViolation::NotBijective(w) => write!(f, "not a bijection at {w:?}"),
        }
    }
}

impl SymmetryViolation {
    pub fn render(&self, g: &GameInstance) -> String {
        let r = |w: &Word| g.alphabet.render(w);
        match self {
            SymmetryViolation::Initial(w) => format!("initial {}", r(w)),
            SymmetryViolation::Final(w) => format!("final {}", r(w)),
            SymmetryViolation::Move { player, x, y } => format!("player{player} {} {}", r(x), r(y)),
            SymmetryViolation::NotBijective(w) => format!("bijection {}", r(w)),
        }
    }
}

fn image(sigma: &SymmetryDecl, l: &Nfa) -> Result<Nfa, AutomataError> {
    match sigma {
        SymmetryDecl::Rotation => Ok(automata::rotate_once(l)),
        SymmetryDecl::Transducer(t) => automata::apply(t, l),
    }
}

fn explicit_bijection(t: &Nfa) -> Option<Word> {
    let k = t.alphabet().base_len();
    for n in 0..=BIJECTION_BOUND {
        let mut hit = std::collections::HashSet::new();
        for x in automata::all_words(k, n) {
            let ys = automata::image_of_word(t, &x);
            if ys.len() != 1 || !hit.insert(ys[0].clone()) {
                return Some(x);
            }
        }
    }
    None
}

/// Check that `σ` fixes `I0` and `F` and commutes with both move relations.
pub fn check_automorphism(g: &GameInstance, sigma: &SymmetryDecl) -> Result<Option<SymmetryViolation>, AutomataError> {
    if let SymmetryDecl::Transducer(t) = sigma {
        if let Some(w) = explicit_bijection(t) {
            return Ok(Some(SymmetryViolation::NotBijective(w)));
        }
    }
    let i0 = g.initial.to_nfa();
    if let Some(w) = automata::equivalence_witness(&image(sigma, &i0)?, &i0)? {
        return Ok(Some(SymmetryViolation::Initial(w)));
    }
    let f = g.target.to_nfa();
    if let Some(w) = automata::equivalence_witness(&image(sigma, &f)?, &f)? {
        return Ok(Some(SymmetryViolation::Final(w)));
    }
    for (player, rel) in [(1u8, &g.move1), (2u8, &g.move2)] {
        let witness = match sigma {
            // rotating a pair word rotates both tracks at once
            SymmetryDecl::Rotation => automata::equivalence_witness(&automata::rotate_once(rel), rel)?,
            SymmetryDecl::Transducer(t) => {
                automata::equivalence_witness(&automata::compose(t, rel)?, &automata::compose(rel, t)?)?
            }
        };
        if let Some(w) = witness {
            let (x, y) = unzip(g.pairs(), &w);
            return Ok(Some(SymmetryViolation::Move { player, x, y }));
        }
    }
    Ok(None)
}

#[derive(Debug, thiserror::Error)]
pub enum ClosureError {
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error("no fixpoint after {0} applications of the symmetry")]
    NoFixpoint(usize),
}

/// `B ∪ σ(B) ∪ σ²(B) ∪ …`.
pub fn close_piece(b: &Dfa, sigma: &SymmetryDecl) -> Result<Dfa, ClosureError> {
    match sigma {
        SymmetryDecl::Rotation => Ok(automata::cyclic_shift_closure(&b.to_nfa())?),
        SymmetryDecl::Transducer(t) => {
            let mut cur = b.clone();
            for _ in 0..CLOSURE_CAP {
                let next = automata::canonical(&automata::union(&cur.to_nfa(), &automata::apply(t, &cur.to_nfa())?)?)?;
                if automata::equivalent(&next.to_nfa(), &cur.to_nfa())? {
                    return Ok(next);
                }
                cur = next;
            }
            Err(ClosureError::NoFixpoint(CLOSURE_CAP))
        }
    }
}

/// Apply `σ` to one word.
pub fn apply_word(sigma: &SymmetryDecl, w: &[Symbol]) -> Option<Word> {
    match sigma {
        SymmetryDecl::Rotation => {
            let mut v = w.to_vec();
            if !v.is_empty() {
                v.rotate_left(1);
            }
            Some(v)
        }
        SymmetryDecl::Transducer(t) => automata::image_of_word(t, w).into_iter().next(),
    }
}
