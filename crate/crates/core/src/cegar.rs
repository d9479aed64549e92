//! The synthesise/verify loop shared by all engines.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use thiserror::Error;

use crate::automata::{self, Alphabet, AutomataError, Dfa, Nfa, Word};
use crate::model::GameInstance;
use crate::oracle::OracleError;
use crate::synth::{shape_schedule, Encoder, Fact, Outcome, Shape};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("configuration {0} is initial but was classified unreachable")]
    InitialUnreachable(String),
    #[error("{what} for {word} needs more than {max_states} states")]
    Exhausted { what: &'static str, word: String, max_states: usize },
    #[error("time budget exhausted")]
    Timeout,
    #[error("{0}")]
    Refused(String),
}

/// Supplies the next violated fact for a candidate, or `None` to accept it.
pub trait Teacher {
    fn with_relation(&self) -> bool;
    fn check(&mut self, a: &Dfa, prec: Option<&Dfa>) -> Result<Option<Fact>, EngineError>;
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub max_states: usize,
    pub deadline: Option<Instant>,
    pub seed: u64,
    /// Directory receiving one DIMACS file per round.
    pub dump_cnf: Option<PathBuf>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_states: 24, deadline: None, seed: 0, dump_cnf: None }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchStats {
    pub rounds: usize,
    pub shapes: Vec<Shape>,
    pub facts: Vec<Fact>,
}

impl SearchStats {
    pub fn final_shape(&self) -> Option<Shape> {
        self.shapes.last().copied()
    }
}

#[derive(Clone, Debug)]
pub enum SearchResult {
    Found { a: Dfa, prec: Option<Dfa>, stats: SearchStats },
    Exhausted(SearchStats),
    Timeout(SearchStats),
}

fn expired(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|d| Instant::now() >= d)
}

/// Smallest candidate (in schedule order) accepted by the teacher.
/// `round_offset` numbers dumped CNF files across several searches.
pub fn search(
    teacher: &mut dyn Teacher,
    base: &Arc<Alphabet>,
    opts: &SearchOptions,
    round_offset: usize,
) -> Result<SearchResult, EngineError> {
    let mut stats = SearchStats::default();
    for shape in shape_schedule(teacher.with_relation(), opts.max_states) {
        if expired(opts.deadline) {
            return Ok(SearchResult::Timeout(stats));
        }
        stats.shapes.push(shape);
        let mut enc = Encoder::new(base, shape, opts.seed, opts.deadline, opts.dump_cnf.is_some());
        for f in &stats.facts {
            enc.add(f);
        }
        loop {
            if let Some(dir) = &opts.dump_cnf {
                let path = dir.join(format!("round{}_{}x{}.cnf", round_offset + stats.rounds + 1, shape.n_a, shape.n_prec));
                let text = enc.dimacs().unwrap_or_default();
                std::fs::create_dir_all(dir)
                    .and_then(|_| std::fs::write(&path, text))
                    .map_err(|source| EngineError::Io { path: path.clone(), source })?;
            }
            match enc.solve() {
                Outcome::Unsat => break,
                Outcome::Interrupted => return Ok(SearchResult::Timeout(stats)),
                Outcome::Sat => {}
            }
            stats.rounds += 1;
            let (a, prec) = enc.decode();
            match teacher.check(&a, prec.as_ref())? {
                None => return Ok(SearchResult::Found { a, prec, stats }),
                Some(fact) => {
                    assert!(
                        !fact.satisfied_by(&a, prec.as_ref()),
                        "teacher returned a fact the candidate already satisfies: {fact:?}"
                    );
                    enc.add(&fact);
                    stats.facts.push(fact);
                }
            }
            if expired(opts.deadline) {
                return Ok(SearchResult::Timeout(stats));
            }
        }
    }
    Ok(SearchResult::Exhausted(stats))
}

/// The words `z` with `y →2 z`, as a minimal automaton.
pub fn post2(g: &GameInstance, y: &[u32]) -> Result<Dfa, AutomataError> {
    let zs: Vec<Word> = automata::image_of_word(&g.move2, y);
    automata::canonical(&Nfa::from_words(g.alphabet.clone(), &zs))
}
