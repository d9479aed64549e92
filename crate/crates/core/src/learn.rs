//! Angluin-style learning of an inductive over-approximation of the
//! reachable configurations.

use std::collections::HashMap;
use std::time::Instant;

use thiserror::Error;

use crate::automata::{self, AutomataError, Dfa, Symbol, Word};
use crate::model::GameInstance;
use crate::oracle::{Oracle, OracleError};
use crate::verify::escaping_pair;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("no hypothesis accepted after {0} equivalence queries")]
    TooManyRounds(usize),
    #[error("observation table exceeds {0} rows")]
    TableTooLarge(usize),
    #[error("time budget exhausted")]
    Timeout,
}

#[derive(Clone, Debug)]
pub struct LearnOptions {
    /// Hypotheses must be exact on words up to this length.
    pub precision: usize,
    pub max_rounds: usize,
    pub max_rows: usize,
    pub deadline: Option<Instant>,
}

impl Default for LearnOptions {
    fn default() -> Self {
        LearnOptions { precision: 5, max_rounds: 1000, max_rows: 10_000, deadline: None }
    }
}

/// Which teacher test produced a counterexample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TeacherTest {
    Initial,
    Inductive,
    Exact,
}

#[derive(Clone, Debug, Default)]
pub struct LearnStats {
    pub membership_queries: usize,
    pub equivalence_queries: usize,
    /// Counterexamples in order, with whether the word is reachable.
    pub counterexamples: Vec<(TeacherTest, Word, bool)>,
    pub states: usize,
}

/// Observation table with distinct upper rows; counterexamples add all
/// their suffixes as experiments.
struct Table<'a> {
    g: &'a GameInstance,
    oracle: &'a Oracle,
    k: usize,
    upper: Vec<Word>,
    suffixes: Vec<Word>,
    memo: HashMap<Word, bool>,
    queries: usize,
}

impl Table<'_> {
    fn member(&mut self, w: &[Symbol]) -> Result<bool, OracleError> {
        if let Some(&b) = self.memo.get(w) {
            return Ok(b);
        }
        self.queries += 1;
        let b = self.g.states.accepts(w) && self.oracle.reachable(w)?;
        self.memo.insert(w.to_vec(), b);
        Ok(b)
    }

    fn row(&mut self, w: &[Symbol]) -> Result<Vec<bool>, OracleError> {
        let mut out = Vec::with_capacity(self.suffixes.len());
        for i in 0..self.suffixes.len() {
            let mut x = w.to_vec();
            x.extend_from_slice(&self.suffixes[i]);
            out.push(self.member(&x)?);
        }
        Ok(out)
    }

    /// Close the table, then read off the hypothesis.
    fn hypothesis(&mut self, max_rows: usize) -> Result<Dfa, LearnError> {
        'close: loop {
            let mut rows: HashMap<Vec<bool>, usize> = HashMap::new();
            for i in 0..self.upper.len() {
                let w = self.upper[i].clone();
                let r = self.row(&w)?;
                rows.entry(r).or_insert(i);
            }
            let mut trans = Vec::new();
            for i in 0..self.upper.len() {
                for a in 0..self.k as Symbol {
                    let mut w = self.upper[i].clone();
                    w.push(a);
                    let r = self.row(&w)?;
                    match rows.get(&r) {
                        Some(&j) => trans.push((i as u32, a, j as u32)),
                        None => {
                            if self.upper.len() >= max_rows {
                                return Err(LearnError::TableTooLarge(max_rows));
                            }
                            self.upper.push(w);
                            continue 'close;
                        }
                    }
                }
            }
            let mut acc = Vec::new();
            for i in 0..self.upper.len() {
                let w = self.upper[i].clone();
                if self.member(&w)? {
                    acc.push(i as u32);
                }
            }
            let d = Dfa::from_parts(self.g.alphabet.clone(), self.upper.len(), 0, trans, acc)?;
            return Ok(automata::minimize(&d));
        }
    }

    fn add_counterexample(&mut self, w: &[Symbol]) {
        for i in 0..=w.len() {
            let s = w[i..].to_vec();
            if !self.suffixes.contains(&s) {
                self.suffixes.push(s);
            }
        }
    }
}

/// First word of length `n` on which `h` and the reachable set differ.
fn exactness_witness(h: &Dfa, oracle: &Oracle, n: usize) -> Result<Option<(Word, bool)>, LearnError> {
    let reach = oracle.reachable_words(n)?;
    let hyp = automata::words_of_length(h, n);
    let (mut i, mut j) = (0, 0);
    while i < reach.len() || j < hyp.len() {
        match (reach.get(i), hyp.get(j)) {
            (Some(r), Some(h)) if r == h => {
                i += 1;
                j += 1;
            }
            (Some(r), Some(h)) if r < h => return Ok(Some((r.clone(), true))),
            (Some(r), None) => return Ok(Some((r.clone(), true))),
            (_, Some(h)) => return Ok(Some((h.clone(), false))),
            (None, None) => unreachable!(),
        }
    }
    Ok(None)
}

/// Learn `H` with `I0 ⊆ H`, `H` closed under both moves, and `H` agreeing
/// with reachability on every word of length at most `opts.precision`.
pub fn learn_invariant(g: &GameInstance, oracle: &Oracle, opts: &LearnOptions) -> Result<(Dfa, LearnStats), LearnError> {
    let moves = g.moves()?;
    let mut table = Table {
        g,
        oracle,
        k: g.alphabet.len(),
        upper: vec![Vec::new()],
        suffixes: vec![Vec::new()],
        memo: HashMap::new(),
        queries: 0,
    };
    let mut stats = LearnStats::default();
    for _ in 0..opts.max_rounds {
        if opts.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(LearnError::Timeout);
        }
        let h = table.hypothesis(opts.max_rows)?;
        stats.equivalence_queries += 1;
        let ce = teacher(g, oracle, &moves, &h, opts.precision, &mut table)?;
        match ce {
            None => {
                stats.membership_queries = table.queries;
                stats.states = h.num_states();
                return Ok((h, stats));
            }
            Some((test, w, reachable)) => {
                table.add_counterexample(&w);
                stats.counterexamples.push((test, w, reachable));
            }
        }
    }
    Err(LearnError::TooManyRounds(opts.max_rounds))
}

fn teacher(
    g: &GameInstance,
    oracle: &Oracle,
    moves: &automata::Transducer,
    h: &Dfa,
    precision: usize,
    table: &mut Table,
) -> Result<Option<(TeacherTest, Word, bool)>, LearnError> {
    if let Some(x) = automata::inclusion_witness_dfa(h, &g.initial.to_nfa())? {
        return Ok(Some((TeacherTest::Initial, x, true)));
    }
    if let Some((x, y)) = escaping_pair(moves, h, h)? {
        return Ok(Some(if table.member(&x)? {
            (TeacherTest::Inductive, y, true)
        } else {
            (TeacherTest::Inductive, x, false)
        }));
    }
    for n in 0..=precision {
        if let Some((w, reachable)) = exactness_witness(h, oracle, n)? {
            return Ok(Some((TeacherTest::Exact, w, reachable)));
        }
    }
    Ok(None)
}

/// Whether `h` satisfies the three teacher tests.
pub fn accepted_by_teacher(g: &GameInstance, oracle: &Oracle, h: &Dfa, precision: usize) -> Result<bool, LearnError> {
    if automata::inclusion_witness_dfa(h, &g.initial.to_nfa())?.is_some() {
        return Ok(false);
    }
    if escaping_pair(&g.moves()?, h, h)?.is_some() {
        return Ok(false);
    }
    for n in 0..=precision {
        if exactness_witness(h, oracle, n)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}
