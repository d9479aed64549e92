//! Monolithic synthesis of advice bits.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use crate::automata::Dfa;
use crate::cegar::{post2, search, EngineError, SearchOptions, SearchResult, SearchStats, Teacher};
use crate::model::GameInstance;
use crate::synth::Fact;
use crate::verify::{self, AdviceBits, Counterexample, Profile};

#[derive(Clone, Debug)]
pub struct MonoOptions {
    /// Drop inductiveness of `A` (combinatorial games).
    pub game_profile: bool,
    pub max_states: usize,
    pub timeout: Option<Duration>,
    pub seed: u64,
    pub dump_cnf: Option<PathBuf>,
}

impl Default for MonoOptions {
    fn default() -> Self {
        MonoOptions {
            game_profile: false,
            max_states: 24,
            timeout: Some(Duration::from_secs(600)),
            seed: 0,
            dump_cnf: None,
        }
    }
}

impl MonoOptions {
    pub fn profile(&self) -> Profile {
        if self.game_profile {
            Profile::GAME
        } else {
            Profile::PROTOCOL
        }
    }
}

#[derive(Clone, Debug)]
pub enum MonoResult {
    Proved { cert: AdviceBits, stats: SearchStats },
    Exhausted { stats: SearchStats },
    Timeout { stats: SearchStats },
}

impl MonoResult {
    pub fn stats(&self) -> &SearchStats {
        match self {
            MonoResult::Proved { stats, .. } | MonoResult::Exhausted { stats } | MonoResult::Timeout { stats } => stats,
        }
    }
}

/// Translate a verification failure into a fact about the target languages.
pub fn fact_of(g: &GameInstance, ce: &Counterexample) -> Result<Fact, EngineError> {
    Ok(match ce {
        Counterexample::Initial { x } => Fact::Accept(x.clone()),
        Counterexample::Domain { x } => Fact::Reject(x.clone()),
        Counterexample::Inductive { x, y } => Fact::Implies(x.clone(), y.clone()),
        Counterexample::Transitive { x, y, z } => Fact::Transitive(x.clone(), y.clone(), z.clone()),
        Counterexample::Progress { x, y } => Fact::Progress { x: x.clone(), y: y.clone(), post: post2(g, y)? },
        Counterexample::Irreflexive { x } => {
            return Err(EngineError::Refused(format!(
                "candidate relation is reflexive on {}",
                g.alphabet.render(x)
            )))
        }
    })
}

struct MonoTeacher<'a> {
    g: &'a GameInstance,
    profile: Profile,
}

impl Teacher for MonoTeacher<'_> {
    fn with_relation(&self) -> bool {
        true
    }

    fn check(&mut self, a: &Dfa, prec: Option<&Dfa>) -> Result<Option<Fact>, EngineError> {
        let adv = AdviceBits { a: a.clone(), prec: prec.expect("relation candidate").clone() };
        match verify::verify(self.g, &adv, self.profile)? {
            None => Ok(None),
            Some(ce) => Ok(Some(fact_of(self.g, &ce)?)),
        }
    }
}

pub fn solve_monolithic(g: &GameInstance, opts: &MonoOptions) -> Result<MonoResult, EngineError> {
    let deadline = opts.timeout.map(|t| Instant::now() + t);
    let sopts = SearchOptions { max_states: opts.max_states, deadline, seed: opts.seed, dump_cnf: opts.dump_cnf.clone() };
    let mut teacher = MonoTeacher { g, profile: opts.profile() };
    Ok(match search(&mut teacher, &g.alphabet, &sopts, 0)? {
        SearchResult::Found { a, prec, stats } => {
            MonoResult::Proved { cert: AdviceBits { a, prec: prec.expect("relation candidate") }, stats }
        }
        SearchResult::Exhausted(stats) => MonoResult::Exhausted { stats },
        SearchResult::Timeout(stats) => MonoResult::Timeout { stats },
    })
}
