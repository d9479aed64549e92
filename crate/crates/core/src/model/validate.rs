use std::fmt;

use crate::automata::{self, AutomataError, Nfa, Word};

use super::GameInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// `I0`, `F` and both move relations stay inside `S`.
    Universe,
    /// Strict alternation: `dom(→1) ⊆ V1` and `range(→2) ⊆ V1`.
    Alternation,
    /// `I0 ∪ F ⊆ V1`.
    Player1Ends,
    /// Non-final configurations have a move.
    NoDeadEnds,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Universe => "universe",
            Convention::Alternation => "A0",
            Convention::Player1Ends => "A1",
            Convention::NoDeadEnds => "A2",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub convention: Convention,
    pub what: &'static str,
    pub witness: Word,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the arena conventions. With `game_profile`, dead ends are only
/// forbidden for Player 1 (a stuck Process loses, which combinatorial games need).
pub fn validate(g: &GameInstance, game_profile: bool) -> Result<Report, AutomataError> {
    let mut report = Report::default();
    let s = g.states.to_nfa();
    let mut check = |convention, what, sup: &Nfa, sub: &Nfa| -> Result<(), AutomataError> {
        if let Some(witness) = automata::inclusion_witness(sup, sub)? {
            report.violations.push(Violation { convention, what, witness });
        }
        Ok(())
    };
    let dom1 = automata::domain(&g.move1)?;
    let rng1 = automata::range(&g.move1)?;
    let dom2 = automata::domain(&g.move2)?;
    let rng2 = automata::range(&g.move2)?;
    check(Convention::Universe, "I0 ⊆ S", &s, &g.initial.to_nfa())?;
    check(Convention::Universe, "F ⊆ S", &s, &g.target.to_nfa())?;
    check(Convention::Universe, "dom(→1) ⊆ S", &s, &dom1)?;
    check(Convention::Universe, "range(→1) ⊆ S", &s, &rng1)?;
    check(Convention::Universe, "dom(→2) ⊆ S", &s, &dom2)?;
    check(Convention::Universe, "range(→2) ⊆ S", &s, &rng2)?;

    let v2 = g.player2_configs()?;
    let v1 = automata::complement(&v2, &g.states)?.to_nfa();
    check(Convention::Alternation, "dom(→1) ⊆ V1", &v1, &dom1)?;
    check(Convention::Alternation, "range(→2) ⊆ V1", &v1, &rng2)?;
    check(Convention::Player1Ends, "I0 ⊆ V1", &v1, &g.initial.to_nfa())?;
    check(Convention::Player1Ends, "F ⊆ V1", &v1, &g.target.to_nfa())?;

    let live = automata::union(&dom1, &dom2)?;
    let non_final = g.non_target()?.to_nfa();
    let obliged = if game_profile { automata::intersect(&non_final, &v1)? } else { non_final };
    check(Convention::NoDeadEnds, "S ∖ F ⊆ pre(→1) ∪ pre(→2)", &live, &obliged)?;
    Ok(report)
}
