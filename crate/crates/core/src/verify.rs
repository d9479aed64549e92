//! Conformance of advice bits `⟨A, ≺⟩` to a game instance.

use std::fmt;

use crate::automata::{self, unzip, AutomataError, Dfa, Nfa, Symbol, Word, NONE};
use crate::model::GameInstance;

/// Advice bits: a set `A` and a relation `≺` given by a two-track automaton
/// accepting `x⊗y` iff `x ≺ y`.
#[derive(Clone, Debug)]
pub struct AdviceBits {
    pub a: Dfa,
    pub prec: Dfa,
}

/// Which conditions to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Profile {
    /// Require `A` to be closed under both move relations. Combinatorial
    /// games drop this: `A` then only lists the positions being certified.
    pub inductive: bool,
}

impl Profile {
    pub const PROTOCOL: Profile = Profile { inductive: true };
    pub const GAME: Profile = Profile { inductive: false };
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Counterexample {
    /// `A` accepts a non-empty word outside `S`.
    Domain { x: Word },
    /// L1: `x ∈ I0 ∖ A`.
    Initial { x: Word },
    /// L2: `x ∈ A`, `x → y`, `y ∉ A`.
    Inductive { x: Word, y: Word },
    /// `x ≺ x`.
    Irreflexive { x: Word },
    /// L3: `x ≺ y ≺ z` but not `x ≺ z`.
    Transitive { x: Word, y: Word, z: Word },
    /// L4: `x ∈ A ∖ F`, `x →1 y ∉ F`, and no `z ∈ A` with `y →2 z ≺ x`.
    Progress { x: Word, y: Word },
}

impl Counterexample {
    pub fn condition(&self) -> &'static str {
        match self {
            Counterexample::Domain { .. } => "domain",
            Counterexample::Initial { .. } => "L1",
            Counterexample::Inductive { .. } => "L2",
            Counterexample::Irreflexive { .. } => "irreflexive",
            Counterexample::Transitive { .. } => "L3",
            Counterexample::Progress { .. } => "L4",
        }
    }

    pub fn words(&self) -> Vec<&Word> {
        match self {
            Counterexample::Domain { x } | Counterexample::Initial { x } | Counterexample::Irreflexive { x } => vec![x],
            Counterexample::Inductive { x, y } | Counterexample::Progress { x, y } => vec![x, y],
            Counterexample::Transitive { x, y, z } => vec![x, y, z],
        }
    }

    /// Re-check the defining violation by word membership alone.
    pub fn holds_against(&self, g: &GameInstance, adv: &AdviceBits) -> bool {
        let prec = |u: &[Symbol], v: &[Symbol]| u.len() == v.len() && adv.prec.accepts(&automata::zip(adv.prec.alphabet(), u, v));
        match self {
            Counterexample::Domain { x } => !x.is_empty() && adv.a.accepts(x) && !g.states.accepts(x),
            Counterexample::Initial { x } => g.initial.accepts(x) && !adv.a.accepts(x),
            Counterexample::Inductive { x, y } => {
                adv.a.accepts(x)
                    && !adv.a.accepts(y)
                    && (automata::pair_accepts(&g.move1, x, y) || automata::pair_accepts(&g.move2, x, y))
            }
            Counterexample::Irreflexive { x } => prec(x, x),
            Counterexample::Transitive { x, y, z } => prec(x, y) && prec(y, z) && !prec(x, z),
            Counterexample::Progress { x, y } => {
                progress_fails(g, &adv.a, &adv.a, &adv.prec, x, y) && !g.target.accepts(x)
            }
        }
    }

    pub fn render(&self, g: &GameInstance) -> String {
        self.words().iter().map(|w| g.alphabet.render(w)).collect::<Vec<_>>().join("\n")
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.condition(), self.words())
    }
}

/// Word-level check that `(x, y)` violates progress: `x` in `from`,
/// `x →1 y`, `y ∈ S ∖ F`, and no `z ∈ to` with `y →2 z` and `z ≺ x`.
pub fn progress_fails(g: &GameInstance, from: &Dfa, to: &Dfa, prec: &Dfa, x: &[Symbol], y: &[Symbol]) -> bool {
    if !(from.accepts(x) && automata::pair_accepts(&g.move1, x, y) && g.states.accepts(y) && !g.target.accepts(y)) {
        return false;
    }
    !automata::image_of_word(&g.move2, y)
        .iter()
        .any(|z| to.accepts(z) && prec.accepts(&automata::zip(prec.alphabet(), z, x)))
}

pub fn check_domain(g: &GameInstance, adv: &AdviceBits) -> Result<Option<Counterexample>, AutomataError> {
    let nonempty = automata::min_length(&adv.a.to_nfa(), 1)?;
    Ok(automata::inclusion_witness_dfa(&g.states, &nonempty)?.map(|x| Counterexample::Domain { x }))
}

pub fn check_l1(g: &GameInstance, adv: &AdviceBits) -> Result<Option<Counterexample>, AutomataError> {
    Ok(automata::inclusion_witness_dfa(&adv.a, &g.initial.to_nfa())?.map(|x| Counterexample::Initial { x }))
}

/// Pairs `(x, y) ∈ rel` with `x ∈ from` and `y ∉ to`.
pub(crate) fn escaping_pair(rel: &Nfa, from: &Dfa, to: &Dfa) -> Result<Option<(Word, Word)>, AutomataError> {
    let b = from.alphabet().len() as Symbol;
    let inits = rel.initial().iter().map(|&m| (m, from.initial(), to.initial())).collect();
    let (nfa, _) = automata::ops::explore(
        rel.alphabet().clone(),
        inits,
        |&(m, p, q)| rel.is_accepting(m) && from.is_accepting(p) && (q == NONE || !to.is_accepting(q)),
        |&(m, p, q), out| {
            for &(s, m2) in rel.transitions(m) {
                let (x, y) = (s / b, s % b);
                if let Some(p2) = from.next(p, x) {
                    let q2 = if q == NONE { NONE } else { to.next(q, y).unwrap_or(NONE) };
                    out.push((s, (m2, p2, q2)));
                }
            }
        },
    )?;
    Ok(automata::shortest_witness(&nfa).map(|w| unzip(rel.alphabet(), &w)))
}

pub fn check_l2(g: &GameInstance, adv: &AdviceBits) -> Result<Option<Counterexample>, AutomataError> {
    let moves = g.moves()?;
    Ok(escaping_pair(&moves, &adv.a, &adv.a)?.map(|(x, y)| Counterexample::Inductive { x, y }))
}

/// Least `y` (for the given length) with `x r1 y` and `y r2 z`.
pub(crate) fn middle_word(r1: &Dfa, r2: &Dfa, x: &[Symbol], z: &[Symbol]) -> Result<Option<Word>, AutomataError> {
    let base = r1.alphabet().base();
    let b = base.len() as Symbol;
    let n = x.len();
    let (nfa, _) = automata::ops::explore(
        base,
        vec![(0usize, r1.initial(), r2.initial())],
        |&(i, p, q)| i == n && r1.is_accepting(p) && r2.is_accepting(q),
        |&(i, p, q), out| {
            if i == n {
                return;
            }
            for y in 0..b {
                if let (Some(p2), Some(q2)) = (r1.next(p, x[i] * b + y), r2.next(q, y * b + z[i])) {
                    out.push((y, (i + 1, p2, q2)));
                }
            }
        },
    )?;
    Ok(automata::shortest_witness(&nfa))
}

/// Strict preorder check: irreflexivity, then transitivity.
pub fn check_l3(prec: &Dfa) -> Result<Option<Counterexample>, AutomataError> {
    let pn = prec.to_nfa();
    let base = prec.alphabet().base();
    let refl = automata::intersect(&pn, &automata::identity(&base))?;
    if let Some(w) = automata::shortest_witness(&refl) {
        let (x, _) = unzip(prec.alphabet(), &w);
        return Ok(Some(Counterexample::Irreflexive { x }));
    }
    let comp = automata::compose(&pn, &pn)?;
    match automata::inclusion_witness_dfa(prec, &comp)? {
        None => Ok(None),
        Some(w) => {
            let (x, z) = unzip(prec.alphabet(), &w);
            let y = middle_word(prec, prec, &x, &z)?.expect("composition witness has a middle word");
            Ok(Some(Counterexample::Transitive { x, y, z }))
        }
    }
}

/// `R = { (x,y) : ∃z. z ∈ to ∧ y →2 z ∧ z ≺ x }` over the pair alphabet.
pub(crate) fn progress_relation(g: &GameInstance, to: &Dfa, prec: &Dfa) -> Result<Nfa, AutomataError> {
    let b = g.alphabet.len() as Symbol;
    let m2 = &g.move2;
    let inits = m2.initial().iter().map(|&m| (to.initial(), m, prec.initial())).collect();
    let (nfa, _) = automata::ops::explore(
        g.pairs().clone(),
        inits,
        |&(a, m, p)| to.is_accepting(a) && m2.is_accepting(m) && prec.is_accepting(p),
        |&(a, m, p), out| {
            for &(s, m_) in m2.transitions(m) {
                let (y, z) = (s / b, s % b);
                let Some(a_) = to.next(a, z) else { continue };
                for x in 0..b {
                    if let Some(p_) = prec.next(p, z * b + x) {
                        out.push((x * b + y, (a_, m_, p_)));
                    }
                }
            }
        },
    )?;
    Ok(nfa)
}

/// Shortest `(x, y)` with `x ∈ from`, `x →1 y`, `y ∈ S ∖ F` and `(x,y) ∉ R`.
pub fn progress_violation(
    g: &GameInstance,
    from: &Nfa,
    to: &Dfa,
    prec: &Dfa,
) -> Result<Option<(Word, Word)>, AutomataError> {
    let b = g.alphabet.len() as Symbol;
    let obliged = g.non_target()?;
    let from = automata::canonical(from)?;
    let m1 = &g.move1;
    let inits = m1.initial().iter().map(|&m| (m, from.initial(), obliged.initial())).collect();
    let (lhs, _) = automata::ops::explore(
        g.pairs().clone(),
        inits,
        |&(m, p, q)| m1.is_accepting(m) && from.is_accepting(p) && obliged.is_accepting(q),
        |&(m, p, q), out| {
            for &(s, m_) in m1.transitions(m) {
                let (x, y) = (s / b, s % b);
                if let (Some(p_), Some(q_)) = (from.next(p, x), obliged.next(q, y)) {
                    out.push((s, (m_, p_, q_)));
                }
            }
        },
    )?;
    if automata::is_empty(&lhs) {
        return Ok(None);
    }
    let r = automata::to_dfa(&progress_relation(g, to, prec)?)?;
    Ok(automata::inclusion_witness_dfa(&r, &lhs)?.map(|w| unzip(g.pairs(), &w)))
}

pub fn check_l4(g: &GameInstance, adv: &AdviceBits) -> Result<Option<Counterexample>, AutomataError> {
    let from = automata::difference_dfa(&adv.a.to_nfa(), &g.target)?;
    Ok(progress_violation(g, &from, &adv.a, &adv.prec)?.map(|(x, y)| Counterexample::Progress { x, y }))
}

/// Run the checks in order and report the first failure.
pub fn verify(g: &GameInstance, adv: &AdviceBits, profile: Profile) -> Result<Option<Counterexample>, AutomataError> {
    if let Some(ce) = check_l1(g, adv)? {
        return Ok(Some(ce));
    }
    if let Some(ce) = check_domain(g, adv)? {
        return Ok(Some(ce));
    }
    if profile.inductive {
        if let Some(ce) = check_l2(g, adv)? {
            return Ok(Some(ce));
        }
    }
    if let Some(ce) = check_l3(&adv.prec)? {
        return Ok(Some(ce));
    }
    check_l4(g, adv)
}
