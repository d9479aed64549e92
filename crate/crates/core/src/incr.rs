//! Incremental liveness proofs: an over-approximation `A` of the reachable
//! configurations is tightened with relatively inductive invariants while an
//! under-approximation `W` of the winning configurations is widened with
//! progress pairs, until `A ⊆ W`.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use crate::automata::{self, AutomataError, Dfa, Symbol, Word, NONE};
use crate::cegar::{post2, search, EngineError, SearchOptions, SearchResult, Teacher};
use crate::learn::{self, LearnOptions, LearnStats};
use crate::model::{GameInstance, SymmetryDecl};
use crate::oracle::{Oracle, DEFAULT_CONFIG_CAP};
use crate::symmetry::{self, SymmetryViolation};
use crate::synth::{Fact, Shape};
use crate::verify::{self, escaping_pair, progress_violation, AdviceBits, Counterexample};

#[derive(Clone, Debug)]
pub struct IncrOptions {
    pub with_invariant: bool,
    pub with_symmetry: bool,
    pub lstar_precision: usize,
    pub max_states: usize,
    pub timeout: Option<Duration>,
    pub seed: u64,
    pub dump_cnf: Option<PathBuf>,
    pub oracle_cap: usize,
    pub max_iterations: usize,
}

impl Default for IncrOptions {
    fn default() -> Self {
        IncrOptions {
            with_invariant: false,
            with_symmetry: false,
            lstar_precision: 5,
            max_states: 24,
            timeout: Some(Duration::from_secs(600)),
            seed: 0,
            dump_cnf: None,
            oracle_cap: DEFAULT_CONFIG_CAP,
            max_iterations: 100_000,
        }
    }
}

/// One progress pair `(B, ≺)` found for the word `u`.
#[derive(Clone, Debug)]
pub struct Piece {
    pub u: Word,
    pub b: Dfa,
    pub prec: Dfa,
    /// The piece stands for all its images under the declared symmetry.
    pub symmetric: bool,
}

#[derive(Clone, Debug)]
pub struct DisjunctiveCertificate {
    pub a: Dfa,
    pub pieces: Vec<Piece>,
}

#[derive(Clone, Debug)]
pub enum Step {
    /// `u` was reachable; a progress pair was added.
    Win { piece: usize, w_before: Dfa, a: Dfa },
    /// `u` was unreachable; `A` was intersected with `invariant`.
    Invariant { invariant: Dfa, a_before: Dfa },
}

#[derive(Clone, Debug)]
pub struct Iteration {
    pub u: Word,
    pub step: Step,
    pub rounds: usize,
    pub shape: Option<Shape>,
    pub a_shrank: bool,
    pub w_grew: bool,
}

#[derive(Clone, Debug, Default)]
pub struct IncrStats {
    pub iterations: Vec<Iteration>,
    pub rounds: usize,
    pub learned: Option<(Dfa, LearnStats)>,
}

impl IncrStats {
    pub fn win_calls(&self) -> usize {
        self.iterations.iter().filter(|i| matches!(i.step, Step::Win { .. })).count()
    }

    pub fn invariant_calls(&self) -> usize {
        self.iterations.len() - self.win_calls()
    }
}

#[derive(Clone, Debug)]
pub enum IncrResult {
    Proved { cert: DisjunctiveCertificate, stats: IncrStats },
    Timeout { stats: IncrStats },
}

impl IncrResult {
    pub fn stats(&self) -> &IncrStats {
        match self {
            IncrResult::Proved { stats, .. } | IncrResult::Timeout { stats } => stats,
        }
    }
}

fn product(a: &Dfa, b: &Dfa) -> Result<Dfa, AutomataError> {
    automata::canonical(&automata::intersect(&a.to_nfa(), &b.to_nfa())?)
}

fn sum(a: &Dfa, b: &Dfa) -> Result<Dfa, AutomataError> {
    automata::canonical(&automata::union(&a.to_nfa(), &b.to_nfa())?)
}

/// `A ∩ B ∖ W`.
fn obliged(a: &Dfa, b: &Dfa, w: &Dfa) -> Result<automata::Nfa, AutomataError> {
    automata::difference_dfa(&automata::intersect(&a.to_nfa(), &b.to_nfa())?, w)
}

/// Progress-pair conditions for `u` relative to `A` and `W`.
struct WinTeacher<'a> {
    g: &'a GameInstance,
    u: &'a [Symbol],
    a: &'a Dfa,
    w: &'a Dfa,
}

impl Teacher for WinTeacher<'_> {
    fn with_relation(&self) -> bool {
        true
    }

    fn check(&mut self, b: &Dfa, prec: Option<&Dfa>) -> Result<Option<Fact>, EngineError> {
        let prec = prec.expect("relation candidate");
        if !b.accepts(self.u) {
            return Ok(Some(Fact::Accept(self.u.to_vec())));
        }
        if let Some(ce) = verify::check_l3(prec)? {
            return Ok(Some(crate::mono::fact_of(self.g, &ce)?));
        }
        let from = obliged(self.a, b, self.w)?;
        Ok(match progress_violation(self.g, &from, b, prec)? {
            None => None,
            Some((x, y)) => Some(Fact::Progress { post: post2(self.g, &y)?, x, y }),
        })
    }
}

/// Relatively inductive invariant conditions for an unreachable `u`.
struct InvariantTeacher<'a> {
    g: &'a GameInstance,
    moves: &'a automata::Transducer,
    u: &'a [Symbol],
    a: &'a Dfa,
}

impl Teacher for InvariantTeacher<'_> {
    fn with_relation(&self) -> bool {
        false
    }

    fn check(&mut self, i: &Dfa, _: Option<&Dfa>) -> Result<Option<Fact>, EngineError> {
        if i.accepts(self.u) {
            return Ok(Some(Fact::Reject(self.u.to_vec())));
        }
        if let Some(x) = automata::inclusion_witness_dfa(i, &self.g.initial.to_nfa())? {
            return Ok(Some(Fact::Accept(x)));
        }
        let from = product(self.a, i)?;
        Ok(escaping_pair(self.moves, &from, i)?.map(|(x, y)| Fact::Implies(x, y)))
    }
}

pub fn solve_incremental(g: &GameInstance, opts: &IncrOptions) -> Result<IncrResult, EngineError> {
    let start = Instant::now();
    let deadline = opts.timeout.map(|t| start + t);
    let sigma = if opts.with_symmetry {
        let sigma = g
            .symmetry
            .clone()
            .ok_or_else(|| EngineError::Refused(format!("model {} declares no symmetry", g.name)))?;
        if let Some(v) = symmetry::check_automorphism(g, &sigma)? {
            return Err(EngineError::Refused(format!("declared symmetry fails: {}", v.render(g))));
        }
        Some(sigma)
    } else {
        None
    };
    let oracle = Oracle::with_cap(g.clone(), opts.oracle_cap);
    let moves = g.moves()?;
    let mut stats = IncrStats::default();
    let mut a = g.states.clone();
    if opts.with_invariant {
        let lopts = LearnOptions { precision: opts.lstar_precision, deadline, ..LearnOptions::default() };
        let (h, lstats) = match learn::learn_invariant(g, &oracle, &lopts) {
            Ok(x) => x,
            Err(learn::LearnError::Timeout) => return Ok(IncrResult::Timeout { stats }),
            Err(learn::LearnError::Automata(e)) => return Err(e.into()),
            Err(learn::LearnError::Oracle(e)) => return Err(e.into()),
            Err(e) => return Err(EngineError::Refused(e.to_string())),
        };
        a = product(&a, &h)?;
        stats.learned = Some((h, lstats));
    }
    let mut w = automata::minimize(&g.target);
    let mut pieces: Vec<Piece> = Vec::new();
    let sopts = SearchOptions { max_states: opts.max_states, deadline, seed: opts.seed, dump_cnf: opts.dump_cnf.clone() };

    for _ in 0..opts.max_iterations {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return Ok(IncrResult::Timeout { stats });
        }
        let Some(u) = automata::shortest_witness(&automata::difference_dfa(&a.to_nfa(), &w)?) else {
            return Ok(IncrResult::Proved { cert: DisjunctiveCertificate { a, pieces }, stats });
        };
        let rendered = g.alphabet.render(&u);
        if oracle.reachable(&u)? {
            let mut teacher = WinTeacher { g, u: &u, a: &a, w: &w };
            let (b, prec, s) = match search(&mut teacher, &g.alphabet, &sopts, stats.rounds)? {
                SearchResult::Found { a: b, prec, stats: s } => (b, prec.expect("relation candidate"), s),
                SearchResult::Timeout(_) => return Ok(IncrResult::Timeout { stats }),
                SearchResult::Exhausted(_) => {
                    return Err(EngineError::Exhausted { what: "progress pair", word: rendered, max_states: opts.max_states })
                }
            };
            let covered = match &sigma {
                Some(sig) => symmetry::close_piece(&b, sig).map_err(|e| EngineError::Refused(e.to_string()))?,
                None => b.clone(),
            };
            let w_before = w.clone();
            w = sum(&w, &covered)?;
            pieces.push(Piece { u: u.clone(), b, prec, symmetric: sigma.is_some() });
            stats.rounds += s.rounds;
            stats.iterations.push(Iteration {
                w_grew: w.accepts(&u) && !w_before.accepts(&u),
                a_shrank: false,
                u,
                step: Step::Win { piece: pieces.len() - 1, w_before, a: a.clone() },
                rounds: s.rounds,
                shape: s.final_shape(),
            });
        } else {
            if g.initial.accepts(&u) {
                return Err(EngineError::InitialUnreachable(rendered));
            }
            let mut teacher = InvariantTeacher { g, moves: &moves, u: &u, a: &a };
            let (inv, s) = match search(&mut teacher, &g.alphabet, &sopts, stats.rounds)? {
                SearchResult::Found { a: inv, stats: s, .. } => (inv, s),
                SearchResult::Timeout(_) => return Ok(IncrResult::Timeout { stats }),
                SearchResult::Exhausted(_) => {
                    return Err(EngineError::Exhausted { what: "invariant", word: rendered, max_states: opts.max_states })
                }
            };
            let a_before = a.clone();
            a = product(&a, &inv)?;
            stats.rounds += s.rounds;
            stats.iterations.push(Iteration {
                a_shrank: a_before.accepts(&u) && !a.accepts(&u),
                w_grew: false,
                u,
                step: Step::Invariant { invariant: inv, a_before },
                rounds: s.rounds,
                shape: s.final_shape(),
            });
        }
    }
    Err(EngineError::Refused(format!("no result after {} iterations", opts.max_iterations)))
}

/// A failed condition of a disjunctive certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertViolation {
    Initial(Word),
    Domain(Word),
    Inductive(Word, Word),
    Uncovered(Word),
    Member { piece: usize, u: Word },
    Order { piece: usize, ce: Counterexample },
    Progress { piece: usize, x: Word, y: Word },
    Symmetry(SymmetryViolation),
    MissingSymmetry { piece: usize },
}

impl CertViolation {
    pub fn label(&self) -> String {
        match self {
            CertViolation::Initial(_) => "D1".into(),
            CertViolation::Domain(_) => "domain".into(),
            CertViolation::Inductive(..) => "D2".into(),
            CertViolation::Uncovered(_) => "D3".into(),
            CertViolation::Member { piece, .. } => format!("piece {} PP1", piece + 1),
            CertViolation::Order { piece, .. } => format!("piece {} D4", piece + 1),
            CertViolation::Progress { piece, .. } => format!("piece {} D5", piece + 1),
            CertViolation::Symmetry(_) => "symmetry".into(),
            CertViolation::MissingSymmetry { piece } => format!("piece {} symmetry", piece + 1),
        }
    }

    pub fn words(&self) -> Vec<Word> {
        match self {
            CertViolation::Initial(x) | CertViolation::Domain(x) | CertViolation::Uncovered(x) => vec![x.clone()],
            CertViolation::Inductive(x, y) | CertViolation::Progress { x, y, .. } => vec![x.clone(), y.clone()],
            CertViolation::Member { u, .. } => vec![u.clone()],
            CertViolation::Order { ce, .. } => ce.words().into_iter().cloned().collect(),
            CertViolation::Symmetry(_) | CertViolation::MissingSymmetry { .. } => Vec::new(),
        }
    }
}

/// Sets covered by each piece: the piece itself, or its symmetry closure.
fn coverage(cert: &DisjunctiveCertificate, sigma: Option<&SymmetryDecl>) -> Result<Vec<Dfa>, EngineError> {
    cert.pieces
        .iter()
        .map(|p| match (p.symmetric, sigma) {
            (false, _) => Ok(p.b.clone()),
            (true, Some(s)) => symmetry::close_piece(&p.b, s).map_err(|e| EngineError::Refused(e.to_string())),
            (true, None) => Err(EngineError::Refused("symmetric piece without a declared symmetry".into())),
        })
        .collect()
}

/// Re-check a disjunctive certificate from scratch. Inductiveness of `A` is
/// required outright, and each piece is checked against the earlier ones.
pub fn check_disjunctive(g: &GameInstance, cert: &DisjunctiveCertificate) -> Result<Option<CertViolation>, EngineError> {
    if let Some(x) = automata::inclusion_witness_dfa(&cert.a, &g.initial.to_nfa())? {
        return Ok(Some(CertViolation::Initial(x)));
    }
    let nonempty = automata::min_length(&cert.a.to_nfa(), 1)?;
    if let Some(x) = automata::inclusion_witness_dfa(&g.states, &nonempty)? {
        return Ok(Some(CertViolation::Domain(x)));
    }
    if let Some((x, y)) = escaping_pair(&g.moves()?, &cert.a, &cert.a)? {
        return Ok(Some(CertViolation::Inductive(x, y)));
    }
    let sigma = g.symmetry.as_ref();
    for (j, p) in cert.pieces.iter().enumerate() {
        if p.symmetric && sigma.is_none() {
            return Ok(Some(CertViolation::MissingSymmetry { piece: j }));
        }
    }
    if cert.pieces.iter().any(|p| p.symmetric) {
        if let Some(v) = symmetry::check_automorphism(g, sigma.expect("checked above"))? {
            return Ok(Some(CertViolation::Symmetry(v)));
        }
    }
    let cov = coverage(cert, sigma)?;
    let mut w = automata::minimize(&g.target);
    for (j, p) in cert.pieces.iter().enumerate() {
        if !p.b.accepts(&p.u) {
            return Ok(Some(CertViolation::Member { piece: j, u: p.u.clone() }));
        }
        if let Some(ce) = verify::check_l3(&p.prec)? {
            return Ok(Some(CertViolation::Order { piece: j, ce }));
        }
        let from = obliged(&cert.a, &p.b, &w)?;
        if let Some((x, y)) = progress_violation(g, &from, &p.b, &p.prec)? {
            return Ok(Some(CertViolation::Progress { piece: j, x, y }));
        }
        w = sum(&w, &cov[j])?;
    }
    if let Some(x) = automata::inclusion_witness_dfa(&w, &cert.a.to_nfa())? {
        return Ok(Some(CertViolation::Uncovered(x)));
    }
    Ok(None)
}

/// Monolithic advice bits from finitely many pieces: `x ≺ y` iff the first
/// piece containing `x` comes before the one containing `y`, or both share a
/// first piece `j` and `x ≺_j y`. Words in no piece count as belonging to the
/// first one.
pub fn assemble(cert: &DisjunctiveCertificate) -> Result<AdviceBits, EngineError> {
    if cert.pieces.is_empty() {
        let pairs = automata::Alphabet::pairs(cert.a.alphabet());
        return Ok(AdviceBits { a: cert.a.clone(), prec: Dfa::empty(pairs) });
    }
    if let Some(j) = cert.pieces.iter().position(|p| p.symmetric) {
        return Err(EngineError::Refused(format!(
            "piece {} stands for all its rotations; the combined order is not regular in general",
            j + 1
        )));
    }
    let base = cert.a.alphabet().clone();
    let pairs = automata::Alphabet::pairs(&base);
    let k = base.len() as Symbol;
    let m = cert.pieces.len();
    let idx = |states: &[u32]| -> usize {
        (0..m).find(|&j| states[j] != NONE && cert.pieces[j].b.is_accepting(states[j])).unwrap_or(0)
    };
    let init: Vec<u32> = (0..3 * m)
        .map(|i| match i / m {
            0 | 1 => cert.pieces[i % m].b.initial(),
            _ => cert.pieces[i % m].prec.initial(),
        })
        .collect();
    let (nfa, _) = automata::ops::explore(
        pairs.clone(),
        vec![init],
        |key: &Vec<u32>| {
            let (ix, iy) = (idx(&key[..m]), idx(&key[m..2 * m]));
            ix < iy || (ix == iy && key[2 * m + ix] != NONE && cert.pieces[ix].prec.is_accepting(key[2 * m + ix]))
        },
        |key: &Vec<u32>, out| {
            for s in 0..k * k {
                let (x, y) = (s / k, s % k);
                let next: Vec<u32> = (0..3 * m)
                    .map(|i| {
                        let j = i % m;
                        let (d, q, a) = match i / m {
                            0 => (&cert.pieces[j].b, key[i], x),
                            1 => (&cert.pieces[j].b, key[i], y),
                            _ => (&cert.pieces[j].prec, key[i], s),
                        };
                        if q == NONE {
                            NONE
                        } else {
                            d.next(q, a).unwrap_or(NONE)
                        }
                    })
                    .collect();
                if next.iter().any(|&q| q != NONE) {
                    out.push((s, next));
                }
            }
        },
    )?;
    Ok(AdviceBits { a: cert.a.clone(), prec: automata::canonical(&nfa)? })
}
