//! Propositional search for candidate automata.
//!
//! A candidate is a deterministic set automaton `A` over `Σ`, optionally paired
//! with a deterministic relation automaton `≺` over `Σ×Σ`. States are numbered
//! from 0 here; state 0 is initial. Learnt facts about the target languages are
//! added as clauses and the solver instance is reused across rounds.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use batsat::{lbool, Callbacks, Lit, Solver, SolverInterface, SolverOpts};

use crate::automata::{Alphabet, Dfa, Symbol, Word};

/// State counts of the two candidate automata; `n_prec == 0` means the search
/// is for a set automaton alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    pub n_a: usize,
    pub n_prec: usize,
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.n_a, self.n_prec)
    }
}

/// Shapes in search order: increasing total size, smaller set automaton first.
pub fn shape_schedule(with_relation: bool, max_total: usize) -> Vec<Shape> {
    let mut out = Vec::new();
    if with_relation {
        for total in 2..=max_total {
            for n_a in 1..total {
                out.push(Shape { n_a, n_prec: total - n_a });
            }
        }
    } else {
        out.extend((1..=max_total).map(|n_a| Shape { n_a, n_prec: 0 }));
    }
    out
}

/// A fact every acceptable candidate must satisfy.
#[derive(Clone, Debug)]
pub enum Fact {
    /// `A(x)`.
    Accept(Word),
    /// `¬A(x)`.
    Reject(Word),
    /// `¬A(x) ∨ A(y)`.
    Implies(Word, Word),
    /// `x ⊀ y ∨ y ⊀ z ∨ x ≺ z`.
    Transitive(Word, Word, Word),
    /// `¬A(x) ∨ ∃z ∈ post: A(z) ∧ z ≺ x`, where `post` holds the words `z`
    /// with `y →2 z`.
    Progress { x: Word, y: Word, post: Dfa },
}

impl Fact {
    /// Whether a decoded candidate satisfies the fact, by word membership.
    pub fn satisfied_by(&self, a: &Dfa, prec: Option<&Dfa>) -> bool {
        let rel = |u: &[Symbol], v: &[Symbol]| {
            prec.is_some_and(|p| p.accepts(&crate::automata::zip(p.alphabet(), u, v)))
        };
        match self {
            Fact::Accept(x) => a.accepts(x),
            Fact::Reject(x) => !a.accepts(x),
            Fact::Implies(x, y) => !a.accepts(x) || a.accepts(y),
            Fact::Transitive(x, y, z) => !rel(x, y) || !rel(y, z) || rel(x, z),
            Fact::Progress { x, post, .. } => {
                !a.accepts(x)
                    || crate::automata::words_of_length(post, x.len())
                        .iter()
                        .any(|z| a.accepts(z) && rel(z, x))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Sat,
    Unsat,
    Interrupted,
}

struct Deadline(Option<Instant>);

impl Callbacks for Deadline {
    fn stop(&self) -> bool {
        self.0.is_some_and(|t| Instant::now() >= t)
    }
}

/// Transition and acceptance variables of one candidate automaton.
struct AutVars {
    n: usize,
    k: usize,
    x: Vec<Lit>,
    z: Vec<Lit>,
}

impl AutVars {
    fn x(&self, q: usize, a: usize, q2: usize) -> Lit {
        self.x[(q * self.k + a) * self.n + q2]
    }
}

/// Run literals per word prefix: `run[node][q]` holds iff reading the prefix
/// from the initial state ends in `q`.
#[derive(Default)]
struct Runs {
    nodes: Vec<Vec<Lit>>,
    child: HashMap<(usize, Symbol), usize>,
    accept: HashMap<usize, Lit>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Which {
    Set,
    Rel,
}

pub struct Encoder {
    solver: Solver<Deadline>,
    shape: Shape,
    base: Arc<Alphabet>,
    pairs: Arc<Alphabet>,
    t: Lit,
    a: AutVars,
    p: Option<AutVars>,
    runs_a: Runs,
    runs_p: Runs,
    log: Option<Vec<Vec<Lit>>>,
    scratch: Vec<Lit>,
}

fn bits_for(n: usize) -> usize {
    let mut b = 1;
    while (1usize << b) < n {
        b += 1;
    }
    b
}

impl Encoder {
    /// Encoder with the structural constraints for `shape`. A nonzero `seed`
    /// randomises the solver's initial variable activities.
    pub fn new(base: &Arc<Alphabet>, shape: Shape, seed: u64, deadline: Option<Instant>, record: bool) -> Encoder {
        assert!(shape.n_a >= 1);
        let mut opts = SolverOpts::default();
        if seed != 0 {
            opts.random_seed = (seed % 1_000_000_007) as f64 + 1.0;
            opts.rnd_init_act = true;
        }
        let mut solver = Solver::new(opts, Deadline(deadline));
        let t = Lit::new(solver.new_var_default(), true);
        let placeholder = AutVars { n: 0, k: 0, x: Vec::new(), z: Vec::new() };
        let mut enc = Encoder {
            solver,
            shape,
            base: base.clone(),
            pairs: Alphabet::pairs(base),
            t,
            a: placeholder,
            p: None,
            runs_a: Runs::default(),
            runs_p: Runs::default(),
            log: record.then(Vec::new),
            scratch: Vec::new(),
        };
        enc.solver.add_clause_reuse(&mut vec![t]);
        if let Some(log) = &mut enc.log {
            log.push(vec![t]);
        }
        let k = base.len();
        enc.a = enc.aut_vars(shape.n_a, k);
        if shape.n_prec > 0 {
            let p = enc.aut_vars(shape.n_prec, k * k);
            enc.p = Some(p);
        }
        enc.structure(Which::Set);
        if shape.n_prec > 0 {
            enc.structure(Which::Rel);
            enc.irreflexive();
        }
        enc.runs_a.nodes.push(enc.root(shape.n_a));
        if shape.n_prec > 0 {
            enc.runs_p.nodes.push(enc.root(shape.n_prec));
        }
        enc
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn num_vars(&self) -> u32 {
        self.solver.num_vars()
    }

    pub fn num_clauses(&self) -> u64 {
        self.solver.num_clauses()
    }

    fn var(&mut self) -> Lit {
        Lit::new(self.solver.new_var_default(), true)
    }

    fn root(&self, n: usize) -> Vec<Lit> {
        (0..n).map(|q| if q == 0 { self.t } else { !self.t }).collect()
    }

    /// Add a clause, dropping false constants and skipping satisfied clauses.
    fn clause(&mut self, lits: &[Lit]) {
        let (t, f) = (self.t, !self.t);
        self.scratch.clear();
        for &l in lits {
            if l == t {
                return;
            }
            if l != f {
                self.scratch.push(l);
            }
        }
        if let Some(log) = &mut self.log {
            log.push(self.scratch.clone());
        }
        let mut c = std::mem::take(&mut self.scratch);
        self.solver.add_clause_reuse(&mut c);
        self.scratch = c;
    }

    fn aut_vars(&mut self, n: usize, k: usize) -> AutVars {
        let x = (0..n * k * n).map(|_| self.var()).collect();
        let z = (0..n).map(|_| self.var()).collect();
        AutVars { n, k, x, z }
    }

    fn vars(&self, which: Which) -> &AutVars {
        match which {
            Which::Set => &self.a,
            Which::Rel => self.p.as_ref().expect("relation automaton"),
        }
    }

    /// Determinism, reachability, co-reachability and state ordering.
    fn structure(&mut self, which: Which) {
        let (n, k) = (self.vars(which).n, self.vars(which).k);
        for q in 0..n {
            for a in 0..k {
                for q1 in 0..n {
                    for q2 in q1 + 1..n {
                        let (l1, l2) = (self.vars(which).x(q, a, q1), self.vars(which).x(q, a, q2));
                        self.clause(&[!l1, !l2]);
                    }
                }
            }
        }
        if n >= 2 {
            self.distances(which, false);
            self.distances(which, true);
        }
        if n >= 3 {
            for q in 1..n - 1 {
                let key = |v: &AutVars, q: usize| {
                    let mut key = vec![v.z[q]];
                    key.extend((0..v.k).map(|a| v.x(q, a, q)));
                    key
                };
                let lo = key(self.vars(which), q);
                let hi = key(self.vars(which), q + 1);
                self.lex_le(&lo, &hi);
            }
        }
    }

    /// Binary distance labels: from the initial state (`backward == false`)
    /// or to an accepting state (`backward == true`).
    fn distances(&mut self, which: Which, backward: bool) {
        let n = self.vars(which).n;
        let k = self.vars(which).k;
        let b = bits_for(n);
        let d: Vec<Vec<Lit>> = (0..n).map(|_| (0..b).map(|_| self.var()).collect()).collect();
        // carry[q][i]: the bits below i of d[q] are all set
        let mut carry: Vec<Vec<Lit>> = Vec::with_capacity(n);
        for q in 0..n {
            let mut c = vec![self.t];
            for i in 0..b {
                let prev = c[i];
                let next = self.var();
                self.clause(&[!next, prev]);
                self.clause(&[!next, d[q][i]]);
                self.clause(&[next, !prev, !d[q][i]]);
                c.push(next);
            }
            carry.push(c);
        }
        if !backward {
            for i in 0..b {
                self.clause(&[!d[0][i]]);
            }
        }
        for q in 0..n {
            if !backward && q == 0 {
                continue;
            }
            let mut some = Vec::new();
            if backward {
                some.push(self.vars(which).z[q]);
            }
            for o in 0..n {
                if o == q {
                    continue;
                }
                // `o` is one step closer: an edge o → q (forward) or q → o (backward)
                let p = self.var();
                some.push(p);
                let mut edge = vec![!p];
                for a in 0..k {
                    let v = self.vars(which);
                    edge.push(if backward { v.x(q, a, o) } else { v.x(o, a, q) });
                }
                self.clause(&edge);
                self.clause(&[!p, !carry[o][b]]);
                for i in 0..b {
                    let (y, x, c) = (d[q][i], d[o][i], carry[o][i]);
                    self.clause(&[!p, !y, x, c]);
                    self.clause(&[!p, !y, !x, !c]);
                    self.clause(&[!p, y, !x, c]);
                    self.clause(&[!p, y, x, !c]);
                }
            }
            self.clause(&some);
        }
    }

    /// `lo ≤ hi` as unsigned integers, most significant literal first.
    fn lex_le(&mut self, lo: &[Lit], hi: &[Lit]) {
        let mut eq = self.t;
        for j in 0..lo.len() {
            self.clause(&[!eq, !lo[j], hi[j]]);
            if j + 1 < lo.len() {
                let next = self.var();
                self.clause(&[!eq, !lo[j], !hi[j], next]);
                self.clause(&[!eq, lo[j], hi[j], next]);
                eq = next;
            }
        }
    }

    /// Every accepting path of `≺` leaves the diagonal.
    fn irreflexive(&mut self) {
        let (n, k) = (self.shape.n_prec, self.base.len());
        let r: Vec<Lit> = (0..n).map(|_| self.var()).collect();
        self.clause(&[r[0]]);
        for q in 0..n {
            let z = self.vars(Which::Rel).z[q];
            self.clause(&[!z, !r[q]]);
            for a in 0..k {
                for q2 in 0..n {
                    let x = self.vars(Which::Rel).x(q, a * k + a, q2);
                    self.clause(&[!r[q], !x, r[q2]]);
                }
            }
        }
    }

    fn runs(&mut self, which: Which) -> &mut Runs {
        match which {
            Which::Set => &mut self.runs_a,
            Which::Rel => &mut self.runs_p,
        }
    }

    fn run_node(&mut self, which: Which, w: &[Symbol]) -> usize {
        let n = self.vars(which).n;
        let mut node = 0;
        for &s in w {
            if let Some(&c) = self.runs(which).child.get(&(node, s)) {
                node = c;
                continue;
            }
            let prev = self.runs(which).nodes[node].clone();
            let next: Vec<Lit> = (0..n).map(|_| self.var()).collect();
            for q2 in 0..n {
                let mut back = vec![!next[q2]];
                for q in 0..n {
                    if prev[q] == !self.t {
                        continue;
                    }
                    let x = self.vars(which).x(q, s as usize, q2);
                    self.clause(&[!prev[q], !x, next[q2]]);
                    self.clause(&[!next[q2], !prev[q], x]);
                    back.push(prev[q]);
                }
                self.clause(&back);
            }
            let runs = self.runs(which);
            runs.nodes.push(next);
            let id = runs.nodes.len() - 1;
            runs.child.insert((node, s), id);
            node = id;
        }
        node
    }

    /// A literal equivalent to acceptance of `w` by the chosen automaton.
    fn member(&mut self, which: Which, w: &[Symbol]) -> Lit {
        let node = self.run_node(which, w);
        if let Some(&l) = self.runs(which).accept.get(&node) {
            return l;
        }
        let run = self.runs(which).nodes[node].clone();
        let acc = self.var();
        let mut some = vec![!acc];
        for (q, &r) in run.iter().enumerate() {
            if r == !self.t {
                continue;
            }
            let z = self.vars(which).z[q];
            self.clause(&[!r, !z, acc]);
            self.clause(&[!acc, !r, z]);
            some.push(r);
        }
        self.clause(&some);
        self.runs(which).accept.insert(node, acc);
        acc
    }

    fn rel_member(&mut self, x: &[Symbol], y: &[Symbol]) -> Lit {
        let w = crate::automata::zip(&self.pairs, x, y);
        self.member(Which::Rel, &w)
    }

    /// Literal for `A(x)`.
    pub fn accepts_lit(&mut self, x: &[Symbol]) -> Lit {
        self.member(Which::Set, x)
    }

    pub fn add(&mut self, fact: &Fact) {
        match fact {
            Fact::Accept(x) => {
                let l = self.member(Which::Set, x);
                self.clause(&[l]);
            }
            Fact::Reject(x) => {
                let l = self.member(Which::Set, x);
                self.clause(&[!l]);
            }
            Fact::Implies(x, y) => {
                let lx = self.member(Which::Set, x);
                let ly = self.member(Which::Set, y);
                self.clause(&[!lx, ly]);
            }
            Fact::Transitive(x, y, z) => {
                if self.p.is_none() {
                    return;
                }
                let xy = self.rel_member(x, y);
                let yz = self.rel_member(y, z);
                let xz = self.rel_member(x, z);
                self.clause(&[!xy, !yz, xz]);
            }
            Fact::Progress { x, post, .. } => self.progress(x, post),
        }
    }

    fn progress(&mut self, x: &[Symbol], post: &Dfa) {
        let ax = self.member(Which::Set, x);
        if self.p.is_none() {
            self.clause(&[!ax]);
            return;
        }
        let n = x.len();
        let k = self.base.len();
        let live = layers(post, n);
        if live[0].is_empty() {
            self.clause(&[!ax]);
            return;
        }
        let g = self.var();
        self.clause(&[!ax, g]);

        // letters of z
        let mut s: Vec<Vec<Option<Lit>>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = vec![None; k];
            for a in 0..k {
                let ok = live[i].iter().any(|&q| post.next(q, a as Symbol).is_some_and(|q2| live[i + 1].contains(&q2)));
                if ok {
                    row[a] = Some(self.var());
                }
            }
            let lits: Vec<Lit> = row.iter().flatten().copied().collect();
            let mut one = vec![!g];
            one.extend(&lits);
            self.clause(&one);
            for (j, &l1) in lits.iter().enumerate() {
                for &l2 in &lits[j + 1..] {
                    self.clause(&[!l1, !l2]);
                }
            }
            s.push(row);
        }

        // a path through `post`
        let ed: Vec<HashMap<u32, Lit>> =
            live.iter().map(|qs| qs.iter().map(|&q| (q, self.var())).collect()).collect();
        for (i, layer) in ed.iter().enumerate() {
            let mut one = vec![!g];
            one.extend(layer.values());
            self.clause(&one);
            if i == n {
                break;
            }
            for (&q, &e) in layer {
                for (&q2, &e2) in &ed[i + 1] {
                    for a in 0..k {
                        if let Some(sa) = s[i][a] {
                            if post.next(q, a as Symbol) != Some(q2) {
                                self.clause(&[!e, !e2, !sa]);
                            }
                        }
                    }
                }
            }
        }

        // a path through A
        let na = self.shape.n_a;
        let ea = self.path_vars(g, n, na);
        for i in 0..n {
            for q in 0..na {
                for q2 in 0..na {
                    for a in 0..k {
                        if let Some(sa) = s[i][a] {
                            let xv = self.a.x(q, a, q2);
                            self.clause(&[!ea[i][q], !ea[i + 1][q2], !sa, xv]);
                        }
                    }
                }
            }
        }
        for q in 0..na {
            let z = self.a.z[q];
            self.clause(&[!ea[n][q], z]);
        }

        // a path through ≺ reading z ⊗ x
        let np = self.shape.n_prec;
        let ep = self.path_vars(g, n, np);
        for i in 0..n {
            for q in 0..np {
                for q2 in 0..np {
                    for a in 0..k {
                        if let Some(sa) = s[i][a] {
                            let xv = self.vars(Which::Rel).x(q, a * k + x[i] as usize, q2);
                            self.clause(&[!ep[i][q], !ep[i + 1][q2], !sa, xv]);
                        }
                    }
                }
            }
        }
        for q in 0..np {
            let z = self.vars(Which::Rel).z[q];
            self.clause(&[!ep[n][q], z]);
        }
    }

    /// `e[i][q]` with at least one per position and `e[0][0]`, all under `g`.
    fn path_vars(&mut self, g: Lit, n: usize, states: usize) -> Vec<Vec<Lit>> {
        let e: Vec<Vec<Lit>> = (0..=n).map(|_| (0..states).map(|_| self.var()).collect()).collect();
        for row in &e {
            let mut one = vec![!g];
            one.extend(row);
            self.clause(&one);
        }
        self.clause(&[!g, e[0][0]]);
        e
    }

    pub fn solve(&mut self) -> Outcome {
        match self.solver.solve_limited(&[]) {
            r if r == lbool::TRUE => Outcome::Sat,
            r if r == lbool::FALSE => Outcome::Unsat,
            _ => Outcome::Interrupted,
        }
    }

    fn value(&self, l: Lit) -> bool {
        self.solver.value_lit(l) == lbool::TRUE
    }

    fn decode_one(&self, v: &AutVars, alphabet: &Arc<Alphabet>) -> Dfa {
        let mut trans = Vec::new();
        for q in 0..v.n {
            for a in 0..v.k {
                for q2 in 0..v.n {
                    if self.value(v.x(q, a, q2)) {
                        trans.push((q as u32, a as Symbol, q2 as u32));
                    }
                }
            }
        }
        let acc: Vec<u32> = (0..v.n).filter(|&q| self.value(v.z[q])).map(|q| q as u32).collect();
        Dfa::from_parts(alphabet.clone(), v.n, 0, trans, acc).expect("model respects determinism")
    }

    /// The candidate described by the last satisfying assignment.
    pub fn decode(&self) -> (Dfa, Option<Dfa>) {
        let a = self.decode_one(&self.a, &self.base);
        let p = self.p.as_ref().map(|p| self.decode_one(p, &self.pairs));
        (a, p)
    }

    /// All clauses added so far in DIMACS format; needs `record`.
    pub fn dimacs(&self) -> Option<String> {
        let log = self.log.as_ref()?;
        let mut out = String::new();
        let _ = writeln!(out, "c shape {}", self.shape);
        let _ = writeln!(out, "p cnf {} {}", self.solver.num_vars(), log.len());
        for c in log {
            for l in c {
                let v = l.var().idx() as i64 + 1;
                let _ = write!(out, "{} ", if l.sign() { v } else { -v });
            }
            out.push_str("0\n");
        }
        Some(out)
    }
}

/// Per position `i ≤ n`, the states of `d` reachable by `i` letters from
/// which acceptance is reachable with exactly `n - i` more.
fn layers(d: &Dfa, n: usize) -> Vec<Vec<u32>> {
    let m = d.num_states();
    let mut fwd = vec![vec![false; m]; n + 1];
    fwd[0][d.initial() as usize] = true;
    for i in 0..n {
        for q in 0..m {
            if fwd[i][q] {
                for (_, q2) in d.transitions(q as u32) {
                    fwd[i + 1][q2 as usize] = true;
                }
            }
        }
    }
    let mut bwd = vec![vec![false; m]; n + 1];
    for q in 0..m {
        bwd[n][q] = d.is_accepting(q as u32);
    }
    for i in (0..n).rev() {
        for q in 0..m {
            bwd[i][q] = d.transitions(q as u32).any(|(_, q2)| bwd[i + 1][q2 as usize]);
        }
    }
    let live: Vec<Vec<u32>> =
        (0..=n).map(|i| (0..m).filter(|&q| fwd[i][q] && bwd[i][q]).map(|q| q as u32).collect()).collect();
    if live.iter().any(|l| l.is_empty()) {
        return vec![Vec::new(); n + 1];
    }
    live
}
