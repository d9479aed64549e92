use std::sync::Arc;

use super::{Alphabet, AutomataError, State, Symbol, Word, NONE};

/// Nondeterministic automaton without ε-moves. Transition lists are kept sorted
/// by `(symbol, target)` and free of duplicates.
#[derive(Clone, Debug)]
pub struct Nfa {
    pub(crate) alphabet: Arc<Alphabet>,
    pub(crate) initial: Vec<State>,
    pub(crate) accepting: Vec<bool>,
    pub(crate) trans: Vec<Vec<(Symbol, State)>>,
}

impl Nfa {
    pub fn from_parts(
        alphabet: Arc<Alphabet>,
        num_states: usize,
        initial: impl IntoIterator<Item = State>,
        transitions: impl IntoIterator<Item = (State, Symbol, State)>,
        accepting: impl IntoIterator<Item = State>,
    ) -> Result<Nfa, AutomataError> {
        let n = num_states;
        let check = |q: State| if (q as usize) < n { Ok(q) } else { Err(AutomataError::BadState(q)) };
        let mut init = initial.into_iter().map(check).collect::<Result<Vec<_>, _>>()?;
        init.sort_unstable();
        init.dedup();
        let mut trans = vec![Vec::new(); n];
        for (p, a, q) in transitions {
            check(p)?;
            check(q)?;
            if a as usize >= alphabet.len() {
                return Err(AutomataError::BadSymbol(a));
            }
            trans[p as usize].push((a, q));
        }
        let mut acc = vec![false; n];
        for q in accepting {
            acc[check(q)? as usize] = true;
        }
        let mut nfa = Nfa { alphabet, initial: init, accepting: acc, trans };
        nfa.normalize();
        Ok(nfa)
    }

    pub(crate) fn normalize(&mut self) {
        for t in &mut self.trans {
            t.sort_unstable();
            t.dedup();
        }
    }

    pub fn empty(alphabet: Arc<Alphabet>) -> Nfa {
        Nfa { alphabet, initial: vec![0], accepting: vec![false], trans: vec![Vec::new()] }
    }

    /// Σ*.
    pub fn universal(alphabet: Arc<Alphabet>) -> Nfa {
        let trans = vec![alphabet.symbols().map(|a| (a, 0)).collect()];
        Nfa { alphabet, initial: vec![0], accepting: vec![true], trans }
    }

    /// Exactly the given words.
    pub fn from_words(alphabet: Arc<Alphabet>, words: &[Word]) -> Nfa {
        let mut trie: Vec<Vec<(Symbol, State)>> = vec![Vec::new()];
        let mut acc = vec![false];
        for w in words {
            let mut q = 0usize;
            for &a in w {
                q = match trie[q].iter().find(|&&(b, _)| b == a) {
                    Some(&(_, t)) => t as usize,
                    None => {
                        trie.push(Vec::new());
                        acc.push(false);
                        let t = trie.len() - 1;
                        trie[q].push((a, t as State));
                        t
                    }
                };
            }
            acc[q] = true;
        }
        let mut nfa = Nfa { alphabet, initial: vec![0], accepting: acc, trans: trie };
        nfa.normalize();
        nfa
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> &[State] {
        &self.initial
    }

    pub fn is_accepting(&self, q: State) -> bool {
        self.accepting[q as usize]
    }

    pub fn transitions(&self, q: State) -> &[(Symbol, State)] {
        &self.trans[q as usize]
    }

    /// Transitions of `q` labelled `a`.
    pub fn on(&self, q: State, a: Symbol) -> &[(Symbol, State)] {
        let t = &self.trans[q as usize];
        let lo = t.partition_point(|&(b, _)| b < a);
        let hi = t.partition_point(|&(b, _)| b <= a);
        &t[lo..hi]
    }

    /// Transitions of `q` whose symbol lies in `lo..hi`.
    pub(crate) fn in_range(&self, q: State, lo: Symbol, hi: Symbol) -> &[(Symbol, State)] {
        let t = &self.trans[q as usize];
        let a = t.partition_point(|&(b, _)| b < lo);
        let z = t.partition_point(|&(b, _)| b < hi);
        &t[a..z]
    }

    pub fn num_transitions(&self) -> usize {
        self.trans.iter().map(Vec::len).sum()
    }

    pub fn step(&self, from: &[State], a: Symbol) -> Vec<State> {
        let mut out: Vec<State> = from.iter().flat_map(|&q| self.on(q, a).iter().map(|&(_, t)| t)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        let mut cur = self.initial.clone();
        for &a in w {
            if cur.is_empty() {
                return false;
            }
            cur = self.step(&cur, a);
        }
        cur.iter().any(|&q| self.is_accepting(q))
    }

    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1 && self.trans.iter().all(|t| t.windows(2).all(|w| w[0].0 != w[1].0))
    }
}

/// Partial deterministic automaton; a missing transition rejects.
#[derive(Clone, Debug)]
pub struct Dfa {
    pub(crate) alphabet: Arc<Alphabet>,
    pub(crate) initial: State,
    pub(crate) accepting: Vec<bool>,
    pub(crate) delta: Vec<State>,
}

impl Dfa {
    pub fn from_parts(
        alphabet: Arc<Alphabet>,
        num_states: usize,
        initial: State,
        transitions: impl IntoIterator<Item = (State, Symbol, State)>,
        accepting: impl IntoIterator<Item = State>,
    ) -> Result<Dfa, AutomataError> {
        let n = num_states;
        let k = alphabet.len();
        if n == 0 || initial as usize >= n {
            return Err(AutomataError::BadState(initial));
        }
        let mut delta = vec![NONE; n * k];
        for (p, a, q) in transitions {
            if p as usize >= n || q as usize >= n {
                return Err(AutomataError::BadState(p.max(q)));
            }
            if a as usize >= k {
                return Err(AutomataError::BadSymbol(a));
            }
            let slot = &mut delta[p as usize * k + a as usize];
            if *slot != NONE && *slot != q {
                return Err(AutomataError::Nondeterministic(p, a));
            }
            *slot = q;
        }
        let mut acc = vec![false; n];
        for q in accepting {
            if q as usize >= n {
                return Err(AutomataError::BadState(q));
            }
            acc[q as usize] = true;
        }
        Ok(Dfa { alphabet, initial, accepting: acc, delta })
    }

    pub fn empty(alphabet: Arc<Alphabet>) -> Dfa {
        let k = alphabet.len();
        Dfa { alphabet, initial: 0, accepting: vec![false], delta: vec![NONE; k] }
    }

    pub fn universal(alphabet: Arc<Alphabet>) -> Dfa {
        let k = alphabet.len();
        Dfa { alphabet, initial: 0, accepting: vec![true], delta: vec![0; k] }
    }

    /// Deterministic NFA to DFA without subset construction.
    pub(crate) fn from_deterministic(n: &Nfa) -> Dfa {
        debug_assert!(n.is_deterministic());
        let k = n.alphabet.len();
        let mut delta = vec![NONE; n.num_states() * k];
        for (p, t) in n.trans.iter().enumerate() {
            for &(a, q) in t {
                delta[p * k + a as usize] = q;
            }
        }
        Dfa { alphabet: n.alphabet.clone(), initial: n.initial[0], accepting: n.accepting.clone(), delta }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn is_accepting(&self, q: State) -> bool {
        self.accepting[q as usize]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = State> + '_ {
        (0..self.num_states() as State).filter(|&q| self.is_accepting(q))
    }

    pub fn next(&self, q: State, a: Symbol) -> Option<State> {
        let t = self.delta[q as usize * self.alphabet.len() + a as usize];
        (t != NONE).then_some(t)
    }

    /// Defined transitions of `q` in symbol order.
    pub fn transitions(&self, q: State) -> impl Iterator<Item = (Symbol, State)> + '_ {
        let k = self.alphabet.len();
        self.delta[q as usize * k..(q as usize + 1) * k]
            .iter()
            .enumerate()
            .filter(|(_, &t)| t != NONE)
            .map(|(a, &t)| (a as Symbol, t))
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().filter(|&&t| t != NONE).count()
    }

    pub fn run(&self, w: &[Symbol]) -> Option<State> {
        w.iter().try_fold(self.initial, |q, &a| self.next(q, a))
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        self.run(w).is_some_and(|q| self.is_accepting(q))
    }

    pub fn to_nfa(&self) -> Nfa {
        let trans = (0..self.num_states() as State).map(|q| self.transitions(q).collect()).collect();
        Nfa {
            alphabet: self.alphabet.clone(),
            initial: vec![self.initial],
            accepting: self.accepting.clone(),
            trans,
        }
    }

    /// Structural identity (same numbering); for minimized automata this is language equality.
    pub fn same_structure(&self, other: &Dfa) -> bool {
        self.alphabet == other.alphabet
            && self.initial == other.initial
            && self.accepting == other.accepting
            && self.delta == other.delta
    }
}

impl From<&Dfa> for Nfa {
    fn from(d: &Dfa) -> Nfa {
        d.to_nfa()
    }
}

impl From<Dfa> for Nfa {
    fn from(d: Dfa) -> Nfa {
        d.to_nfa()
    }
}

/// Automaton with ε-moves, used while building from regexes and concatenations.
#[derive(Clone, Debug)]
pub struct EpsNfa {
    alphabet: Arc<Alphabet>,
    trans: Vec<Vec<(Symbol, State)>>,
    eps: Vec<Vec<State>>,
    initial: Vec<State>,
    accepting: Vec<bool>,
}

impl EpsNfa {
    pub fn new(alphabet: Arc<Alphabet>) -> EpsNfa {
        EpsNfa { alphabet, trans: Vec::new(), eps: Vec::new(), initial: Vec::new(), accepting: Vec::new() }
    }

    pub fn add_state(&mut self) -> State {
        self.trans.push(Vec::new());
        self.eps.push(Vec::new());
        self.accepting.push(false);
        (self.trans.len() - 1) as State
    }

    pub fn add(&mut self, p: State, a: Symbol, q: State) {
        self.trans[p as usize].push((a, q));
    }

    pub fn add_eps(&mut self, p: State, q: State) {
        self.eps[p as usize].push(q);
    }

    pub fn set_initial(&mut self, q: State) {
        self.initial.push(q);
    }

    pub fn set_accepting(&mut self, q: State, v: bool) {
        self.accepting[q as usize] = v;
    }

    /// Copy an NFA in, returning the offset of its states.
    pub fn embed(&mut self, n: &Nfa) -> State {
        let off = self.trans.len() as State;
        for q in 0..n.num_states() as State {
            let s = self.add_state();
            self.accepting[s as usize] = n.is_accepting(q);
        }
        for q in 0..n.num_states() as State {
            for &(a, t) in n.transitions(q) {
                self.add(q + off, a, t + off);
            }
        }
        off
    }

    pub fn to_nfa(&self) -> Nfa {
        let n = self.trans.len();
        if n == 0 {
            return Nfa::empty(self.alphabet.clone());
        }
        let mut closure: Vec<Vec<State>> = Vec::with_capacity(n);
        let mut mark = vec![usize::MAX; n];
        for s in 0..n {
            let mut stack = vec![s as State];
            let mut c = Vec::new();
            mark[s] = s;
            while let Some(q) = stack.pop() {
                c.push(q);
                for &r in &self.eps[q as usize] {
                    if mark[r as usize] != s {
                        mark[r as usize] = s;
                        stack.push(r);
                    }
                }
            }
            closure.push(c);
        }
        let mut trans = vec![Vec::new(); n];
        let mut acc = vec![false; n];
        for s in 0..n {
            for &q in &closure[s] {
                trans[s].extend_from_slice(&self.trans[q as usize]);
                acc[s] |= self.accepting[q as usize];
            }
        }
        let mut init = self.initial.clone();
        init.sort_unstable();
        init.dedup();
        let mut nfa = Nfa { alphabet: self.alphabet.clone(), initial: init, accepting: acc, trans };
        nfa.normalize();
        super::ops::trim_reachable(&nfa)
    }
}
