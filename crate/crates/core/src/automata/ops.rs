//! Language operations on [`Nfa`] and [`Dfa`].

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use super::{Alphabet, AutomataError, Dfa, EpsNfa, Nfa, State, Symbol, Word, NONE};

static STATE_CAP: AtomicUsize = AtomicUsize::new(1_000_000);

/// Upper bound on states of any product or subset construction.
pub fn state_cap() -> usize {
    STATE_CAP.load(Ordering::Relaxed)
}

pub fn set_state_cap(n: usize) {
    STATE_CAP.store(n.max(1), Ordering::Relaxed);
}

fn same_alphabet(a: &Alphabet, b: &Alphabet) -> Result<(), AutomataError> {
    if a == b {
        Ok(())
    } else {
        Err(AutomataError::AlphabetMismatch)
    }
}

/// Breadth-first exploration of an implicitly given automaton.
pub(crate) fn explore<K, A, S>(
    alphabet: Arc<Alphabet>,
    inits: Vec<K>,
    mut accept: A,
    mut succ: S,
) -> Result<(Nfa, Vec<K>), AutomataError>
where
    K: Hash + Eq + Clone,
    A: FnMut(&K) -> bool,
    S: FnMut(&K, &mut Vec<(Symbol, K)>),
{
    let cap = state_cap();
    let mut ids: HashMap<K, State> = HashMap::new();
    let mut keys: Vec<K> = Vec::new();
    let mut initial = Vec::new();
    for k in inits {
        let id = *ids.entry(k.clone()).or_insert_with(|| {
            keys.push(k);
            (keys.len() - 1) as State
        });
        initial.push(id);
    }
    let mut trans: Vec<Vec<(Symbol, State)>> = Vec::new();
    let mut acc = Vec::new();
    let mut buf = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        let k = keys[i].clone();
        acc.push(accept(&k));
        buf.clear();
        succ(&k, &mut buf);
        let mut out = Vec::with_capacity(buf.len());
        for (a, t) in buf.drain(..) {
            let id = match ids.get(&t) {
                Some(&id) => id,
                None => {
                    if keys.len() >= cap {
                        return Err(AutomataError::StateLimit(cap));
                    }
                    keys.push(t.clone());
                    let id = (keys.len() - 1) as State;
                    ids.insert(t, id);
                    id
                }
            };
            out.push((a, id));
        }
        trans.push(out);
        i += 1;
    }
    if keys.is_empty() {
        return Ok((Nfa::empty(alphabet), keys));
    }
    initial.sort_unstable();
    initial.dedup();
    let mut nfa = Nfa { alphabet, initial, accepting: acc, trans };
    nfa.normalize();
    Ok((nfa, keys))
}

/// Subset construction, bounded by `cap` states.
pub fn determinize(n: &Nfa, cap: usize) -> Result<Dfa, AutomataError> {
    if n.is_deterministic() {
        return Ok(Dfa::from_deterministic(n));
    }
    let mut ids: HashMap<Vec<State>, State> = HashMap::new();
    let mut sets: Vec<Vec<State>> = vec![n.initial.clone()];
    ids.insert(n.initial.clone(), 0);
    let k = n.alphabet.len();
    let mut delta: Vec<State> = Vec::new();
    let mut acc = Vec::new();
    let mut moves: Vec<(Symbol, State)> = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        let cur = std::mem::take(&mut sets[i]);
        acc.push(cur.iter().any(|&q| n.is_accepting(q)));
        delta.resize((i + 1) * k, NONE);
        moves.clear();
        for &q in &cur {
            moves.extend_from_slice(n.transitions(q));
        }
        moves.sort_unstable();
        moves.dedup();
        let mut j = 0;
        while j < moves.len() {
            let a = moves[j].0;
            let mut target = Vec::new();
            while j < moves.len() && moves[j].0 == a {
                target.push(moves[j].1);
                j += 1;
            }
            let id = match ids.get(&target) {
                Some(&id) => id,
                None => {
                    if sets.len() >= cap {
                        return Err(AutomataError::StateLimit(cap));
                    }
                    let id = sets.len() as State;
                    ids.insert(target.clone(), id);
                    sets.push(target);
                    id
                }
            };
            delta[i * k + a as usize] = id;
        }
        sets[i] = cur;
        i += 1;
    }
    Ok(Dfa { alphabet: n.alphabet.clone(), initial: 0, accepting: acc, delta })
}

/// Determinize with the global state cap.
pub fn to_dfa(n: &Nfa) -> Result<Dfa, AutomataError> {
    determinize(n, state_cap())
}

/// Determinize and minimize.
pub fn canonical(n: &Nfa) -> Result<Dfa, AutomataError> {
    Ok(minimize(&to_dfa(n)?))
}

/// Minimal trim partial DFA, states numbered in breadth-first order.
pub fn minimize(d: &Dfa) -> Dfa {
    let n = d.num_states();
    let k = d.alphabet.len();
    // trim: forward reachable and backward co-reachable
    let mut fwd = vec![false; n];
    let mut stack = vec![d.initial];
    fwd[d.initial as usize] = true;
    let mut rev: Vec<Vec<State>> = vec![Vec::new(); n];
    while let Some(q) = stack.pop() {
        for (_, t) in d.transitions(q) {
            rev[t as usize].push(q);
            if !fwd[t as usize] {
                fwd[t as usize] = true;
                stack.push(t);
            }
        }
    }
    let mut live = vec![false; n];
    let mut stack: Vec<State> = (0..n as State).filter(|&q| fwd[q as usize] && d.is_accepting(q)).collect();
    for &q in &stack {
        live[q as usize] = true;
    }
    while let Some(q) = stack.pop() {
        for &p in &rev[q as usize] {
            if !live[p as usize] {
                live[p as usize] = true;
                stack.push(p);
            }
        }
    }
    if !live[d.initial as usize] {
        return Dfa::empty(d.alphabet.clone());
    }
    let states: Vec<State> = (0..n as State).filter(|&q| live[q as usize]).collect();
    // Moore refinement; dead targets map to NONE
    let mut class = vec![NONE; n];
    for &q in &states {
        class[q as usize] = d.is_accepting(q) as State;
    }
    let mut count = {
        let any_acc = states.iter().any(|&q| d.is_accepting(q));
        let any_rej = states.iter().any(|&q| !d.is_accepting(q));
        any_acc as usize + any_rej as usize
    };
    loop {
        let mut sigs: HashMap<(State, Vec<(Symbol, State)>), State> = HashMap::new();
        let mut next = vec![NONE; n];
        for &q in &states {
            let sig: Vec<(Symbol, State)> = d
                .transitions(q)
                .filter(|&(_, t)| live[t as usize])
                .map(|(a, t)| (a, class[t as usize]))
                .collect();
            let len = sigs.len() as State;
            next[q as usize] = *sigs.entry((class[q as usize], sig)).or_insert(len);
        }
        let new_count = sigs.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    // quotient in BFS order from the initial class
    let mut order = vec![NONE; count];
    let mut rep = vec![NONE; count];
    for &q in &states {
        let c = class[q as usize] as usize;
        if rep[c] == NONE {
            rep[c] = q;
        }
    }
    let mut queue = VecDeque::new();
    let c0 = class[d.initial as usize];
    order[c0 as usize] = 0;
    queue.push_back(c0);
    let mut seq = vec![c0];
    while let Some(c) = queue.pop_front() {
        for (_, t) in d.transitions(rep[c as usize]) {
            if !live[t as usize] {
                continue;
            }
            let tc = class[t as usize];
            if order[tc as usize] == NONE {
                order[tc as usize] = seq.len() as State;
                seq.push(tc);
                queue.push_back(tc);
            }
        }
    }
    let m = seq.len();
    let mut delta = vec![NONE; m * k];
    let mut acc = vec![false; m];
    for (i, &c) in seq.iter().enumerate() {
        let r = rep[c as usize];
        acc[i] = d.is_accepting(r);
        for (a, t) in d.transitions(r) {
            if live[t as usize] {
                delta[i * k + a as usize] = order[class[t as usize] as usize];
            }
        }
    }
    Dfa { alphabet: d.alphabet.clone(), initial: 0, accepting: acc, delta }
}

/// Drop states not reachable from an initial state.
pub(crate) fn trim_reachable(n: &Nfa) -> Nfa {
    let mut map = vec![NONE; n.num_states()];
    let mut order = Vec::new();
    for &q in &n.initial {
        if map[q as usize] == NONE {
            map[q as usize] = order.len() as State;
            order.push(q);
        }
    }
    let mut i = 0;
    while i < order.len() {
        for &(_, t) in n.transitions(order[i]) {
            if map[t as usize] == NONE {
                map[t as usize] = order.len() as State;
                order.push(t);
            }
        }
        i += 1;
    }
    if order.is_empty() {
        return Nfa::empty(n.alphabet.clone());
    }
    let trans = order
        .iter()
        .map(|&q| n.transitions(q).iter().map(|&(a, t)| (a, map[t as usize])).collect())
        .collect();
    let mut out = Nfa {
        alphabet: n.alphabet.clone(),
        initial: n.initial.iter().map(|&q| map[q as usize]).collect(),
        accepting: order.iter().map(|&q| n.is_accepting(q)).collect(),
        trans,
    };
    out.initial.sort_unstable();
    out.normalize();
    out
}

/// Join the sorted transition lists of two states on equal symbols.
fn join<F: FnMut(Symbol, State, State)>(x: &[(Symbol, State)], y: &[(Symbol, State)], mut f: F) {
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        let (a, b) = (x[i].0, y[j].0);
        if a < b {
            i += 1;
        } else if b < a {
            j += 1;
        } else {
            let j0 = j;
            while i < x.len() && x[i].0 == a {
                j = j0;
                while j < y.len() && y[j].0 == a {
                    f(a, x[i].1, y[j].1);
                    j += 1;
                }
                i += 1;
            }
        }
    }
}

pub fn intersect(a: &Nfa, b: &Nfa) -> Result<Nfa, AutomataError> {
    same_alphabet(&a.alphabet, &b.alphabet)?;
    let inits = a.initial.iter().flat_map(|&p| b.initial.iter().map(move |&q| (p, q))).collect();
    let (nfa, _) = explore(
        a.alphabet.clone(),
        inits,
        |&(p, q)| a.is_accepting(p) && b.is_accepting(q),
        |&(p, q), out| join(a.transitions(p), b.transitions(q), |s, p2, q2| out.push((s, (p2, q2)))),
    )?;
    Ok(nfa)
}

pub fn union(a: &Nfa, b: &Nfa) -> Result<Nfa, AutomataError> {
    same_alphabet(&a.alphabet, &b.alphabet)?;
    let off = a.num_states() as State;
    let mut trans = a.trans.clone();
    trans.extend(b.trans.iter().map(|t| t.iter().map(|&(s, q)| (s, q + off)).collect()));
    let mut initial = a.initial.clone();
    initial.extend(b.initial.iter().map(|&q| q + off));
    let mut accepting = a.accepting.clone();
    accepting.extend_from_slice(&b.accepting);
    Ok(Nfa { alphabet: a.alphabet.clone(), initial, accepting, trans })
}

pub fn union_all(parts: &[Nfa]) -> Result<Nfa, AutomataError> {
    let mut it = parts.iter();
    let first = it.next().ok_or(AutomataError::EmptyUnion)?.clone();
    it.try_fold(first, |acc, p| union(&acc, p))
}

/// `universe ∖ d`.
pub fn complement(d: &Dfa, universe: &Dfa) -> Result<Dfa, AutomataError> {
    same_alphabet(&d.alphabet, &universe.alphabet)?;
    let (nfa, _) = explore(
        d.alphabet.clone(),
        vec![(universe.initial, d.initial)],
        |&(u, q)| universe.is_accepting(u) && (q == NONE || !d.is_accepting(q)),
        |&(u, q), out| {
            for (a, u2) in universe.transitions(u) {
                let q2 = if q == NONE { NONE } else { d.next(q, a).unwrap_or(NONE) };
                out.push((a, (u2, q2)));
            }
        },
    )?;
    Ok(Dfa::from_deterministic(&nfa))
}

/// Product of `a` with the determinization of `b`, accepting where `a` accepts
/// and `b` does not.
pub fn difference(a: &Nfa, b: &Nfa) -> Result<Nfa, AutomataError> {
    same_alphabet(&a.alphabet, &b.alphabet)?;
    let db = to_dfa(b)?;
    difference_dfa(a, &db)
}

pub fn difference_dfa(a: &Nfa, db: &Dfa) -> Result<Nfa, AutomataError> {
    same_alphabet(&a.alphabet, &db.alphabet)?;
    let inits = a.initial.iter().map(|&p| (p, db.initial)).collect();
    let (nfa, _) = explore(
        a.alphabet.clone(),
        inits,
        |&(p, q)| a.is_accepting(p) && (q == NONE || !db.is_accepting(q)),
        |&(p, q), out| {
            for &(s, p2) in a.transitions(p) {
                let q2 = if q == NONE { NONE } else { db.next(q, s).unwrap_or(NONE) };
                out.push((s, (p2, q2)));
            }
        },
    )?;
    Ok(nfa)
}

/// Backward distance (in letters) from each state to acceptance.
fn distances_to_accept(n: &Nfa) -> Vec<u32> {
    let mut rev: Vec<Vec<State>> = vec![Vec::new(); n.num_states()];
    for q in 0..n.num_states() as State {
        for &(_, t) in n.transitions(q) {
            rev[t as usize].push(q);
        }
    }
    let mut dist = vec![u32::MAX; n.num_states()];
    let mut queue = VecDeque::new();
    for q in 0..n.num_states() {
        if n.accepting[q] {
            dist[q] = 0;
            queue.push_back(q as State);
        }
    }
    while let Some(q) = queue.pop_front() {
        for &p in &rev[q as usize] {
            if dist[p as usize] == u32::MAX {
                dist[p as usize] = dist[q as usize] + 1;
                queue.push_back(p);
            }
        }
    }
    dist
}

/// `None` iff the language is empty; otherwise the shortest word, least in
/// alphabet order among those.
pub fn shortest_witness(n: &Nfa) -> Option<Word> {
    let dist = distances_to_accept(n);
    let mut d = n.initial.iter().map(|&q| dist[q as usize]).min()?;
    if d == u32::MAX {
        return None;
    }
    let mut cur: Vec<State> = n.initial.iter().copied().filter(|&q| dist[q as usize] == d).collect();
    let mut word = Vec::with_capacity(d as usize);
    while d > 0 {
        let best = cur
            .iter()
            .flat_map(|&q| n.transitions(q).iter())
            .filter(|&&(_, t)| dist[t as usize] == d - 1)
            .map(|&(a, _)| a)
            .min()
            .expect("distance labelling is consistent");
        let mut next: Vec<State> = cur
            .iter()
            .flat_map(|&q| n.on(q, best).iter().map(|&(_, t)| t))
            .filter(|&t| dist[t as usize] == d - 1)
            .collect();
        next.sort_unstable();
        next.dedup();
        word.push(best);
        cur = next;
        d -= 1;
    }
    Some(word)
}

pub fn is_empty(n: &Nfa) -> bool {
    shortest_witness(n).is_none()
}

/// `None` when `L(sub) ⊆ L(sup)`, otherwise the shortest-lex word of `L(sub) ∖ L(sup)`.
pub fn inclusion_witness(sup: &Nfa, sub: &Nfa) -> Result<Option<Word>, AutomataError> {
    Ok(shortest_witness(&difference(sub, sup)?))
}

pub fn inclusion_witness_dfa(sup: &Dfa, sub: &Nfa) -> Result<Option<Word>, AutomataError> {
    Ok(shortest_witness(&difference_dfa(sub, sup)?))
}

pub fn includes(sup: &Nfa, sub: &Nfa) -> Result<bool, AutomataError> {
    Ok(inclusion_witness(sup, sub)?.is_none())
}

/// Shortest-lex word in the symmetric difference, if any.
pub fn equivalence_witness(a: &Nfa, b: &Nfa) -> Result<Option<Word>, AutomataError> {
    let w1 = inclusion_witness(a, b)?;
    let w2 = inclusion_witness(b, a)?;
    Ok(match (w1, w2) {
        (Some(x), Some(y)) => Some(if (x.len(), &x) <= (y.len(), &y) { x } else { y }),
        (x, y) => x.or(y),
    })
}

pub fn equivalent(a: &Nfa, b: &Nfa) -> Result<bool, AutomataError> {
    Ok(equivalence_witness(a, b)?.is_none())
}

fn check_pairs(t: &Nfa, base: &Alphabet) -> Result<(), AutomataError> {
    if t.alphabet.tracks() != 2 || *t.alphabet.base() != *base {
        return Err(AutomataError::AlphabetMismatch);
    }
    Ok(())
}

/// Post-image `{ y : ∃x ∈ s. (x,y) ∈ t }`.
pub fn apply(t: &Nfa, s: &Nfa) -> Result<Nfa, AutomataError> {
    check_pairs(t, &s.alphabet)?;
    let b = s.alphabet.len() as Symbol;
    let inits = t.initial.iter().flat_map(|&p| s.initial.iter().map(move |&q| (p, q))).collect();
    let (nfa, _) = explore(
        s.alphabet.clone(),
        inits,
        |&(p, q)| t.is_accepting(p) && s.is_accepting(q),
        |&(p, q), out| {
            for &(sym, p2) in t.transitions(p) {
                let (x, y) = (sym / b, sym % b);
                for &(_, q2) in s.on(q, x) {
                    out.push((y, (p2, q2)));
                }
            }
        },
    )?;
    Ok(nfa)
}

/// Pre-image `{ x : ∃y ∈ s. (x,y) ∈ t }`.
pub fn preimage(t: &Nfa, s: &Nfa) -> Result<Nfa, AutomataError> {
    apply(&inverse(t), s)
}

/// Relation composition: `(x,z)` such that `(x,y) ∈ r1` and `(y,z) ∈ r2` for some `y`.
pub fn compose(r1: &Nfa, r2: &Nfa) -> Result<Nfa, AutomataError> {
    same_alphabet(&r1.alphabet, &r2.alphabet)?;
    if r1.alphabet.tracks() != 2 {
        return Err(AutomataError::AlphabetMismatch);
    }
    let b = r1.alphabet.base_len() as Symbol;
    let inits = r1.initial.iter().flat_map(|&p| r2.initial.iter().map(move |&q| (p, q))).collect();
    let (nfa, _) = explore(
        r1.alphabet.clone(),
        inits,
        |&(p, q)| r1.is_accepting(p) && r2.is_accepting(q),
        |&(p, q), out| {
            for &(s1, p2) in r1.transitions(p) {
                let (x, y) = (s1 / b, s1 % b);
                for &(s2, q2) in r2.in_range(q, y * b, y * b + b) {
                    out.push((x * b + s2 % b, (p2, q2)));
                }
            }
        },
    )?;
    Ok(nfa)
}

/// Existentially eliminate `track` (0-based) from a multi-track automaton.
pub fn project(t: &Nfa, track: usize) -> Result<Nfa, AutomataError> {
    let k = t.alphabet.tracks();
    if k < 2 || track >= k {
        return Err(AutomataError::BadTrack(track));
    }
    let base = t.alphabet.base();
    let target = Alphabet::tracks_of(&base, k - 1);
    let trans = t
        .trans
        .iter()
        .map(|ts| {
            ts.iter()
                .map(|&(s, q)| {
                    let mut parts = t.alphabet.split(s);
                    parts.remove(track);
                    (target.fuse(&parts), q)
                })
                .collect()
        })
        .collect();
    let mut out = Nfa { alphabet: target, initial: t.initial.clone(), accepting: t.accepting.clone(), trans };
    out.normalize();
    Ok(out)
}

pub fn domain(t: &Nfa) -> Result<Nfa, AutomataError> {
    project(t, 1)
}

pub fn range(t: &Nfa) -> Result<Nfa, AutomataError> {
    project(t, 0)
}

/// Swap the two tracks.
pub fn inverse(t: &Nfa) -> Nfa {
    let b = t.alphabet.base_len() as Symbol;
    let trans = t.trans.iter().map(|ts| ts.iter().map(|&(s, q)| ((s % b) * b + s / b, q)).collect()).collect();
    let mut out = Nfa { alphabet: t.alphabet.clone(), initial: t.initial.clone(), accepting: t.accepting.clone(), trans };
    out.normalize();
    out
}

/// Identity relation on `Σ*`.
pub fn identity(base: &Arc<Alphabet>) -> Nfa {
    let pairs = Alphabet::pairs(base);
    let b = base.len() as Symbol;
    let trans = vec![(0..b).map(|a| (a * b + a, 0)).collect()];
    Nfa { alphabet: pairs, initial: vec![0], accepting: vec![true], trans }
}

/// Identity relation restricted to `L(s)`.
pub fn identity_on(s: &Nfa) -> Nfa {
    let pairs = Alphabet::pairs(&s.alphabet);
    let b = s.alphabet.len() as Symbol;
    let trans = s.trans.iter().map(|ts| ts.iter().map(|&(a, q)| (a * b + a, q)).collect()).collect();
    Nfa { alphabet: pairs, initial: s.initial.clone(), accepting: s.accepting.clone(), trans }
}

/// `{ (x,y) : x ∈ a, y ∈ b, |x| = |y| }`.
pub fn cross(a: &Nfa, b: &Nfa) -> Result<Nfa, AutomataError> {
    same_alphabet(&a.alphabet, &b.alphabet)?;
    let pairs = Alphabet::pairs(&a.alphabet);
    let k = a.alphabet.len() as Symbol;
    let inits = a.initial.iter().flat_map(|&p| b.initial.iter().map(move |&q| (p, q))).collect();
    let (nfa, _) = explore(
        pairs,
        inits,
        |&(p, q)| a.is_accepting(p) && b.is_accepting(q),
        |&(p, q), out| {
            for &(x, p2) in a.transitions(p) {
                for &(y, q2) in b.transitions(q) {
                    out.push((x * k + y, (p2, q2)));
                }
            }
        },
    )?;
    Ok(nfa)
}

/// All `y` with `(x,y) ∈ t`, in lexicographic order.
pub fn image_of_word(t: &Nfa, x: &[Symbol]) -> Vec<Word> {
    let b = t.alphabet.base_len() as Symbol;
    let mut out = Vec::new();
    let mut y = Vec::with_capacity(x.len());
    fn go(t: &Nfa, x: &[Symbol], b: Symbol, cur: &[State], y: &mut Word, out: &mut Vec<Word>) {
        let i = y.len();
        if i == x.len() {
            if cur.iter().any(|&q| t.is_accepting(q)) {
                out.push(y.clone());
            }
            return;
        }
        let lo = x[i] * b;
        let mut moves: Vec<(Symbol, State)> =
            cur.iter().flat_map(|&q| t.in_range(q, lo, lo + b).iter().copied()).collect();
        moves.sort_unstable();
        moves.dedup();
        let mut j = 0;
        while j < moves.len() {
            let s = moves[j].0;
            let mut next = Vec::new();
            while j < moves.len() && moves[j].0 == s {
                next.push(moves[j].1);
                j += 1;
            }
            y.push(s % b);
            go(t, x, b, &next, y, out);
            y.pop();
        }
    }
    go(t, x, b, &t.initial, &mut y, &mut out);
    out
}

pub fn pair_accepts(t: &Nfa, x: &[Symbol], y: &[Symbol]) -> bool {
    x.len() == y.len() && t.accepts(&super::zip(&t.alphabet, x, y))
}

/// Concatenation `L(a)·L(b)`.
pub fn concat(a: &Nfa, b: &Nfa) -> Result<Nfa, AutomataError> {
    same_alphabet(&a.alphabet, &b.alphabet)?;
    let mut e = EpsNfa::new(a.alphabet.clone());
    let oa = e.embed(a);
    let ob = e.embed(b);
    for &q in &a.initial {
        e.set_initial(q + oa);
    }
    for q in 0..a.num_states() as State {
        if a.is_accepting(q) {
            e.set_accepting(q + oa, false);
            for &i in &b.initial {
                e.add_eps(q + oa, i + ob);
            }
        }
    }
    Ok(e.to_nfa())
}

/// Words of `L` rotated left by one letter: `{ v a : a v ∈ L }`.
pub fn rotate_once(l: &Nfa) -> Nfa {
    let mut e = EpsNfa::new(l.alphabet.clone());
    let fin = e.add_state();
    e.set_accepting(fin, true);
    if l.initial.iter().any(|&q| l.is_accepting(q)) {
        e.set_initial(fin);
    }
    for a in l.alphabet.symbols() {
        let starts = l.step(&l.initial, a);
        if starts.is_empty() {
            continue;
        }
        let off = e.embed(l);
        for q in 0..l.num_states() as State {
            e.set_accepting(q + off, false);
            if l.is_accepting(q) {
                e.add(q + off, a, fin);
            }
        }
        for s in starts {
            e.set_initial(s + off);
        }
    }
    e.to_nfa()
}

/// `{ v u : u v ∈ L }`, determinized and minimized.
pub fn cyclic_shift_closure(s: &Nfa) -> Result<Dfa, AutomataError> {
    let s = trim_reachable(s);
    let mut e = EpsNfa::new(s.alphabet.clone());
    for q in 0..s.num_states() as State {
        // suffix part: q → accepting, then prefix part: initial → q
        let suf = e.embed(&s);
        let pre = e.embed(&s);
        e.set_initial(q + suf);
        for p in 0..s.num_states() as State {
            if s.is_accepting(p) {
                for &i in &s.initial {
                    e.add_eps(p + suf, i + pre);
                }
            }
            e.set_accepting(p + suf, false);
            e.set_accepting(p + pre, p == q);
        }
    }
    canonical(&e.to_nfa())
}

/// Number of accepted words of length `n`.
pub fn count_words(d: &Dfa, n: usize) -> u128 {
    let mut ways = vec![0u128; d.num_states()];
    for q in 0..d.num_states() {
        ways[q] = d.accepting[q] as u128;
    }
    for _ in 0..n {
        let mut next = vec![0u128; d.num_states()];
        for q in 0..d.num_states() as State {
            next[q as usize] = d.transitions(q).map(|(_, t)| ways[t as usize]).fold(0u128, u128::saturating_add);
        }
        ways = next;
    }
    ways[d.initial as usize]
}

/// Accepted words of length `n`, in lexicographic order.
pub fn words_of_length(d: &Dfa, n: usize) -> Vec<Word> {
    // states from which an accepted completion of each remaining length exists
    let mut ok = vec![vec![false; d.num_states()]; n + 1];
    for q in 0..d.num_states() {
        ok[0][q] = d.accepting[q];
    }
    for r in 1..=n {
        for q in 0..d.num_states() as State {
            ok[r][q as usize] = d.transitions(q).any(|(_, t)| ok[r - 1][t as usize]);
        }
    }
    let mut out = Vec::new();
    let mut w = Vec::with_capacity(n);
    fn go(d: &Dfa, ok: &[Vec<bool>], q: State, w: &mut Word, n: usize, out: &mut Vec<Word>) {
        let r = n - w.len();
        if !ok[r][q as usize] {
            return;
        }
        if r == 0 {
            out.push(w.clone());
            return;
        }
        for (a, t) in d.transitions(q) {
            w.push(a);
            go(d, ok, t, w, n, out);
            w.pop();
        }
    }
    go(d, &ok, d.initial, &mut w, n, &mut out);
    out
}

/// All words over the alphabet of exactly length `n`, lexicographic.
pub fn all_words(k: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w: Word| {
                (0..k as Symbol).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// Restrict to words of length at least `n`.
pub fn min_length(a: &Nfa, n: usize) -> Result<Nfa, AutomataError> {
    let (nfa, _) = explore(
        a.alphabet.clone(),
        a.initial.iter().map(|&q| (q, 0usize)).collect(),
        |&(q, i)| i >= n && a.is_accepting(q),
        |&(q, i), out| {
            for &(s, t) in a.transitions(q) {
                out.push((s, (t, (i + 1).min(n))));
            }
        },
    )?;
    Ok(nfa)
}
