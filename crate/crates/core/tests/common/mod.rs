#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;

use regliveness::automata::{Alphabet, Dfa, Nfa, Symbol, Word};

pub fn alphabet(k: usize) -> Arc<Alphabet> {
    let names: Vec<String> = (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    Alphabet::new(&names).unwrap()
}

pub fn words(k: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * k);
        for w in &out {
            for a in 0..k as Symbol {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

pub fn words_upto(k: usize, n: usize) -> Vec<Word> {
    (0..=n).flat_map(|m| words(k, m)).collect()
}

/// Subset simulation written against the raw transition lists.
pub fn nfa_accepts(n: &Nfa, w: &[Symbol]) -> bool {
    let mut cur: BTreeSet<u32> = n.initial().iter().copied().collect();
    for &a in w {
        cur = cur.iter().flat_map(|&q| n.transitions(q).iter().filter(|t| t.0 == a).map(|t| t.1)).collect();
    }
    cur.iter().any(|&q| n.is_accepting(q))
}

pub fn dfa_accepts(d: &Dfa, w: &[Symbol]) -> bool {
    let mut q = d.initial();
    for &a in w {
        match d.next(q, a) {
            Some(t) => q = t,
            None => return false,
        }
    }
    d.is_accepting(q)
}

pub fn lang_nfa(n: &Nfa, maxlen: usize) -> BTreeSet<Word> {
    words_upto(n.alphabet().len(), maxlen).into_iter().filter(|w| nfa_accepts(n, w)).collect()
}

pub fn lang_dfa(d: &Dfa, maxlen: usize) -> BTreeSet<Word> {
    words_upto(d.alphabet().len(), maxlen).into_iter().filter(|w| dfa_accepts(d, w)).collect()
}

/// Fused pair symbol.
pub fn pair(k: usize, a: Symbol, b: Symbol) -> Symbol {
    a * k as Symbol + b
}

pub fn zip(k: usize, x: &[Symbol], y: &[Symbol]) -> Word {
    x.iter().zip(y).map(|(&a, &b)| pair(k, a, b)).collect()
}

pub fn arb_nfa(alpha: Arc<Alphabet>, max_states: usize) -> impl Strategy<Value = Nfa> {
    let k = alpha.len();
    (1..=max_states).prop_flat_map(move |n| {
        let alpha = alpha.clone();
        (
            proptest::collection::vec(0..n as u32, 1..=2),
            proptest::collection::vec((0..n as u32, 0..k as u32, 0..n as u32), 0..=n * k * 2),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(init, trans, acc)| {
                let acc: Vec<u32> = (0..n as u32).filter(|&q| acc[q as usize]).collect();
                Nfa::from_parts(alpha.clone(), n, init, trans, acc).unwrap()
            })
    })
}

pub fn arb_dfa(alpha: Arc<Alphabet>, max_states: usize) -> impl Strategy<Value = Dfa> {
    let k = alpha.len();
    (1..=max_states).prop_flat_map(move |n| {
        let alpha = alpha.clone();
        (
            proptest::collection::vec(proptest::option::weighted(0.8, 0..n as u32), n * k),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(delta, acc)| {
                let trans = (0..n * k).filter_map(|i| delta[i].map(|t| ((i / k) as u32, (i % k) as u32, t)));
                let acc: Vec<u32> = (0..n as u32).filter(|&q| acc[q as usize]).collect();
                Dfa::from_parts(alpha.clone(), n, 0, trans, acc).unwrap()
            })
    })
}

/// Random NFA with the same shape distribution as [`arb_nfa`].
pub fn random_nfa<R: Rng>(rng: &mut R, alpha: &Arc<Alphabet>, max_states: usize) -> Nfa {
    let k = alpha.len();
    let n = rng.gen_range(1..=max_states);
    let init: Vec<u32> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(0..n as u32)).collect();
    let trans: Vec<(u32, u32, u32)> = (0..rng.gen_range(0..=n * k * 2))
        .map(|_| (rng.gen_range(0..n as u32), rng.gen_range(0..k as u32), rng.gen_range(0..n as u32)))
        .collect();
    let acc: Vec<u32> = (0..n as u32).filter(|_| rng.gen_bool(0.4)).collect();
    Nfa::from_parts(alpha.clone(), n, init, trans, acc).unwrap()
}

pub fn random_dfa<R: Rng>(rng: &mut R, alpha: &Arc<Alphabet>, max_states: usize) -> Dfa {
    let k = alpha.len();
    let n = rng.gen_range(1..=max_states);
    let mut trans = Vec::new();
    for q in 0..n as u32 {
        for a in 0..k as u32 {
            if rng.gen_bool(0.8) {
                trans.push((q, a, rng.gen_range(0..n as u32)));
            }
        }
    }
    let acc: Vec<u32> = (0..n as u32).filter(|_| rng.gen_bool(0.4)).collect();
    Dfa::from_parts(alpha.clone(), n, 0, trans, acc).unwrap()
}
