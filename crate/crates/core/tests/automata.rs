mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::*;
use regliveness::automata::{self, Alphabet, Dfa, Nfa, Word};
use regliveness::model::{builtin, parse_language};

fn set(alpha: &std::sync::Arc<Alphabet>, re: &str) -> Dfa {
    parse_language(alpha, re, false).unwrap()
}

fn rel(alpha: &std::sync::Arc<Alphabet>, re: &str) -> Dfa {
    parse_language(alpha, re, true).unwrap()
}

fn parse_all(alpha: &Alphabet, ws: &[&str]) -> BTreeSet<Word> {
    ws.iter().map(|w| alpha.parse_word(w).unwrap()).collect()
}

fn bits() -> std::sync::Arc<Alphabet> {
    Alphabet::new(&["0", "1"]).unwrap()
}

#[test]
fn determinize_ends_in_one() {
    let a = bits();
    let n = Nfa::from_parts(a.clone(), 2, [0], [(0, 0, 0), (0, 1, 0), (0, 1, 1)], [1]).unwrap();
    let d = automata::to_dfa(&n).unwrap();
    assert_eq!(d.num_states(), 2);
    assert_eq!(lang_dfa(&d, 6), lang_nfa(&n, 6));
}

#[test]
fn determinize_without_accepting_states() {
    let n = Nfa::from_parts(bits(), 2, [0], [(0, 0, 1), (1, 1, 0)], []).unwrap();
    let d = automata::to_dfa(&n).unwrap();
    assert!(lang_dfa(&d, 6).is_empty());
    assert!(automata::is_empty(&d.to_nfa()));
}

#[test]
fn flip_process_move_from_marked_coin() {
    let g = builtin("flip").unwrap();
    let src = Nfa::from_words(g.alphabet.clone(), &[g.alphabet.parse_word("0^").unwrap()]);
    let img = automata::canonical(&automata::apply(&g.move2, &src).unwrap()).unwrap();
    let want: BTreeSet<Word> = words_upto(3, 1).into_iter().filter(|w| w.len() == 1 && w[0] == 1).collect();
    assert_eq!(lang_dfa(&img, 4), want);
}

#[test]
fn minimize_collapses_duplicate_state() {
    // 0*1 with the 0-loop split over two equivalent states
    let d = Dfa::from_parts(bits(), 3, 0, [(0, 0, 1), (1, 0, 0), (0, 1, 2), (1, 1, 2)], [2]).unwrap();
    let m = automata::minimize(&d);
    assert_eq!(m.num_states(), 2);
    assert_eq!(lang_dfa(&m, 6), lang_dfa(&d, 6));
    assert!(automata::minimize(&m).same_structure(&m));
}

#[test]
fn israeli_jalfon_universe_has_three_states() {
    let g = builtin("israeli-jalfon").unwrap();
    let m = automata::minimize(&g.states);
    assert_eq!(m.num_states(), 3);
    for w in words_upto(3, 6) {
        let tokens = w.iter().filter(|&&s| s == 1).count();
        let hats = w.iter().filter(|&&s| s == 2).count();
        let want = (hats == 0 && tokens >= 1) || hats == 1;
        assert_eq!(dfa_accepts(&m, &w), want, "{w:?}");
    }
}

#[test]
fn boolean_operation_examples() {
    let a = bits();
    let zeros = set(&a, "0*").to_nfa();
    let ones = set(&a, "1*").to_nfa();
    let both = automata::intersect(&zeros, &ones).unwrap();
    assert_eq!(lang_nfa(&both, 5), BTreeSet::from([vec![]]));

    let f = set(&a, "1 1*");
    let universe = set(&a, "(0|1)+");
    let c = automata::complement(&f, &universe).unwrap();
    for w in words_upto(2, 6) {
        assert_eq!(dfa_accepts(&c, &w), w.contains(&0), "{w:?}");
    }
}

#[test]
fn shortest_witness_examples() {
    let a = bits();
    assert_eq!(automata::shortest_witness(&Nfa::empty(a.clone())), None);
    assert_eq!(automata::shortest_witness(&set(&a, "(0|1)*1").to_nfa()), Some(vec![1]));
    let i0 = set(&a, "0 0*");
    let cand = set(&a, "1 (0|1)*");
    assert_eq!(automata::inclusion_witness_dfa(&cand, &i0.to_nfa()).unwrap(), Some(vec![0]));
}

#[test]
fn apply_examples() {
    let g = builtin("flip").unwrap();
    let al = &g.alphabet;
    let src = Nfa::from_words(al.clone(), &[al.parse_word("00").unwrap()]);
    let img = automata::canonical(&automata::apply(&g.move1, &src).unwrap()).unwrap();
    assert_eq!(lang_dfa(&img, 3), parse_all(al, &["0^ 0", "0 0^"]));

    let s = g.states.to_nfa();
    let same = automata::apply(&automata::identity(al), &s).unwrap();
    assert!(automata::equivalent(&same, &s).unwrap());

    let ij = builtin("israeli-jalfon").unwrap();
    let x = ij.alphabet.parse_word("1^ 1 0").unwrap();
    let got = automata::canonical(&automata::apply(&ij.move2, &Nfa::from_words(ij.alphabet.clone(), &[x.clone()])).unwrap())
        .unwrap();
    let brute: BTreeSet<Word> =
        words(3, 3).into_iter().filter(|y| nfa_accepts(&ij.move2, &zip(3, &x, y))).collect();
    assert_eq!(lang_dfa(&got, 3), brute);
    assert_eq!(brute, parse_all(&ij.alphabet, &["0 1 0", "0 1 1"]));
}

#[test]
fn compose_examples() {
    let a = bits();
    let r = rel(&a, "(0/0|1/1)* 0/1 (0/0|1/1|0/1)*").to_nfa();
    let id = automata::identity(&a);
    assert!(automata::equivalent(&automata::compose(&id, &r).unwrap(), &r).unwrap());

    let le = rel(&a, "(0/0|1/1|0/1)*").to_nfa();
    assert!(automata::includes(&le, &automata::compose(&le, &le).unwrap()).unwrap());

    let h1 = rel(&a, "(0/0|1/1)* (0/1|1/0) (0/0|1/1)*");
    let twice = automata::compose(&h1.to_nfa(), &h1.to_nfa()).unwrap();
    // flipping one bit twice may restore it, so the shortest escape is (0, 0)
    let w = automata::inclusion_witness_dfa(&h1, &twice).unwrap().unwrap();
    assert_eq!(automata::unzip(h1.alphabet(), &w), (vec![0], vec![0]));
    let two_flips = zip(2, &[0, 0], &[1, 1]);
    assert!(nfa_accepts(&twice, &two_flips) && !dfa_accepts(&h1, &two_flips));
}

#[test]
fn projection_examples() {
    let g = builtin("flip").unwrap();
    let dom = automata::canonical(&automata::domain(&g.move1).unwrap()).unwrap();
    let rng = automata::canonical(&automata::range(&g.move1).unwrap()).unwrap();
    for w in words_upto(3, 4) {
        let unmarked = !w.contains(&2);
        assert_eq!(dfa_accepts(&dom, &w), unmarked && w.contains(&0), "{w:?}");
        assert_eq!(dfa_accepts(&rng, &w), w.iter().filter(|&&s| s == 2).count() == 1, "{w:?}");
    }
    let empty = Nfa::empty(g.pairs().clone());
    assert!(automata::is_empty(&automata::project(&empty, 0).unwrap()));
}

#[test]
fn cyclic_shift_examples() {
    let ij = builtin("israeli-jalfon").unwrap();
    let al = &ij.alphabet;
    let one = Nfa::from_words(al.clone(), &[al.parse_word("1 0 0").unwrap()]);
    let c = automata::cyclic_shift_closure(&one).unwrap();
    assert_eq!(lang_dfa(&c, 4), parse_all(al, &["100", "001", "010"]));

    let all = Nfa::universal(al.clone());
    assert!(automata::equivalent(&automata::cyclic_shift_closure(&all).unwrap().to_nfa(), &all).unwrap());

    let b = bits();
    let two = Nfa::from_words(b.clone(), &[vec![0, 1], vec![0, 0, 1, 1]]);
    let c = automata::cyclic_shift_closure(&two).unwrap();
    assert_eq!(lang_dfa(&c, 5), parse_all(&b, &["01", "10", "0011", "0110", "1100", "1001"]));
}

#[test]
fn state_cap_is_reported() {
    let a = bits();
    // (0|1)* 1 (0|1)^11 needs 2^12 subset states
    let mut trans = vec![(0, 0, 0), (0, 1, 0), (0, 1, 1)];
    for q in 1..12 {
        trans.push((q, 0, q + 1));
        trans.push((q, 1, q + 1));
    }
    let n = Nfa::from_parts(a, 13, [0], trans, [12]).unwrap();
    assert!(matches!(automata::determinize(&n, 100), Err(automata::AutomataError::StateLimit(100))));
    assert!(automata::determinize(&n, 10_000).is_ok());
}

fn shortest_lex(l: &BTreeSet<Word>) -> Option<Word> {
    l.iter().min_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b))).cloned()
}

fn arb_pair() -> impl Strategy<Value = (Nfa, Nfa)> {
    (1..=4usize).prop_flat_map(|k| (arb_nfa(alphabet(k), 6), arb_nfa(alphabet(k), 6)))
}

fn maxlen(k: usize) -> usize {
    if k >= 4 {
        6
    } else {
        7
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn determinize_and_minimize_preserve_language(n in (1..=4usize).prop_flat_map(|k| arb_nfa(alphabet(k), 6))) {
        let m = maxlen(n.alphabet().len());
        let d = automata::to_dfa(&n).unwrap();
        let min = automata::minimize(&d);
        let want = lang_nfa(&n, m);
        prop_assert_eq!(&lang_dfa(&d, m), &want);
        prop_assert_eq!(&lang_dfa(&min, m), &want);
        prop_assert!(min.num_states() <= d.num_states());
        prop_assert!(automata::minimize(&min).same_structure(&min));
        prop_assert!(automata::canonical(&min.to_nfa()).unwrap().same_structure(&min));
    }

    #[test]
    fn boolean_operations_match_sets((a, b) in arb_pair()) {
        let m = maxlen(a.alphabet().len());
        let (la, lb) = (lang_nfa(&a, m), lang_nfa(&b, m));
        let inter = automata::intersect(&a, &b).unwrap();
        let uni = automata::union(&a, &b).unwrap();
        let diff = automata::difference(&a, &b).unwrap();
        prop_assert_eq!(lang_nfa(&inter, m), la.intersection(&lb).cloned().collect::<BTreeSet<_>>());
        prop_assert_eq!(lang_nfa(&uni, m), la.union(&lb).cloned().collect::<BTreeSet<_>>());
        prop_assert_eq!(lang_nfa(&diff, m), la.difference(&lb).cloned().collect::<BTreeSet<_>>());
        let da = automata::to_dfa(&a).unwrap();
        let universe = Dfa::universal(a.alphabet().clone());
        let comp = automata::complement(&da, &universe).unwrap();
        let all: BTreeSet<Word> = words_upto(a.alphabet().len(), m).into_iter().collect();
        prop_assert_eq!(lang_dfa(&comp, m), all.difference(&la).cloned().collect::<BTreeSet<_>>());
    }

    #[test]
    fn witnesses_are_shortest_lex((a, b) in arb_pair()) {
        // every nonempty language over ≤ 6 states has a word of length < 6
        let m = 6;
        let la = lang_nfa(&a, m);
        prop_assert_eq!(automata::shortest_witness(&a), shortest_lex(&la));
        let lb = lang_nfa(&b, m);
        let diff: BTreeSet<Word> = lb.difference(&la).cloned().collect();
        let got = automata::inclusion_witness(&a, &b).unwrap();
        match shortest_lex(&diff) {
            Some(w) => prop_assert_eq!(got, Some(w)),
            None => {
                // a difference can hide beyond the enumeration bound
                if let Some(w) = got {
                    prop_assert!(w.len() > m && nfa_accepts(&b, &w) && !nfa_accepts(&a, &w));
                }
            }
        }
        prop_assert_eq!(automata::includes(&a, &b).unwrap(), automata::inclusion_witness(&a, &b).unwrap().is_none());
    }

    #[test]
    fn apply_matches_enumeration(
        (s, t) in (1..=3usize).prop_flat_map(|k| (arb_nfa(alphabet(k), 5), arb_nfa(Alphabet::pairs(&alphabet(k)), 5)))
    ) {
        let k = s.alphabet().len();
        let img = automata::apply(&t, &s).unwrap();
        for n in 0..=4 {
            let xs: Vec<Word> = words(k, n).into_iter().filter(|x| nfa_accepts(&s, x)).collect();
            for y in words(k, n) {
                let want = xs.iter().any(|x| nfa_accepts(&t, &zip(k, x, &y)));
                prop_assert_eq!(nfa_accepts(&img, &y), want);
            }
        }
    }

    #[test]
    fn compose_matches_enumeration_and_associates(
        (r1, r2, r3) in (1..=2usize).prop_flat_map(|k| {
            let p = Alphabet::pairs(&alphabet(k));
            (arb_nfa(p.clone(), 4), arb_nfa(p.clone(), 4), arb_nfa(p, 4))
        })
    ) {
        let k = r1.alphabet().base_len();
        let c = automata::compose(&r1, &r2).unwrap();
        for n in 0..=4 {
            let ws = words(k, n);
            for x in &ws {
                for z in &ws {
                    let want = ws.iter().any(|y| nfa_accepts(&r1, &zip(k, x, y)) && nfa_accepts(&r2, &zip(k, y, z)));
                    prop_assert_eq!(nfa_accepts(&c, &zip(k, x, z)), want);
                }
            }
        }
        let left = automata::compose(&c, &r3).unwrap();
        let right = automata::compose(&r1, &automata::compose(&r2, &r3).unwrap()).unwrap();
        prop_assert_eq!(lang_nfa(&left, 5), lang_nfa(&right, 5));
    }

    #[test]
    fn projections_match_enumeration(
        t in (1..=3usize).prop_flat_map(|k| arb_nfa(Alphabet::pairs(&alphabet(k)), 5))
    ) {
        let k = t.alphabet().base_len();
        let dom = automata::domain(&t).unwrap();
        let ran = automata::range(&t).unwrap();
        for n in 0..=4 {
            let ws = words(k, n);
            for x in &ws {
                prop_assert_eq!(nfa_accepts(&dom, x), ws.iter().any(|y| nfa_accepts(&t, &zip(k, x, y))));
                prop_assert_eq!(nfa_accepts(&ran, x), ws.iter().any(|y| nfa_accepts(&t, &zip(k, y, x))));
            }
        }
    }

    #[test]
    fn rotations_match_enumeration(n in (1..=3usize).prop_flat_map(|k| arb_nfa(alphabet(k), 5))) {
        let k = n.alphabet().len();
        let m = 6;
        let l = lang_nfa(&n, m);
        let once = automata::rotate_once(&n);
        let closure = automata::cyclic_shift_closure(&n).unwrap();
        let mut want_once = BTreeSet::new();
        let mut want_all = BTreeSet::new();
        for w in &l {
            if w.is_empty() {
                want_once.insert(w.clone());
                want_all.insert(w.clone());
                continue;
            }
            let mut r = w.clone();
            r.rotate_left(1);
            want_once.insert(r);
            for i in 0..w.len() {
                let mut r = w.clone();
                r.rotate_left(i);
                want_all.insert(r);
            }
        }
        prop_assert_eq!(lang_nfa(&once, m), want_once);
        prop_assert_eq!(lang_dfa(&closure, m), want_all);
        let again = automata::rotate_once(&closure.to_nfa());
        prop_assert!(automata::equivalent(&again, &closure.to_nfa()).unwrap());
        let _ = k;
    }

    #[test]
    fn dumps_round_trip(d in (1..=4usize).prop_flat_map(|k| arb_dfa(alphabet(k), 6))) {
        let text = automata::write_dump(&d);
        let back = automata::parse_dump(&text).unwrap();
        prop_assert_eq!(automata::write_dump(&back), text);
        prop_assert_eq!(lang_dfa(&back, 5), lang_dfa(&d, 5));
    }
}
