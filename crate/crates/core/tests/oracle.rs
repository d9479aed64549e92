mod common;

use std::collections::BTreeSet;

use regliveness::automata::{self, Word};
use regliveness::model::builtin::builtin_source;
use regliveness::model::{builtin, parse_model, GameInstance, BUILTIN_NAMES};
use regliveness::oracle::{agreement, attractor, expand, hereditary, mdp_check, ExplicitInstance, MdpOptions, Oracle, Player};

fn w(g: &GameInstance, s: &str) -> Word {
    g.alphabet.parse_word(s).unwrap()
}

/// Attractor by naive iteration to a fixpoint.
fn naive_attractor(e: &ExplicitInstance) -> Vec<bool> {
    let mut win = e.target.clone();
    loop {
        let next: Vec<bool> = (0..e.len())
            .map(|c| {
                win[c]
                    || match e.owner[c] {
                        Player::One => e.successors(c).iter().all(|&d| win[d as usize]),
                        Player::Two => e.successors(c).iter().any(|&d| win[d as usize]),
                    }
            })
            .collect();
        if next == win {
            return win;
        }
        win = next;
    }
}

/// Forward closure from the initial configurations, by repeated sweeps.
fn naive_reachable(e: &ExplicitInstance) -> Vec<bool> {
    let mut seen = e.initial.clone();
    loop {
        let mut changed = false;
        for c in 0..e.len() {
            if seen[c] {
                for d in e.all_successors(c) {
                    changed |= !seen[d];
                    seen[d] = true;
                }
            }
        }
        if !changed {
            return seen;
        }
    }
}

#[test]
fn flip_length_two_configurations() {
    let g = builtin("flip").unwrap();
    let e = expand(&g, 2, 1000).unwrap();
    let got: BTreeSet<String> = e.configs.iter().map(|c| g.alphabet.render(c)).collect();
    let want: BTreeSet<String> =
        ["0 0", "0 1", "1 0", "1 1", "0^ 0", "0 0^", "0^ 1", "1 0^"].iter().map(|s| s.to_string()).collect();
    assert_eq!(got, want);
    assert_eq!(e.len(), 8);
}

#[test]
fn israeli_jalfon_length_three_by_enumeration() {
    let g = builtin("israeli-jalfon").unwrap();
    let e = expand(&g, 3, 1000).unwrap();
    // at least one token, or exactly one marked token and no constraint on the rest
    let expected: Vec<Word> = common::words(3, 3)
        .into_iter()
        .filter(|x| {
            let hats = x.iter().filter(|&&a| a == 2).count();
            hats == 1 || (hats == 0 && x.contains(&1))
        })
        .collect();
    assert_eq!(e.configs, expected);
    assert_eq!(e.configs.iter().filter(|x| !x.contains(&2)).count(), 7);
    assert_eq!(e.len(), 19);
}

#[test]
fn empty_length() {
    let g = builtin("flip").unwrap();
    let e = expand(&g, 0, 10).unwrap();
    assert!(e.is_empty());
    assert!(attractor(&e).is_empty());
}

#[test]
fn cap_is_enforced() {
    let g = builtin("flip").unwrap();
    assert!(expand(&g, 8, 100).is_err());
}

#[test]
fn attractor_matches_naive_fixpoint() {
    for &name in BUILTIN_NAMES {
        let g = builtin(name).unwrap();
        let top = if name == "lehmann-rabin" || name == "nim" { 3 } else { 6 };
        for n in 1..=top {
            let e = expand(&g, n, 1 << 20).unwrap();
            assert_eq!(attractor(&e), naive_attractor(&e), "{name} n={n}");
            assert_eq!(e.reachable(), naive_reachable(&e), "{name} n={n}");
        }
    }
}

#[test]
fn flip_length_three_all_winning() {
    let g = builtin("flip").unwrap();
    let e = expand(&g, 3, 1000).unwrap();
    assert!(attractor(&e).iter().all(|&x| x));
    assert!(mdp_check(&e, MdpOptions::default()).unwrap().iter().all(|&x| x));
}

#[test]
fn take_away_multiples_of_four() {
    let g = builtin("take-away").unwrap();
    for pile in 0..=12usize {
        let e = expand(&g, pile + 1, 1 << 20).unwrap();
        let win = attractor(&e);
        let word: Word = std::iter::once(0).chain(std::iter::repeat(2).take(pile)).collect();
        assert_eq!(win[e.index_of(&word).unwrap()], pile % 4 == 0, "pile {pile}");
    }
}

#[test]
fn reachability_examples() {
    let ij = Oracle::new(builtin("israeli-jalfon").unwrap());
    let g = ij.game().clone();
    assert!(ij.reachable(&w(&g, "1010")).unwrap());
    assert!(!ij.reachable(&w(&g, "0000")).unwrap());
    let flip = Oracle::new(builtin("flip").unwrap());
    let f = flip.game().clone();
    assert!(flip.reachable(&w(&f, "11")).unwrap());
    assert!(flip.reachable(&w(&f, "0^1")).unwrap());
}

#[test]
fn oracle_reachability_matches_explicit_instance() {
    for name in ["flip", "israeli-jalfon", "herman-line", "take-away"] {
        let o = Oracle::new(builtin(name).unwrap());
        for n in 1..=5 {
            let e = expand(o.game(), n, 1 << 20).unwrap();
            let reach = e.reachable();
            let want: Vec<Word> = (0..e.len()).filter(|&c| reach[c]).map(|c| e.configs[c].clone()).collect();
            assert_eq!(o.reachable_words(n).unwrap(), want, "{name} n={n}");
        }
    }
}

#[test]
fn reachable_set_is_closed() {
    let g = builtin("herman-line").unwrap();
    for n in 1..=6 {
        let e = expand(&g, n, 1 << 20).unwrap();
        let reach = e.reachable();
        for c in (0..e.len()).filter(|&c| reach[c]) {
            assert!(e.all_successors(c).all(|d| reach[d]));
        }
    }
}

#[test]
fn stalling_process_is_still_almost_sure() {
    let src = builtin_source("flip").unwrap().replace("0^/1", "(0^/1|0^/0)");
    let g = parse_model("stall", &src).unwrap();
    for n in 1..=4 {
        let e = expand(&g, n, 1000).unwrap();
        let win = attractor(&e);
        let sure = mdp_check(&e, MdpOptions::default()).unwrap();
        assert_eq!(win, sure, "n={n}");
        assert!(win.iter().all(|&x| x));
        assert_eq!(agreement(&e, MdpOptions::default()).unwrap().direct_disagreements, 0);
    }
}

/// `a` hands over to a random `d` that may fall into the trap `z ⇄ y`.
const TRAP: &str = "
alphabet: a, d, t, z, y;
initial: a;
final: t;
player1: a/d | z/y;
player2: d/t | d/z | y/z;
";

#[test]
fn hereditary_form_resolves_random_blunders() {
    let g = parse_model("trap", TRAP).unwrap();
    let e = expand(&g, 1, 10).unwrap();
    let at = |s: &str| e.index_of(&w(&g, s)).unwrap();
    let win = attractor(&e);
    let sure = mdp_check(&e, MdpOptions::default()).unwrap();
    assert!(win[at("a")] && win[at("d")]);
    assert!(!win[at("z")]);
    assert!(!sure[at("a")] && !sure[at("d")] && !sure[at("z")]);
    let safe = hereditary(&e, &win);
    assert!(!safe[at("a")]);
    let agr = agreement(&e, MdpOptions::default()).unwrap();
    // a, z and the target t
    assert_eq!(agr.checked, 3);
    assert_eq!(agr.disagreements, 0);
    assert_eq!(agr.direct_disagreements, 1);
}

#[test]
fn scheduler_cycle_is_not_almost_sure() {
    let src = "
alphabet: a, b, c, t;
initial: a;
final: t;
player1: a/b | a/c;
player2: b/a | b/t | c/a;
";
    let g = parse_model("cycle", src).unwrap();
    let e = expand(&g, 1, 10).unwrap();
    let a = e.index_of(&w(&g, "a")).unwrap();
    assert!(!attractor(&e)[a]);
    assert!(!mdp_check(&e, MdpOptions::default()).unwrap()[a]);
    let agr = agreement(&e, MdpOptions::default()).unwrap();
    assert_eq!((agr.disagreements, agr.direct_disagreements), (0, 0));
    assert!(!agr.all_reachable_winning);
}

#[test]
fn protocols_agree_in_both_forms() {
    for name in ["flip", "israeli-jalfon", "herman-line"] {
        let g = builtin(name).unwrap();
        for n in 1..=6 {
            let e = expand(&g, n, 1 << 20).unwrap();
            let a = agreement(&e, MdpOptions::default()).unwrap();
            assert!(a.all_reachable_winning, "{name} n={n}");
            assert_eq!((a.disagreements, a.direct_disagreements), (0, 0), "{name} n={n}");
        }
    }
}

#[test]
fn oracle_instances_are_shared() {
    let o = Oracle::new(builtin("flip").unwrap());
    let a = o.instance(3).unwrap();
    let b = o.instance(3).unwrap();
    assert!(std::sync::Arc::ptr_eq(&a, &b));
    assert_eq!(automata::count_words(&o.game().states, 3) as usize, a.len());
}
