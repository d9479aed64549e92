mod common;

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use regliveness::automata::{Dfa, Symbol, Word};
use regliveness::cegar::post2;
use regliveness::model::{builtin, GameInstance};
use regliveness::synth::{shape_schedule, Encoder, Fact, Outcome, Shape};
use regliveness::verify::check_l3;

fn w(g: &GameInstance, s: &str) -> Word {
    g.alphabet.parse_word(s).unwrap()
}

fn reach(d: &Dfa, backward: bool) -> Vec<bool> {
    let n = d.num_states();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for q in 0..n as u32 {
        if (!backward && q == d.initial()) || (backward && d.is_accepting(q)) {
            seen[q as usize] = true;
            queue.push_back(q);
        }
    }
    while let Some(q) = queue.pop_front() {
        for p in 0..n as u32 {
            let edge = |from: u32, to: u32| d.transitions(from).any(|(_, t)| t == to);
            let hit = if backward { edge(p, q) } else { edge(q, p) };
            if hit && !seen[p as usize] {
                seen[p as usize] = true;
                queue.push_back(p);
            }
        }
    }
    seen
}

/// Sort key of a non-initial state: acceptance, then self-loops per letter.
fn key(d: &Dfa, q: u32) -> Vec<bool> {
    let mut k = vec![d.is_accepting(q)];
    k.extend(d.alphabet().symbols().map(|a| d.next(q, a) == Some(q)));
    k
}

fn check_structure(d: &Dfa, n: usize) {
    assert_eq!(d.num_states(), n);
    if n >= 2 {
        assert!(reach(d, false).iter().all(|&r| r), "unreachable state");
        assert!(reach(d, true).iter().all(|&r| r), "state without an accepting future");
    }
    for q in 1..n.saturating_sub(1) as u32 {
        assert!(key(d, q) <= key(d, q + 1), "states {q} and {} out of order", q + 1);
    }
}

fn check_candidate(enc: &Encoder, facts: &[Fact]) {
    let shape = enc.shape();
    let (a, p) = enc.decode();
    check_structure(&a, shape.n_a);
    if shape.n_prec > 0 {
        let p = p.as_ref().unwrap();
        check_structure(p, shape.n_prec);
        assert!(!matches!(check_l3(p).unwrap(), Some(regliveness::verify::Counterexample::Irreflexive { .. })));
    }
    for f in facts {
        assert!(f.satisfied_by(&a, p.as_ref()), "violates {f:?}");
    }
}

#[test]
fn schedule_order() {
    let s = shape_schedule(true, 4);
    let got: Vec<(usize, usize)> = s.iter().map(|s| (s.n_a, s.n_prec)).collect();
    assert_eq!(got, vec![(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1)]);
    let sets: Vec<usize> = shape_schedule(false, 3).iter().map(|s| s.n_a).collect();
    assert_eq!(sets, vec![1, 2, 3]);
    assert_eq!(Shape { n_a: 2, n_prec: 3 }.to_string(), "2x3");
}

#[test]
fn base_encoding_is_satisfiable() {
    let g = builtin("flip").unwrap();
    let mut enc = Encoder::new(&g.alphabet, Shape { n_a: 1, n_prec: 1 }, 0, None, false);
    assert_eq!(enc.solve(), Outcome::Sat);
    let (_, p) = enc.decode();
    // a single irreflexive state can never accept
    assert!(!p.unwrap().is_accepting(0));
}

#[test]
fn accept_fact_forces_membership() {
    let g = builtin("flip").unwrap();
    let mut enc = Encoder::new(&g.alphabet, Shape { n_a: 2, n_prec: 2 }, 0, None, false);
    let f = Fact::Accept(w(&g, "0"));
    enc.add(&f);
    assert_eq!(enc.solve(), Outcome::Sat);
    let (a, _) = enc.decode();
    assert!(a.accepts(&w(&g, "0")));
}

#[test]
fn progress_fact_forces_a_decreasing_successor() {
    let g = builtin("flip").unwrap();
    let mut enc = Encoder::new(&g.alphabet, Shape { n_a: 2, n_prec: 2 }, 0, None, false);
    let x = w(&g, "0");
    let y = w(&g, "0^");
    let facts = vec![Fact::Accept(x.clone()), Fact::Progress { x: x.clone(), y: y.clone(), post: post2(&g, &y).unwrap() }];
    for f in &facts {
        enc.add(f);
    }
    assert_eq!(enc.solve(), Outcome::Sat);
    let (a, p) = enc.decode();
    let p = p.unwrap();
    assert!(a.accepts(&w(&g, "1")));
    assert!(p.accepts(&regliveness::automata::zip(p.alphabet(), &w(&g, "1"), &x)));
    check_candidate(&enc, &facts);
}

#[test]
fn transitivity_fact_excludes_the_violation() {
    let g = builtin("flip").unwrap();
    let mut enc = Encoder::new(&g.alphabet, Shape { n_a: 1, n_prec: 3 }, 0, None, false);
    let facts = vec![Fact::Transitive(w(&g, "0 0"), w(&g, "0 1"), w(&g, "1 1"))];
    enc.add(&facts[0]);
    assert_eq!(enc.solve(), Outcome::Sat);
    check_candidate(&enc, &facts);
}

#[test]
fn contradictory_facts_are_unsat() {
    let g = builtin("flip").unwrap();
    let mut enc = Encoder::new(&g.alphabet, Shape { n_a: 3, n_prec: 2 }, 0, None, false);
    enc.add(&Fact::Accept(w(&g, "0 1")));
    enc.add(&Fact::Implies(w(&g, "0 1"), w(&g, "1 1")));
    enc.add(&Fact::Reject(w(&g, "1 1")));
    assert_eq!(enc.solve(), Outcome::Unsat);
}

fn random_word<R: Rng>(rng: &mut R, k: usize, max: usize) -> Word {
    let n = rng.gen_range(0..=max);
    (0..n).map(|_| rng.gen_range(0..k as Symbol)).collect()
}

fn random_fact<R: Rng>(rng: &mut R, g: &GameInstance) -> Fact {
    let k = g.alphabet.len();
    match rng.gen_range(0..5) {
        0 => Fact::Accept(random_word(rng, k, 3)),
        1 => Fact::Reject(random_word(rng, k, 3)),
        2 => Fact::Implies(random_word(rng, k, 3), random_word(rng, k, 3)),
        3 => {
            let n = rng.gen_range(1..=3);
            let mut v = || (0..n).map(|_| rng.gen_range(0..k as Symbol)).collect::<Word>();
            Fact::Transitive(v(), v(), v())
        }
        _ => {
            let n = rng.gen_range(1..=3);
            let x: Word = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let mut y = x.clone();
            let i = rng.gen_range(0..n);
            y[i] = 2;
            Fact::Progress { post: post2(g, &y).unwrap(), x, y }
        }
    }
}

#[test]
fn decoded_candidates_satisfy_structure_and_facts() {
    let g = builtin("flip").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut sat = 0;
    for trial in 0..60 {
        let shape = [Shape { n_a: 2, n_prec: 2 }, Shape { n_a: 3, n_prec: 2 }, Shape { n_a: 4, n_prec: 3 }][trial % 3];
        let mut enc = Encoder::new(&g.alphabet, shape, trial as u64, None, false);
        let mut facts = Vec::new();
        for _ in 0..8 {
            let f = random_fact(&mut rng, &g);
            enc.add(&f);
            facts.push(f);
            match enc.solve() {
                Outcome::Sat => {
                    sat += 1;
                    check_candidate(&enc, &facts);
                }
                Outcome::Unsat => break,
                Outcome::Interrupted => unreachable!(),
            }
        }
    }
    assert!(sat > 100, "{sat}");
}

#[test]
fn set_only_shapes() {
    let g = builtin("israeli-jalfon").unwrap();
    let mut enc = Encoder::new(&g.alphabet, Shape { n_a: 3, n_prec: 0 }, 0, None, false);
    let facts = [Fact::Accept(w(&g, "1 0")), Fact::Reject(w(&g, "0 0")), Fact::Implies(w(&g, "1"), w(&g, "1^"))];
    for f in &facts {
        enc.add(f);
    }
    assert_eq!(enc.solve(), Outcome::Sat);
    let (_, p) = enc.decode();
    assert!(p.is_none());
    check_candidate(&enc, &facts);
}

#[test]
fn seeded_solving_is_deterministic() {
    let g = builtin("flip").unwrap();
    let run = |seed| {
        let mut enc = Encoder::new(&g.alphabet, Shape { n_a: 3, n_prec: 3 }, seed, None, false);
        enc.add(&Fact::Accept(w(&g, "0 1")));
        assert_eq!(enc.solve(), Outcome::Sat);
        let (a, p) = enc.decode();
        (regliveness::automata::write_dump(&a), regliveness::automata::write_dump(&p.unwrap()))
    };
    assert_eq!(run(0), run(0));
    assert_eq!(run(9), run(9));
}

#[test]
fn dimacs_header_counts_clauses() {
    let g = builtin("flip").unwrap();
    let mut enc = Encoder::new(&g.alphabet, Shape { n_a: 2, n_prec: 2 }, 0, None, true);
    enc.add(&Fact::Accept(w(&g, "0")));
    let text = enc.dimacs().unwrap();
    let header = text.lines().find(|l| l.starts_with("p cnf")).unwrap();
    let clauses: usize = header.split_whitespace().nth(3).unwrap().parse().unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with(" 0") || *l == "0").count(), clauses);
    assert!(Encoder::new(&g.alphabet, Shape { n_a: 1, n_prec: 1 }, 0, None, false).dimacs().is_none());
}
