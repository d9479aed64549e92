mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use regliveness::automata::{self, zip, Dfa, Word};
use regliveness::incr::{check_disjunctive, solve_incremental, IncrOptions, IncrResult, Step};
use regliveness::model::{builtin, parse_language, GameInstance, SymmetryDecl};
use regliveness::oracle::expand;
use regliveness::symmetry::{apply_word, check_automorphism, close_piece, SymmetryViolation};

fn w(g: &GameInstance, s: &str) -> Word {
    g.alphabet.parse_word(s).unwrap()
}

fn identity(g: &GameInstance) -> SymmetryDecl {
    SymmetryDecl::Transducer(parse_language(&g.alphabet, "(0/0|1/1|1^/1^)*", true).unwrap().to_nfa())
}

fn rotation_invariant(d: &Dfa) -> bool {
    automata::equivalent(&automata::rotate_once(&d.to_nfa()), &d.to_nfa()).unwrap()
}

#[test]
fn ring_rotation_is_an_automorphism() {
    let g = builtin("israeli-jalfon").unwrap();
    assert!(matches!(g.symmetry, Some(SymmetryDecl::Rotation)));
    assert_eq!(check_automorphism(&g, &SymmetryDecl::Rotation).unwrap(), None);
    assert_eq!(apply_word(&SymmetryDecl::Rotation, &w(&g, "1^ 0 1")), Some(w(&g, "0 1 1^")));
}

#[test]
fn rotation_breaks_on_a_line() {
    let g = builtin("herman-line").unwrap();
    let v = check_automorphism(&g, &SymmetryDecl::Rotation).unwrap().expect("the line has ends");
    let SymmetryViolation::Move { player, x, y } = v.clone() else { panic!("{v}") };
    assert_eq!(player, 2);
    // exactly one of the move and its rotation is a move
    let rx = apply_word(&SymmetryDecl::Rotation, &x).unwrap();
    let ry = apply_word(&SymmetryDecl::Rotation, &y).unwrap();
    let is_move = |a: &Word, b: &Word| automata::image_of_word(&g.move2, a).contains(b);
    let back = |a: &Word| {
        let mut a = a.clone();
        a.rotate_right(1);
        a
    };
    assert!(is_move(&x, &y) != is_move(&rx, &ry) || is_move(&x, &y) != is_move(&back(&x), &back(&y)));
    assert!(v.render(&g).starts_with("player2 "));
}

#[test]
fn identity_transducer_changes_nothing() {
    let g = builtin("israeli-jalfon").unwrap();
    let id = identity(&g);
    assert_eq!(check_automorphism(&g, &id).unwrap(), None);
    let b = parse_language(&g.alphabet, "1 0* 1^", false).unwrap();
    let c = close_piece(&b, &id).unwrap();
    assert!(automata::equivalent(&c.to_nfa(), &b.to_nfa()).unwrap());
    assert_eq!(apply_word(&id, &w(&g, "0 1^")), Some(w(&g, "0 1^")));
}

#[test]
fn collapsing_transducer_is_not_bijective() {
    let g = builtin("israeli-jalfon").unwrap();
    let collapse = SymmetryDecl::Transducer(parse_language(&g.alphabet, "(0/0|1/0|1^/1^)*", true).unwrap().to_nfa());
    assert_eq!(check_automorphism(&g, &collapse).unwrap(), Some(SymmetryViolation::NotBijective(w(&g, "1"))));
    let partial = SymmetryDecl::Transducer(parse_language(&g.alphabet, "(0/0|1/1)*", true).unwrap().to_nfa());
    assert_eq!(check_automorphism(&g, &partial).unwrap(), Some(SymmetryViolation::NotBijective(w(&g, "1^"))));
}

#[test]
fn closure_of_one_token_rows() {
    let g = builtin("israeli-jalfon").unwrap();
    let b = parse_language(&g.alphabet, "1 0*", false).unwrap();
    let c = close_piece(&b, &SymmetryDecl::Rotation).unwrap();
    let want = parse_language(&g.alphabet, "0* 1 0*", false).unwrap();
    assert!(automata::equivalent(&c.to_nfa(), &want.to_nfa()).unwrap());
}

#[test]
fn closures_are_rotation_invariant() {
    let alpha = common::alphabet(3);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let b = common::random_dfa(&mut rng, &alpha, 5);
        let c = close_piece(&b, &SymmetryDecl::Rotation).unwrap();
        assert!(rotation_invariant(&c));
        assert!(automata::includes(&c.to_nfa(), &b.to_nfa()).unwrap());
        // every word of the closure is a rotation of a word of B
        for x in common::words_upto(3, 4) {
            let rotated = (0..x.len().max(1)).any(|k| {
                let mut y = x.clone();
                if !y.is_empty() {
                    y.rotate_left(k);
                }
                b.accepts(&y)
            });
            assert_eq!(c.accepts(&x), rotated, "{x:?}");
        }
    }
}

fn rot(x: &Word, k: usize) -> Word {
    let mut y = x.clone();
    if !y.is_empty() {
        let n = y.len();
        y.rotate_left(k % n);
    }
    y
}

/// A symmetric piece stands for all rotations of itself: from every word of
/// the closure, each Scheduler move has an answer that, rotated back into the
/// piece, goes down in the piece's order.
#[test]
fn symmetric_pieces_make_progress_up_to_rotation() {
    let g = builtin("israeli-jalfon").unwrap();
    let opts = IncrOptions { with_symmetry: true, ..IncrOptions::default() };
    let IncrResult::Proved { cert, stats } = solve_incremental(&g, &opts).unwrap() else { panic!("timeout") };
    assert_eq!(check_disjunctive(&g, &cert).unwrap(), None);
    assert!(cert.pieces.iter().all(|p| p.symmetric));
    let mut checked = 0;
    for it in &stats.iterations {
        let Step::Win { piece, w_before, a } = &it.step else { continue };
        let p = &cert.pieces[*piece];
        let closed = close_piece(&p.b, &SymmetryDecl::Rotation).unwrap();
        let lt = |x: &Word, y: &Word| p.prec.accepts(&zip(p.prec.alphabet(), x, y));
        for n in 1..=5 {
            let e = expand(&g, n, 1 << 20).unwrap();
            for (c, x) in e.configs.iter().enumerate() {
                if !(a.accepts(x) && closed.accepts(x) && !w_before.accepts(x)) {
                    continue;
                }
                for &d in &e.edges1[c] {
                    let d = d as usize;
                    if e.target[d] {
                        continue;
                    }
                    let ok = e.edges2[d].iter().any(|&z| {
                        let z = &e.configs[z as usize];
                        (0..n).any(|k| p.b.accepts(&rot(x, k)) && p.b.accepts(&rot(z, k)) && lt(&rot(z, k), &rot(x, k)))
                    });
                    assert!(ok, "no progress from {} via {}", g.alphabet.render(x), g.alphabet.render(&e.configs[d]));
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 0);
}
