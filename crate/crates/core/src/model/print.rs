use std::collections::BTreeMap;

use crate::automata::{self, Alphabet, AutomataError, Dfa, Nfa, Symbol};

use super::{GameInstance, SymmetryDecl};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum P {
    Empty,
    Eps,
    Sym(Symbol),
    Alt(Vec<P>),
    Cat(Vec<P>),
    Star(Box<P>),
}

fn alt(a: P, b: P) -> P {
    match (a, b) {
        (P::Empty, x) | (x, P::Empty) => x,
        (a, b) => {
            let mut parts = Vec::new();
            for x in [a, b] {
                match x {
                    P::Alt(xs) => parts.extend(xs),
                    x => parts.push(x),
                }
            }
            parts.sort();
            parts.dedup();
            let has_star = parts.iter().any(|p| matches!(p, P::Star(_)));
            if has_star {
                parts.retain(|p| *p != P::Eps);
            }
            if parts.len() == 1 {
                parts.pop().unwrap()
            } else {
                P::Alt(parts)
            }
        }
    }
}

fn cat(a: P, b: P) -> P {
    match (a, b) {
        (P::Empty, _) | (_, P::Empty) => P::Empty,
        (P::Eps, x) | (x, P::Eps) => x,
        (a, b) => {
            let mut parts = Vec::new();
            for x in [a, b] {
                match x {
                    P::Cat(xs) => parts.extend(xs),
                    x => parts.push(x),
                }
            }
            P::Cat(parts)
        }
    }
}

fn star(a: P) -> P {
    match a {
        P::Empty | P::Eps => P::Eps,
        s @ P::Star(_) => s,
        x => P::Star(Box::new(x)),
    }
}

fn render(p: &P, al: &Alphabet, out: &mut String, ctx: u8) {
    // ctx: 0 top, 1 inside concatenation, 2 under star
    match p {
        P::Empty => {}
        P::Eps => out.push_str("()"),
        P::Sym(s) => out.push_str(al.name(*s)),
        P::Alt(xs) => {
            if ctx > 0 {
                out.push('(');
            }
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                render(x, al, out, 0);
            }
            if ctx > 0 {
                out.push(')');
            }
        }
        P::Cat(xs) => {
            if ctx > 1 {
                out.push('(');
            }
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                render(x, al, out, 1);
            }
            if ctx > 1 {
                out.push(')');
            }
        }
        P::Star(x) => {
            render(x, al, out, 2);
            out.push('*');
        }
    }
}

/// A regular expression for `L(d)` by state elimination. The empty language
/// renders as the empty string.
pub fn to_regex(d: &Dfa) -> String {
    let d = automata::minimize(d);
    let n = d.num_states();
    let (s, f) = (n, n + 1);
    let mut edges: BTreeMap<(usize, usize), P> = BTreeMap::new();
    let add = |edges: &mut BTreeMap<(usize, usize), P>, p: usize, q: usize, r: P| {
        let e = edges.remove(&(p, q)).unwrap_or(P::Empty);
        let v = alt(e, r);
        if v != P::Empty {
            edges.insert((p, q), v);
        }
    };
    add(&mut edges, s, d.initial() as usize, P::Eps);
    for q in 0..n as u32 {
        if d.is_accepting(q) {
            add(&mut edges, q as usize, f, P::Eps);
        }
        for (a, t) in d.transitions(q) {
            add(&mut edges, q as usize, t as usize, P::Sym(a));
        }
    }
    let mut alive: Vec<usize> = (0..n).collect();
    while !alive.is_empty() {
        let cost = |q: usize| {
            let ins = edges.keys().filter(|&&(a, b)| b == q && a != q).count();
            let outs = edges.keys().filter(|&&(a, b)| a == q && b != q).count();
            ins * outs
        };
        let (i, &q) = alive.iter().enumerate().min_by_key(|&(_, &q)| (cost(q), q)).unwrap();
        alive.remove(i);
        let lp = edges.remove(&(q, q)).map_or(P::Eps, star);
        let ins: Vec<(usize, P)> = edges.iter().filter(|((_, b), _)| *b == q).map(|(&(a, _), p)| (a, p.clone())).collect();
        let outs: Vec<(usize, P)> = edges.iter().filter(|((a, _), _)| *a == q).map(|(&(_, b), p)| (b, p.clone())).collect();
        edges.retain(|&(a, b), _| a != q && b != q);
        for (p, ep) in &ins {
            for (r, er) in &outs {
                add(&mut edges, *p, *r, cat(cat(ep.clone(), lp.clone()), er.clone()));
            }
        }
    }
    let re = edges.remove(&(s, f)).unwrap_or(P::Empty);
    let mut out = String::new();
    render(&re, d.alphabet(), &mut out, 0);
    out
}

fn nfa_regex(n: &Nfa) -> Result<String, AutomataError> {
    Ok(to_regex(&automata::canonical(n)?))
}

/// Model source text denoting the same languages as `g`.
pub fn print_model(g: &GameInstance) -> Result<String, AutomataError> {
    let mut out = String::new();
    out.push_str(&format!("alphabet: {};\n", g.alphabet.letters().join(", ")));
    out.push_str(&format!("states: {};\n", to_regex(&g.states)));
    out.push_str(&format!("initial: {};\n", to_regex(&g.initial)));
    out.push_str(&format!("final: {};\n", to_regex(&g.target)));
    out.push_str(&format!("player1: {};\n", nfa_regex(&g.move1)?));
    out.push_str(&format!("player2: {};\n", nfa_regex(&g.move2)?));
    match &g.symmetry {
        None => {}
        Some(SymmetryDecl::Rotation) => out.push_str("symmetry: rotation;\n"),
        Some(SymmetryDecl::Transducer(t)) => out.push_str(&format!("symmetry: {};\n", nfa_regex(t)?)),
    }
    Ok(out)
}
