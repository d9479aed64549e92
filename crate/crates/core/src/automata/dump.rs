//! Plain-text automaton dumps.
//!
//! ```text
//! dfa 2 0,1
//! 0 0 0
//! 0 1 1
//! init 0
//! accept 1
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use super::{Alphabet, AutomataError, Dfa, State};

pub fn write_dump(d: &Dfa) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dfa {} {}", d.num_states(), d.alphabet.letters().join(","));
    for q in 0..d.num_states() as State {
        for (a, t) in d.transitions(q) {
            let _ = writeln!(out, "{} {} {}", q, d.alphabet.name(a), t);
        }
    }
    let _ = writeln!(out, "init {}", d.initial);
    let acc: Vec<String> = d.accepting_states().map(|q| q.to_string()).collect();
    if acc.is_empty() {
        out.push_str("accept\n");
    } else {
        let _ = writeln!(out, "accept {}", acc.join(" "));
    }
    out
}

fn err(line: usize, msg: impl Into<String>) -> AutomataError {
    AutomataError::Dump { line, msg: msg.into() }
}

fn alphabet_from_csv(csv: &str, line: usize) -> Result<Arc<Alphabet>, AutomataError> {
    let names: Vec<&str> = csv.split(',').collect();
    if names.iter().all(|n| n.contains('/')) {
        let k = names.len();
        let b = (k as f64).sqrt().round() as usize;
        if b * b != k || b == 0 {
            return Err(err(line, "pair alphabet size is not a square"));
        }
        let base: Vec<&str> = names[..b]
            .iter()
            .map(|n| n.split_once('/').map(|(_, r)| r).unwrap_or(""))
            .collect();
        let base = Alphabet::new(&base).map_err(|e| err(line, e.to_string()))?;
        let pairs = Alphabet::pairs(&base);
        if pairs.letters().iter().map(String::as_str).ne(names.iter().copied()) {
            return Err(err(line, "pair letters are not in fused order"));
        }
        Ok(pairs)
    } else {
        Alphabet::new(&names).map_err(|e| err(line, e.to_string()))
    }
}

/// Parse one dump starting at `lines[*pos]`; `lines` carry 1-based line numbers.
fn parse_at(lines: &[(usize, &str)], pos: &mut usize) -> Result<Dfa, AutomataError> {
    let (ln, header) = lines[*pos];
    let mut parts = header.split_whitespace();
    if parts.next() != Some("dfa") {
        return Err(err(ln, "expected `dfa <n> <alphabet>`"));
    }
    let n: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| err(ln, "bad state count"))?;
    let csv = parts.next().ok_or_else(|| err(ln, "missing alphabet"))?;
    let alphabet = alphabet_from_csv(csv, ln)?;
    *pos += 1;
    let mut trans = Vec::new();
    let mut init = None;
    loop {
        let &(ln, line) = lines.get(*pos).ok_or_else(|| err(ln, "dump ends without `accept`"))?;
        *pos += 1;
        let f: Vec<&str> = line.split_whitespace().collect();
        match f.first().copied() {
            Some("init") => {
                init = Some(f.get(1).and_then(|s| s.parse::<State>().ok()).ok_or_else(|| err(ln, "bad init"))?)
            }
            Some("accept") => {
                let acc = f[1..]
                    .iter()
                    .map(|s| s.parse::<State>().map_err(|_| err(ln, "bad accepting state")))
                    .collect::<Result<Vec<_>, _>>()?;
                let init = init.ok_or_else(|| err(ln, "missing init"))?;
                return Dfa::from_parts(alphabet, n, init, trans, acc).map_err(|e| err(ln, e.to_string()));
            }
            _ if f.len() == 3 => {
                let p = f[0].parse::<State>().map_err(|_| err(ln, "bad source state"))?;
                let a = alphabet.symbol(f[1]).ok_or_else(|| err(ln, format!("unknown letter {}", f[1])))?;
                let q = f[2].parse::<State>().map_err(|_| err(ln, "bad target state"))?;
                trans.push((p, a, q));
            }
            _ => return Err(err(ln, "expected `q a q'`, `init` or `accept`")),
        }
    }
}

/// Parse a single dump.
pub fn parse_dump(text: &str) -> Result<Dfa, AutomataError> {
    let mut items = parse_dumps(text)?;
    match items.len() {
        1 => Ok(items.pop().unwrap().1),
        n => Err(err(0, format!("expected one automaton, found {n}"))),
    }
}

/// Parse a sequence of dumps; each is returned with the non-empty, non-dump
/// lines that precede it.
pub fn parse_dumps(text: &str) -> Result<Vec<(Vec<String>, Dfa)>, AutomataError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let mut out = Vec::new();
    let mut pending = Vec::new();
    let mut pos = 0;
    while pos < lines.len() {
        if lines[pos].1.starts_with("dfa ") {
            let d = parse_at(&lines, &mut pos)?;
            out.push((std::mem::take(&mut pending), d));
        } else {
            pending.push(lines[pos].1.to_string());
            pos += 1;
        }
    }
    Ok(out)
}
