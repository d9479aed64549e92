//! Certificate files.
//!
//! ```text
//! model flip
//! mode mono
//! dfa ...          # A
//! dfa ...          # ≺
//! ```
//!
//! Incremental certificates list `A`, then for every piece a line
//! `piece <j> [symmetric] u <letters>` followed by the dumps of `B_j` and `≺_j`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::automata::{parse_dumps, write_dump, Alphabet, AutomataError, Dfa};
use crate::incr::{DisjunctiveCertificate, Piece};
use crate::model::GameInstance;
use crate::verify::AdviceBits;

#[derive(Debug, Error)]
pub enum CertError {
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error("malformed certificate: {0}")]
    Format(String),
    #[error("certificate is for model {found}, not {expected}")]
    WrongModel { expected: String, found: String },
}

#[derive(Clone, Debug)]
pub enum Certificate {
    Mono(AdviceBits),
    Incr(DisjunctiveCertificate),
}

impl Certificate {
    pub fn mode(&self) -> &'static str {
        match self {
            Certificate::Mono(_) => "mono",
            Certificate::Incr(_) => "incr",
        }
    }
}

pub fn write_certificate(g: &GameInstance, cert: &Certificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "model {}", g.name);
    let _ = writeln!(out, "mode {}", cert.mode());
    match cert {
        Certificate::Mono(adv) => {
            out.push_str(&write_dump(&adv.a));
            out.push_str(&write_dump(&adv.prec));
        }
        Certificate::Incr(d) => {
            out.push_str(&write_dump(&d.a));
            for (j, p) in d.pieces.iter().enumerate() {
                let sym = if p.symmetric { " symmetric" } else { "" };
                let _ = writeln!(out, "piece {}{} u {}", j + 1, sym, g.alphabet.render(&p.u));
                out.push_str(&write_dump(&p.b));
                out.push_str(&write_dump(&p.prec));
            }
        }
    }
    out
}

fn expect_alphabet(d: Dfa, want: &std::sync::Arc<Alphabet>, what: &str) -> Result<Dfa, CertError> {
    if **d.alphabet() != **want {
        return Err(CertError::Format(format!("{what} is not over the alphabet {}", want.letters().join(","))));
    }
    Ok(d)
}

pub fn parse_certificate(g: &GameInstance, text: &str) -> Result<Certificate, CertError> {
    let mut items = parse_dumps(text)?.into_iter();
    let (header, a) = items.next().ok_or_else(|| CertError::Format("no automata".into()))?;
    let mut model = None;
    let mut mode = None;
    for line in &header {
        match line.split_once(' ') {
            Some(("model", v)) => model = Some(v.trim().to_string()),
            Some(("mode", v)) => mode = Some(v.trim().to_string()),
            _ if line.starts_with('#') => {}
            _ => return Err(CertError::Format(format!("unexpected line `{line}`"))),
        }
    }
    if let Some(m) = model {
        if m != g.name {
            return Err(CertError::WrongModel { expected: g.name.clone(), found: m });
        }
    }
    let a = expect_alphabet(a, &g.alphabet, "A")?;
    let pairs = g.pairs().clone();
    match mode.as_deref().unwrap_or("mono") {
        "mono" => {
            let (extra, prec) = items.next().ok_or_else(|| CertError::Format("missing relation automaton".into()))?;
            if !extra.is_empty() || items.next().is_some() {
                return Err(CertError::Format("a monolithic certificate has exactly two automata".into()));
            }
            Ok(Certificate::Mono(AdviceBits { a, prec: expect_alphabet(prec, &pairs, "relation")? }))
        }
        "incr" => {
            let mut pieces = Vec::new();
            while let Some((head, b)) = items.next() {
                let [line] = head.as_slice() else {
                    return Err(CertError::Format(format!("piece {} needs one `piece` line", pieces.len() + 1)));
                };
                let mut words = line.split_whitespace();
                if words.next() != Some("piece") || words.next() != Some(&(pieces.len() + 1).to_string()) {
                    return Err(CertError::Format(format!("expected `piece {}`, found `{line}`", pieces.len() + 1)));
                }
                let mut symmetric = false;
                let mut next = words.next();
                if next == Some("symmetric") {
                    symmetric = true;
                    next = words.next();
                }
                if next != Some("u") {
                    return Err(CertError::Format(format!("piece line `{line}` lacks `u`")));
                }
                let u = g.alphabet.parse_word(&words.collect::<Vec<_>>().join(" "))?;
                let (extra, prec) = items.next().ok_or_else(|| CertError::Format("piece without relation".into()))?;
                if !extra.is_empty() {
                    return Err(CertError::Format(format!("unexpected line `{}`", extra[0])));
                }
                pieces.push(Piece {
                    u,
                    b: expect_alphabet(b, &g.alphabet, "piece set")?,
                    prec: expect_alphabet(prec, &pairs, "piece relation")?,
                    symmetric,
                });
            }
            Ok(Certificate::Incr(DisjunctiveCertificate { a, pieces }))
        }
        m => Err(CertError::Format(format!("unknown mode `{m}`"))),
    }
}
