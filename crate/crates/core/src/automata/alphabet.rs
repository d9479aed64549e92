use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::{AutomataError, Symbol, Word};

/// An ordered set of letter names.
///
/// Multi-track alphabets (`tracks > 1`) are products of a base alphabet; the
/// letter for the tuple `(a_1, …, a_k)` has index `Σ a_i · |base|^(k-i)` and is
/// named `a_1/…/a_k`.
#[derive(Clone)]
pub struct Alphabet {
    letters: Vec<String>,
    index: HashMap<String, Symbol>,
    tracks: usize,
    base: Option<Arc<Alphabet>>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>, AutomataError> {
        if names.is_empty() {
            return Err(AutomataError::EmptyAlphabet);
        }
        let mut letters = Vec::with_capacity(names.len());
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref().to_string();
            if n.is_empty() || n.chars().any(|c| c.is_whitespace() || c == ',' || c == '/') {
                return Err(AutomataError::BadLetter(n));
            }
            if index.insert(n.clone(), i as Symbol).is_some() {
                return Err(AutomataError::DuplicateLetter(n));
            }
            letters.push(n);
        }
        Ok(Arc::new(Alphabet { letters, index, tracks: 1, base: None }))
    }

    /// The `k`-fold product of a single-track alphabet.
    pub fn tracks_of(base: &Arc<Alphabet>, k: usize) -> Arc<Self> {
        assert!(base.tracks == 1 && k >= 1);
        if k == 1 {
            return base.clone();
        }
        let b = base.len();
        let total = b.pow(k as u32);
        let mut letters = Vec::with_capacity(total);
        let mut index = HashMap::with_capacity(total);
        for s in 0..total {
            let parts: Vec<&str> = decode_tuple(s as Symbol, b, k)
                .into_iter()
                .map(|c| base.letters[c as usize].as_str())
                .collect();
            let name = parts.join("/");
            index.insert(name.clone(), s as Symbol);
            letters.push(name);
        }
        Arc::new(Alphabet { letters, index, tracks: k, base: Some(base.clone()) })
    }

    pub fn pairs(base: &Arc<Alphabet>) -> Arc<Self> {
        Self::tracks_of(base, 2)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn tracks(&self) -> usize {
        self.tracks
    }

    /// The single-track alphabet this one is built from (itself when `tracks == 1`).
    pub fn base(self: &Arc<Self>) -> Arc<Alphabet> {
        match &self.base {
            Some(b) => b.clone(),
            None => self.clone(),
        }
    }

    pub fn base_len(&self) -> usize {
        match &self.base {
            Some(b) => b.len(),
            None => self.len(),
        }
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.letters[s as usize]
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        0..self.letters.len() as Symbol
    }

    /// Fuse per-track letters into one symbol of this alphabet.
    pub fn fuse(&self, parts: &[Symbol]) -> Symbol {
        debug_assert_eq!(parts.len(), self.tracks);
        let b = self.base_len() as Symbol;
        parts.iter().fold(0, |acc, &p| acc * b + p)
    }

    pub fn split(&self, s: Symbol) -> Vec<Symbol> {
        decode_tuple(s, self.base_len(), self.tracks)
    }

    /// Render a word; letters are concatenated when all names are one character,
    /// otherwise separated by spaces.
    pub fn render(&self, w: &[Symbol]) -> String {
        let single = self.letters.iter().all(|l| l.chars().count() == 1);
        let sep = if single { "" } else { " " };
        w.iter().map(|&s| self.name(s)).collect::<Vec<_>>().join(sep)
    }

    /// Parse a word by longest match against the letter names; whitespace separates.
    pub fn parse_word(&self, text: &str) -> Result<Word, AutomataError> {
        let mut out = Vec::new();
        for chunk in text.split_whitespace() {
            let mut rest = chunk;
            while !rest.is_empty() {
                let (sym, len) = self
                    .longest_prefix(rest)
                    .ok_or_else(|| AutomataError::UnknownLetter(rest.to_string()))?;
                out.push(sym);
                rest = &rest[len..];
            }
        }
        Ok(out)
    }

    /// Longest letter name that is a prefix of `text`, with its byte length.
    pub fn longest_prefix(&self, text: &str) -> Option<(Symbol, usize)> {
        let mut best: Option<(Symbol, usize)> = None;
        for (i, l) in self.letters.iter().enumerate() {
            if text.starts_with(l.as_str()) && best.map_or(true, |(_, n)| l.len() > n) {
                best = Some((i as Symbol, l.len()));
            }
        }
        best
    }
}

pub(crate) fn decode_tuple(mut s: Symbol, b: usize, k: usize) -> Vec<Symbol> {
    let mut parts = vec![0; k];
    for i in (0..k).rev() {
        parts[i] = s % b as Symbol;
        s /= b as Symbol;
    }
    parts
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || (self.tracks == other.tracks && self.letters == other.letters)
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tracks == 1 {
            write!(f, "Alphabet{:?}", self.letters)
        } else {
            write!(f, "Alphabet^{}{:?}", self.tracks, self.base.as_ref().map(|b| b.letters.clone()))
        }
    }
}

/// Split a pair word into its two tracks.
pub fn unzip(pairs: &Alphabet, w: &[Symbol]) -> (Word, Word) {
    let b = pairs.base_len() as Symbol;
    w.iter().map(|&s| (s / b, s % b)).unzip()
}

/// Zip two equal-length words into a pair word.
pub fn zip(pairs: &Alphabet, x: &[Symbol], y: &[Symbol]) -> Word {
    assert_eq!(x.len(), y.len(), "tracks must have equal length");
    let b = pairs.base_len() as Symbol;
    x.iter().zip(y).map(|(&a, &c)| a * b + c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fused_pairs_follow_declaration_order() {
        let s = Alphabet::new(&["0", "1", "0^"]).unwrap();
        let p = Alphabet::pairs(&s);
        assert_eq!(p.len(), 9);
        assert_eq!(p.name(5), "1/0^");
        assert_eq!(p.symbol("0^/1"), Some(7));
        assert_eq!(p.split(7), vec![2, 1]);
        assert_eq!(p.fuse(&[2, 1]), 7);
    }

    #[test]
    fn words_parse_by_longest_match() {
        let s = Alphabet::new(&["0", "1", "0^"]).unwrap();
        assert_eq!(s.parse_word("00^1").unwrap(), vec![0, 2, 1]);
        assert_eq!(s.parse_word("0 0^ 1").unwrap(), vec![0, 2, 1]);
        assert!(s.parse_word("02").is_err());
        assert_eq!(s.render(&[0, 2, 1]), "0 0^ 1");
    }

    #[test]
    fn rejects_bad_alphabets() {
        assert!(Alphabet::new::<&str>(&[]).is_err());
        assert!(Alphabet::new(&["a", "a"]).is_err());
        assert!(Alphabet::new(&["a b"]).is_err());
    }
}
