//! Explicit-state semantics of a game instance at a fixed configuration length.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::automata::{self, Word};
use crate::model::GameInstance;

pub const DEFAULT_CONFIG_CAP: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("length {length} has {count} configurations, above the cap of {cap}")]
    CapExceeded { length: usize, count: u128, cap: usize },
    #[error("value iteration did not converge within {iterations} sweeps (last change {delta:e})")]
    NoConvergence { iterations: usize, delta: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Player {
    One,
    Two,
}

/// The arena restricted to configurations of one length.
#[derive(Clone, Debug)]
pub struct ExplicitInstance {
    pub length: usize,
    /// Configurations in lexicographic order.
    pub configs: Vec<Word>,
    index: HashMap<Word, u32>,
    pub edges1: Vec<Vec<u32>>,
    pub edges2: Vec<Vec<u32>>,
    pub owner: Vec<Player>,
    pub initial: Vec<bool>,
    pub target: Vec<bool>,
}

impl ExplicitInstance {
    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn index_of(&self, w: &[u32]) -> Option<usize> {
        self.index.get(w).map(|&i| i as usize)
    }

    /// Successors in the owner's relation.
    pub fn successors(&self, c: usize) -> &[u32] {
        match self.owner[c] {
            Player::One => &self.edges1[c],
            Player::Two => &self.edges2[c],
        }
    }

    /// Every successor under `→1 ∪ →2`.
    pub fn all_successors(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges1[c].iter().chain(&self.edges2[c]).map(|&i| i as usize)
    }

    /// Configurations reachable from the initial ones.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = self.initial.clone();
        let mut queue: VecDeque<usize> = (0..self.len()).filter(|&c| seen[c]).collect();
        while let Some(c) = queue.pop_front() {
            for d in self.all_successors(c) {
                if !seen[d] {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
        seen
    }

    fn predecessors(&self) -> Vec<Vec<u32>> {
        let mut pre = vec![Vec::new(); self.len()];
        for c in 0..self.len() {
            for d in self.all_successors(c) {
                pre[d].push(c as u32);
            }
        }
        pre
    }
}

/// Enumerate `S ∩ Σⁿ` with both move relations.
pub fn expand(g: &GameInstance, n: usize, cap: usize) -> Result<ExplicitInstance, OracleError> {
    let count = automata::count_words(&g.states, n);
    if count > cap as u128 {
        return Err(OracleError::CapExceeded { length: n, count, cap });
    }
    let configs = automata::words_of_length(&g.states, n);
    let index: HashMap<Word, u32> = configs.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
    let edges = |t: &automata::Transducer| -> Vec<Vec<u32>> {
        configs
            .iter()
            .map(|x| automata::image_of_word(t, x).iter().filter_map(|y| index.get(y).copied()).collect())
            .collect()
    };
    let edges1 = edges(&g.move1);
    let edges2 = edges(&g.move2);
    let mut is_two: Vec<bool> = edges2.iter().map(|e| !e.is_empty()).collect();
    for e in &edges1 {
        for &d in e {
            is_two[d as usize] = true;
        }
    }
    let owner = is_two.iter().map(|&t| if t { Player::Two } else { Player::One }).collect();
    let initial = configs.iter().map(|w| g.initial.accepts(w)).collect();
    let target = configs.iter().map(|w| g.target.accepts(w)).collect();
    Ok(ExplicitInstance { length: n, configs, index, edges1, edges2, owner, initial, target })
}

/// Configurations from which Player 2 can force a visit to `F`.
///
/// A Player 1 configuration without moves counts as won by Player 2.
pub fn attractor(e: &ExplicitInstance) -> Vec<bool> {
    let n = e.len();
    let mut win = e.target.clone();
    let mut pending: Vec<usize> = (0..n).map(|c| e.successors(c).len()).collect();
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
    for c in 0..n {
        for &d in e.successors(c) {
            preds[d as usize].push(c as u32);
        }
    }
    let mut queue: VecDeque<usize> = VecDeque::new();
    for c in 0..n {
        if !win[c] && e.owner[c] == Player::One && pending[c] == 0 {
            win[c] = true;
        }
        if win[c] {
            queue.push_back(c);
        }
    }
    while let Some(d) = queue.pop_front() {
        for &p in &preds[d] {
            let p = p as usize;
            if win[p] {
                continue;
            }
            match e.owner[p] {
                Player::Two => {
                    win[p] = true;
                    queue.push_back(p);
                }
                Player::One => {
                    pending[p] -= 1;
                    if pending[p] == 0 {
                        win[p] = true;
                        queue.push_back(p);
                    }
                }
            }
        }
    }
    win
}

/// Parameters of the Markov decision process reading of an instance.
#[derive(Clone, Copy, Debug)]
pub struct MdpOptions {
    /// Weight of the first of two Process successors; more successors are uniform.
    pub p: f64,
    pub eps: f64,
    pub max_iter: usize,
}

impl Default for MdpOptions {
    fn default() -> Self {
        MdpOptions { p: 0.5, eps: 1e-9, max_iter: 1_000_000 }
    }
}

/// Per-configuration almost-sure verdict when the Scheduler minimises the
/// probability of reaching `F` and the Process moves at random.
pub fn mdp_check(e: &ExplicitInstance, opts: MdpOptions) -> Result<Vec<bool>, OracleError> {
    let n = e.len();
    let pre = e.predecessors();
    // graph-qualitative part: where F is unreachable, and who can get there avoiding F
    let mut hits_f = e.target.clone();
    let mut queue: VecDeque<usize> = (0..n).filter(|&c| hits_f[c]).collect();
    while let Some(c) = queue.pop_front() {
        for &p in &pre[c] {
            if !hits_f[p as usize] {
                hits_f[p as usize] = true;
                queue.push_back(p as usize);
            }
        }
    }
    let mut doomed: Vec<bool> = hits_f.iter().map(|&h| !h).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&c| doomed[c]).collect();
    while let Some(c) = queue.pop_front() {
        for &p in &pre[c] {
            let p = p as usize;
            if !doomed[p] && !e.target[p] {
                doomed[p] = true;
                queue.push_back(p);
            }
        }
    }

    // value iteration from below for the minimal reachability probability
    let mut v: Vec<f64> = e.target.iter().map(|&t| if t { 1.0 } else { 0.0 }).collect();
    let order: Vec<usize> = (0..n).filter(|&c| !e.target[c] && hits_f[c]).collect();
    let mut converged = false;
    let mut delta = f64::INFINITY;
    let mut sweeps = 0;
    while sweeps < opts.max_iter {
        sweeps += 1;
        delta = 0.0;
        for &c in &order {
            let succ = e.successors(c);
            let nv = if succ.is_empty() {
                0.0
            } else {
                match e.owner[c] {
                    Player::One => succ.iter().map(|&d| v[d as usize]).fold(f64::INFINITY, f64::min),
                    Player::Two if succ.len() == 2 => {
                        opts.p * v[succ[0] as usize] + (1.0 - opts.p) * v[succ[1] as usize]
                    }
                    Player::Two => succ.iter().map(|&d| v[d as usize]).sum::<f64>() / succ.len() as f64,
                }
            };
            delta = delta.max((nv - v[c]).abs());
            v[c] = nv;
        }
        if delta <= 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(OracleError::NoConvergence { iterations: sweeps, delta });
    }
    Ok((0..n).map(|c| v[c] >= 1.0 - opts.eps && !doomed[c]).collect())
}

/// Configurations all of whose `F`-avoiding futures stay inside `win`.
pub fn hereditary(e: &ExplicitInstance, win: &[bool]) -> Vec<bool> {
    let pre = e.predecessors();
    let mut bad: Vec<bool> = win.iter().map(|&w| !w).collect();
    let mut queue: VecDeque<usize> = (0..e.len()).filter(|&c| bad[c]).collect();
    while let Some(c) = queue.pop_front() {
        for &p in &pre[c] {
            let p = p as usize;
            if !bad[p] && !e.target[p] {
                bad[p] = true;
                queue.push_back(p);
            }
        }
    }
    bad.iter().map(|&b| !b).collect()
}

/// Agreement of the game and probabilistic readings on one length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Agreement {
    pub length: usize,
    pub configs: usize,
    pub reachable: usize,
    /// Reachable Player 1 configurations.
    pub checked: usize,
    pub all_reachable_winning: bool,
    /// Reachable Player 1 configurations where "every future stays in the
    /// attractor" and "almost-sure" differ.
    pub disagreements: usize,
    /// Reachable Player 1 configurations where attractor membership itself and
    /// "almost-sure" differ.
    pub direct_disagreements: usize,
}

pub fn agreement(e: &ExplicitInstance, opts: MdpOptions) -> Result<Agreement, OracleError> {
    let reach = e.reachable();
    let win = attractor(e);
    let safe = hereditary(e, &win);
    let sure = mdp_check(e, opts)?;
    let p1: Vec<usize> = (0..e.len()).filter(|&c| reach[c] && e.owner[c] == Player::One).collect();
    Ok(Agreement {
        length: e.length,
        configs: e.len(),
        reachable: reach.iter().filter(|&&r| r).count(),
        checked: p1.len(),
        all_reachable_winning: p1.iter().all(|&c| win[c]),
        disagreements: p1.iter().filter(|&&c| safe[c] != sure[c]).count(),
        direct_disagreements: p1.iter().filter(|&&c| win[c] != sure[c]).count(),
    })
}

/// Memoised reachability queries for one game, shareable between threads.
///
/// Reachability is decided by a forward search from `I0 ∩ Σⁿ`, so the cap
/// bounds the reachable configurations rather than all of `S ∩ Σⁿ`.
pub struct Oracle {
    game: GameInstance,
    cap: usize,
    reach: Mutex<HashMap<usize, Arc<HashSet<Word>>>>,
    full: Mutex<HashMap<usize, Arc<ExplicitInstance>>>,
}

impl Oracle {
    pub fn new(game: GameInstance) -> Oracle {
        Oracle::with_cap(game, DEFAULT_CONFIG_CAP)
    }

    pub fn with_cap(game: GameInstance, cap: usize) -> Oracle {
        Oracle { game, cap, reach: Mutex::new(HashMap::new()), full: Mutex::new(HashMap::new()) }
    }

    pub fn game(&self) -> &GameInstance {
        &self.game
    }

    fn reachable_set(&self, n: usize) -> Result<Arc<HashSet<Word>>, OracleError> {
        if let Some(x) = self.reach.lock().expect("oracle cache").get(&n) {
            return Ok(x.clone());
        }
        let g = &self.game;
        let count = automata::count_words(&g.initial, n);
        if count > self.cap as u128 {
            return Err(OracleError::CapExceeded { length: n, count, cap: self.cap });
        }
        let mut seen: HashSet<Word> = HashSet::new();
        let mut queue: VecDeque<Word> = VecDeque::new();
        for w in automata::words_of_length(&g.initial, n) {
            if g.states.accepts(&w) && seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
        while let Some(x) = queue.pop_front() {
            for t in [&g.move1, &g.move2] {
                for y in automata::image_of_word(t, &x) {
                    if g.states.accepts(&y) && !seen.contains(&y) {
                        if seen.len() >= self.cap {
                            return Err(OracleError::CapExceeded { length: n, count: seen.len() as u128 + 1, cap: self.cap });
                        }
                        seen.insert(y.clone());
                        queue.push_back(y);
                    }
                }
            }
        }
        let x = Arc::new(seen);
        self.reach.lock().expect("oracle cache").insert(n, x.clone());
        Ok(x)
    }

    pub fn reachable(&self, w: &[u32]) -> Result<bool, OracleError> {
        Ok(self.reachable_set(w.len())?.contains(w))
    }

    /// Reachable configurations of length `n`, lexicographic.
    pub fn reachable_words(&self, n: usize) -> Result<Vec<Word>, OracleError> {
        let mut out: Vec<Word> = self.reachable_set(n)?.iter().cloned().collect();
        out.sort_unstable();
        Ok(out)
    }

    /// The full arena at length `n`.
    pub fn instance(&self, n: usize) -> Result<Arc<ExplicitInstance>, OracleError> {
        if let Some(x) = self.full.lock().expect("oracle cache").get(&n) {
            return Ok(x.clone());
        }
        let x = Arc::new(expand(&self.game, n, self.cap)?);
        self.full.lock().expect("oracle cache").insert(n, x.clone());
        Ok(x)
    }
}
