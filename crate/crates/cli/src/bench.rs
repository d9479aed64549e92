//! Benchmark suites: one row per (model, configuration).

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use regliveness::cegar::EngineError;
use regliveness::incr::{self, IncrOptions, IncrResult};
use regliveness::model::{builtin, builtin::is_game, BUILTIN_NAMES};
use regliveness::mono::{solve_monolithic, MonoOptions, MonoResult};
use regliveness::oracle::OracleError;
use regliveness::verify::{self, Profile};

pub const MODES: [&str; 5] = ["mono", "incr", "incr+inv", "incr+symm", "incr+inv+symm"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub model: &'static str,
    pub mode: &'static str,
}

pub fn suite(name: &str) -> Option<Vec<Cell>> {
    let mut cells = Vec::new();
    match name {
        "default" => {
            for model in ["flip", "israeli-jalfon", "herman-line", "take-away", "nim"] {
                for mode in &MODES[..3] {
                    cells.push(Cell { model, mode });
                }
            }
            cells.push(Cell { model: "israeli-jalfon", mode: "incr+symm" });
        }
        "full" => {
            for &model in BUILTIN_NAMES {
                for mode in MODES {
                    cells.push(Cell { model, mode });
                }
            }
        }
        _ => return None,
    }
    Some(cells)
}

struct Row {
    result: String,
    rounds: String,
    shapes: String,
    secs: f64,
}

fn dash(result: &str) -> Row {
    Row { result: result.into(), rounds: "---".into(), shapes: "---".into(), secs: 0.0 }
}

fn failed(e: EngineError) -> &'static str {
    match e {
        EngineError::Exhausted { .. } | EngineError::Oracle(OracleError::CapExceeded { .. }) => "exhausted",
        EngineError::Timeout => "timeout",
        _ => "error",
    }
}

fn run_cell(cell: &Cell, timeout: Option<Duration>, seed: u64) -> Row {
    let g = match builtin(cell.model) {
        Ok(g) => g,
        Err(_) => return dash("error"),
    };
    let inv = cell.mode.contains("inv");
    let symm = cell.mode.contains("symm");
    if cell.mode != "mono" && (is_game(cell.model) || (symm && g.symmetry.is_none())) {
        return dash("---");
    }
    let start = Instant::now();
    if cell.mode == "mono" {
        let game = is_game(cell.model);
        let opts = MonoOptions { game_profile: game, timeout, seed, ..MonoOptions::default() };
        let profile = if game { Profile::GAME } else { Profile::PROTOCOL };
        return match solve_monolithic(&g, &opts) {
            Err(e) => Row { secs: start.elapsed().as_secs_f64(), ..dash(failed(e)) },
            Ok(r) => {
                let secs = start.elapsed().as_secs_f64();
                let s = r.stats();
                let result = match &r {
                    MonoResult::Proved { cert, .. } => match verify::verify(&g, cert, profile) {
                        Ok(None) => "proved",
                        _ => "invalid",
                    },
                    MonoResult::Exhausted { .. } => "exhausted",
                    MonoResult::Timeout { .. } => "timeout",
                };
                Row {
                    result: result.into(),
                    rounds: s.rounds.to_string(),
                    shapes: s.final_shape().map_or("---".into(), |x| x.to_string()),
                    secs,
                }
            }
        };
    }
    let opts = IncrOptions { with_invariant: inv, with_symmetry: symm, timeout, seed, ..IncrOptions::default() };
    match incr::solve_incremental(&g, &opts) {
        Err(e) => Row { secs: start.elapsed().as_secs_f64(), ..dash(failed(e)) },
        Ok(r) => {
            let secs = start.elapsed().as_secs_f64();
            let s = r.stats();
            let shapes: Vec<String> =
                s.iterations.iter().map(|i| i.shape.map_or("---".into(), |x| x.to_string())).collect();
            let result = match &r {
                IncrResult::Proved { cert, .. } => match incr::check_disjunctive(&g, cert) {
                    Ok(None) => "proved",
                    _ => "invalid",
                },
                IncrResult::Timeout { .. } => "timeout",
            };
            Row { result: result.into(), rounds: s.rounds.to_string(), shapes: shapes.join(","), secs }
        }
    }
}

/// Run the cells on up to `jobs` threads; rows come out in suite order.
pub fn run(cells: &[Cell], timeout: Option<Duration>, seed: u64, jobs: usize) -> String {
    let next = AtomicUsize::new(0);
    let rows: Mutex<Vec<Option<Row>>> = Mutex::new((0..cells.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs.min(cells.len()).max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= cells.len() {
                    break;
                }
                let row = run_cell(&cells[i], timeout, seed);
                rows.lock().expect("bench rows")[i] = Some(row);
            });
        }
    });
    let mut out = String::from("model\tmode\tresult\trounds\tshapes\twall-time\n");
    for (c, r) in cells.iter().zip(rows.into_inner().expect("bench rows")) {
        let r = r.expect("every cell ran");
        let wall = if r.result == "---" { "---".to_string() } else { format!("{:.3}s", r.secs) };
        let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}\t{}", c.model, c.mode, r.result, r.rounds, r.shapes, wall);
    }
    out
}
