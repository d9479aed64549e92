mod bench;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use regliveness::automata::write_dump;
use regliveness::cegar::EngineError;
use regliveness::cert::{parse_certificate, write_certificate, Certificate};
use regliveness::incr::{self, IncrOptions, IncrResult};
use regliveness::model::{builtin, builtin::is_game, parse_model, GameInstance, BUILTIN_NAMES};
use regliveness::mono::{solve_monolithic, MonoOptions, MonoResult};
use regliveness::oracle::{agreement, expand, MdpOptions, OracleError, DEFAULT_CONFIG_CAP};
use regliveness::verify::{self, Profile};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VIOLATION: u8 = 2;
pub const EXIT_TIMEOUT: u8 = 3;

#[derive(Parser)]
#[command(name = "regliveness", version, about = "Liveness proofs for parameterised systems via regular advice bits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Mono,
    Incr,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a certificate.
    Prove {
        /// Built-in model name or path to a .game file.
        #[arg(long)]
        model: String,
        #[arg(long, value_enum, default_value = "mono")]
        mode: Mode,
        /// Seed the incremental engine with an L*-learned invariant.
        #[arg(long)]
        with_invariant: bool,
        /// Close every progress piece under the model's declared symmetry.
        #[arg(long)]
        with_symmetry: bool,
        /// Drop inductiveness of A (on by default for the built-in games).
        #[arg(long)]
        game_profile: bool,
        /// Seconds; 0 disables the limit.
        #[arg(long, default_value_t = 600.0)]
        timeout: f64,
        #[arg(long, default_value_t = 24)]
        max_states: usize,
        #[arg(long)]
        cert_out: Option<PathBuf>,
        /// Write the learned invariant here (with --with-invariant).
        #[arg(long)]
        invariant_out: Option<PathBuf>,
        #[arg(long)]
        dump_cnf: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        lstar_precision: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check a certificate against a model.
    Check {
        #[arg(long)]
        model: String,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        game_profile: bool,
    },
    /// Explicit-state statistics per configuration length.
    Oracle {
        #[arg(long)]
        model: String,
        /// `a..b` (inclusive) or a single length.
        #[arg(long, default_value = "1..6")]
        lengths: String,
        #[arg(long, default_value_t = DEFAULT_CONFIG_CAP)]
        cap: usize,
    },
    /// Run a benchmark suite and print a TSV report.
    Bench {
        #[arg(long, default_value = "default")]
        suite: String,
        /// Per-cell seconds; defaults to 600 (default suite) or 7200 (full).
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

/// A failure with its exit code.
struct Failure(u8, anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(EXIT_USAGE, e.into())
    }
}

pub fn load_model(arg: &str) -> Result<GameInstance> {
    if BUILTIN_NAMES.contains(&arg) {
        return Ok(builtin(arg)?);
    }
    let path = Path::new(arg);
    if !path.exists() {
        bail!("unknown model `{arg}`: not a built-in ({}) and no such file", BUILTIN_NAMES.join(", "));
    }
    let src = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("model");
    Ok(parse_model(name, &src)?)
}

pub fn timeout_of(secs: f64) -> Option<Duration> {
    (secs > 0.0).then(|| Duration::from_secs_f64(secs))
}

fn engine_failure(e: EngineError) -> Failure {
    let code = match e {
        EngineError::Exhausted { .. } | EngineError::Timeout => EXIT_TIMEOUT,
        EngineError::Oracle(OracleError::CapExceeded { .. }) => EXIT_TIMEOUT,
        EngineError::Io { .. } => EXIT_USAGE,
        _ => EXIT_VIOLATION,
    };
    Failure(code, e.into())
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn prove(
    model: &str,
    mode: Mode,
    with_invariant: bool,
    with_symmetry: bool,
    game_profile: bool,
    timeout: f64,
    max_states: usize,
    cert_out: Option<PathBuf>,
    invariant_out: Option<PathBuf>,
    dump_cnf: Option<PathBuf>,
    lstar_precision: usize,
    seed: u64,
) -> Result<u8, Failure> {
    let g = load_model(model)?;
    let game_profile = game_profile || is_game(&g.name);
    let start = Instant::now();
    match mode {
        Mode::Mono => {
            if with_invariant || with_symmetry {
                return Err(anyhow!("--with-invariant and --with-symmetry need --mode incr").into());
            }
            let opts = MonoOptions { game_profile, max_states, timeout: timeout_of(timeout), seed, dump_cnf };
            let r = solve_monolithic(&g, &opts).map_err(engine_failure)?;
            let rounds = r.stats().rounds;
            let shape = r.stats().final_shape().map_or("---".into(), |x| x.to_string());
            let elapsed = start.elapsed().as_secs_f64();
            match r {
                MonoResult::Proved { cert, .. } => {
                    eprintln!("proved {} mono: {rounds} rounds, shape {shape}, {elapsed:.3}s", g.name);
                    emit(&write_certificate(&g, &Certificate::Mono(cert)), cert_out.as_deref())?;
                    Ok(EXIT_OK)
                }
                MonoResult::Exhausted { .. } => {
                    eprintln!("exhausted {} mono: no certificate within {max_states} states ({rounds} rounds)", g.name);
                    Ok(EXIT_TIMEOUT)
                }
                MonoResult::Timeout { .. } => {
                    eprintln!("timeout {} mono after {rounds} rounds", g.name);
                    Ok(EXIT_TIMEOUT)
                }
            }
        }
        Mode::Incr => {
            if game_profile {
                return Err(anyhow!("the incremental engine does not apply to the game profile").into());
            }
            let opts = IncrOptions {
                with_invariant,
                with_symmetry,
                lstar_precision,
                max_states,
                timeout: timeout_of(timeout),
                seed,
                dump_cnf,
                ..IncrOptions::default()
            };
            let r = incr::solve_incremental(&g, &opts).map_err(engine_failure)?;
            let s = r.stats();
            if let (Some(path), Some((h, _))) = (&invariant_out, &s.learned) {
                emit(&write_dump(h), Some(path))?;
            }
            let elapsed = start.elapsed().as_secs_f64();
            match r {
                IncrResult::Proved { cert, stats } => {
                    eprintln!(
                        "proved {} incr: {} win, {} invariant, {} rounds, {elapsed:.3}s",
                        g.name,
                        stats.win_calls(),
                        stats.invariant_calls(),
                        stats.rounds
                    );
                    emit(&write_certificate(&g, &Certificate::Incr(cert)), cert_out.as_deref())?;
                    Ok(EXIT_OK)
                }
                IncrResult::Timeout { stats } => {
                    eprintln!("timeout {} incr after {} iterations", g.name, stats.iterations.len());
                    Ok(EXIT_TIMEOUT)
                }
            }
        }
    }
}

fn check(model: &str, cert: &Path, game_profile: bool) -> Result<u8, Failure> {
    let g = load_model(model)?;
    let text = std::fs::read_to_string(cert).with_context(|| format!("reading {}", cert.display()))?;
    let c = parse_certificate(&g, &text)?;
    let profile = if game_profile || is_game(&g.name) { Profile::GAME } else { Profile::PROTOCOL };
    let (label, words) = match &c {
        Certificate::Mono(adv) => match verify::verify(&g, adv, profile).map_err(|e| Failure(EXIT_USAGE, e.into()))? {
            None => (None, Vec::new()),
            Some(ce) => (Some(ce.condition().to_string()), ce.words().into_iter().cloned().collect()),
        },
        Certificate::Incr(d) => match incr::check_disjunctive(&g, d).map_err(engine_failure)? {
            None => (None, Vec::new()),
            Some(v) => (Some(v.label()), v.words()),
        },
    };
    match label {
        None => {
            println!("conforms");
            Ok(EXIT_OK)
        }
        Some(l) => {
            println!("{l}");
            for w in words {
                println!("{}", g.alphabet.render(&w));
            }
            Ok(EXIT_VIOLATION)
        }
    }
}

fn parse_lengths(s: &str) -> Result<(usize, usize)> {
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse()?, b.trim().parse()?),
        None => {
            let n = s.trim().parse()?;
            (n, n)
        }
    };
    if a == 0 || a > b {
        bail!("bad length range `{s}`");
    }
    Ok((a, b))
}

fn oracle(model: &str, lengths: &str, cap: usize) -> Result<u8, Failure> {
    let g = load_model(model)?;
    let (lo, hi) = parse_lengths(lengths)?;
    println!("length\tconfigs\treachable\tall_reachable_winning\tmdp_agrees");
    let mut code = EXIT_OK;
    for n in lo..=hi {
        let e = match expand(&g, n, cap) {
            Ok(e) => e,
            Err(err) => {
                eprintln!("length {n}: {err}");
                println!("{n}\t---\t---\t---\t---");
                code = EXIT_TIMEOUT;
                continue;
            }
        };
        let a = agreement(&e, MdpOptions::default()).map_err(|e| Failure(EXIT_TIMEOUT, e.into()))?;
        println!("{n}\t{}\t{}\t{}\t{}", a.configs, a.reachable, a.all_reachable_winning, a.disagreements == 0);
    }
    Ok(code)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Prove {
            model,
            mode,
            with_invariant,
            with_symmetry,
            game_profile,
            timeout,
            max_states,
            cert_out,
            invariant_out,
            dump_cnf,
            lstar_precision,
            seed,
        } => prove(
            &model,
            mode,
            with_invariant,
            with_symmetry,
            game_profile,
            timeout,
            max_states,
            cert_out,
            invariant_out,
            dump_cnf,
            lstar_precision,
            seed,
        ),
        Command::Check { model, cert, game_profile } => check(&model, &cert, game_profile),
        Command::Oracle { model, lengths, cap } => oracle(&model, &lengths, cap),
        Command::Bench { suite, timeout, seed, jobs } => {
            let cells = bench::suite(&suite).ok_or_else(|| anyhow!("unknown suite `{suite}` (default, full)"))?;
            let t = timeout.unwrap_or(if suite == "full" { 7200.0 } else { 600.0 });
            print!("{}", bench::run(&cells, timeout_of(t), seed, jobs.max(1)));
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
