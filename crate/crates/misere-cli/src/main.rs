//! `misere` — command-line front end for the misère game engine.
//!
//! Exit codes: 0 success (or true), 1 false (`eq`/`upp`), 2 usage or domain
//! error, 3 game-notation parse error, 4 capacity exceeded (census day > 5,
//! count day > 7), 5 internal error (I/O, corrupt cache file).

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use misere_core::counting::Counter;
use misere_core::notation::{self, GameExpr};
use misere_core::parts::PartKind;
use misere_core::{Arena, Census, Error, GameId, Tower};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "misere", version, about = "Misère impartial game calculator")]
struct Cli {
    /// Directory holding reusable census files (census-day<N>.txt).
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,

    /// Number of worker threads (default: all cores). Never changes output.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Write the command's output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form of a game.
    Canon { game: String },
    /// Print the misère outcome (P or N) of a game.
    Outcome { game: String },
    /// Test two games for equality; exits 0 (equal) or 1 (distinct).
    Eq { left: String, right: String },
    /// Print the canonical form of a disjunctive sum.
    Sum { left: String, right: String },
    /// Print the canonical form of the mate of a game.
    Mate { game: String },
    /// Print the concubine of a game (a form whose mate cancels the game).
    Concubine { game: String },
    /// Print the parity (even or odd) of a game.
    Parity { game: String },
    /// Print the birthday of a game (formal birthday of its canonical form).
    Birthday { game: String },
    /// Print the part–counterpart table of a game.
    Parts { game: String },
    /// Print every prime partition of a game (parts normalized to even
    /// representatives).
    Primes { game: String },
    /// Test whether a game has a unique prime partition; exits 0 or 1.
    Upp { game: String },
    /// Enumerate the census of canonical games born by day N (N <= 5).
    Census { n: u32 },
    /// Print |M_N|, the number of games born by day N (N <= 7), as a sum of
    /// powers of two and, when it fits, in decimal.
    Count {
        n: u32,
        /// Print every term of the day-7 tower instead of an abridged view.
        #[arg(long)]
        full: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // Ignore the error from a second initialization (tests, etc.).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 3,
        Error::Capacity(_) | Error::InsufficientCensus { .. } | Error::TooLarge(_) => 4,
        Error::Domain(_) | Error::InvalidHandle(..) => 2,
        _ => 5,
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let arena = Arena::new();
    let game = |text: &str| -> Result<GameId, Error> {
        let expr: GameExpr = notation::parse(text)?;
        notation::build(&arena, &expr)
    };
    match &cli.command {
        Command::Canon { game: g } => {
            let c = arena.canonicalize(game(g)?);
            let s = notation::display(&arena, c);
            emit(cli, &s, json!({ "canonical": s }))?;
            Ok(0)
        }
        Command::Outcome { game: g } => {
            let o = arena.outcome(game(g)?);
            emit(cli, &o.to_string(), json!({ "outcome": o.to_string() }))?;
            Ok(0)
        }
        Command::Eq { left, right } => {
            let equal = arena.equals(game(left)?, game(right)?);
            emit(cli, if equal { "true" } else { "false" }, json!({ "equal": equal }))?;
            Ok(if equal { 0 } else { 1 })
        }
        Command::Sum { left, right } => {
            let s = arena.sum(game(left)?, game(right)?);
            let text = notation::display(&arena, s);
            emit(cli, &text, json!({ "sum": text }))?;
            Ok(0)
        }
        Command::Mate { game: g } => {
            let m = arena.canonicalize(arena.mate(game(g)?));
            let text = notation::display(&arena, m);
            emit(cli, &text, json!({ "mate": text }))?;
            Ok(0)
        }
        Command::Concubine { game: g } => {
            let c = arena.concubine(arena.canonicalize(game(g)?));
            let text = notation::display(&arena, c);
            emit(cli, &text, json!({ "concubine": text }))?;
            Ok(0)
        }
        Command::Parity { game: g } => {
            let p = arena.parity(arena.canonicalize(game(g)?));
            emit(cli, &p.to_string(), json!({ "parity": p.to_string() }))?;
            Ok(0)
        }
        Command::Birthday { game: g } => {
            let b = arena.birthday(game(g)?);
            emit(cli, &b.to_string(), json!({ "birthday": b }))?;
            Ok(0)
        }
        Command::Parts { game: g } => {
            let c = arena.canonicalize(game(g)?);
            let table = arena.parts(c);
            let mut lines = Vec::new();
            let mut entries = Vec::new();
            for rec in table.records() {
                let part = notation::display(&arena, rec.part);
                let counterpart = notation::display(&arena, rec.counterpart);
                let kind = match rec.kind {
                    PartKind::Novel => "novel",
                    PartKind::Derived => "derived",
                };
                lines.push(format!("{part} + {counterpart} ({kind})"));
                entries.push(json!({
                    "part": part,
                    "counterpart": counterpart,
                    "kind": kind,
                }));
            }
            emit(cli, &lines.join("\n"), json!({ "partitions": entries }))?;
            Ok(0)
        }
        Command::Primes { game: g } => {
            let c = arena.canonicalize(game(g)?);
            let partitions = arena.prime_partitions(c)?;
            let mut lines = Vec::new();
            let mut entries = Vec::new();
            for p in partitions.iter() {
                let names: Vec<String> =
                    p.iter().map(|&x| notation::display(&arena, x)).collect();
                lines.push(names.join(" + "));
                entries.push(Value::from(names));
            }
            emit(cli, &lines.join("\n"), json!({ "prime_partitions": entries }))?;
            Ok(0)
        }
        Command::Upp { game: g } => {
            let c = arena.canonicalize(game(g)?);
            let upp = arena.has_upp(c)?;
            emit(cli, if upp { "true" } else { "false" }, json!({ "upp": upp }))?;
            Ok(if upp { 0 } else { 1 })
        }
        Command::Census { n } => {
            let census = obtain_census(cli, *n)?;
            if let Some(path) = &cli.out {
                census.save(path)?;
                println!("day={} count={} file={}", census.day(), census.len(), path.display());
            } else {
                let text = format!("day={} count={}", census.day(), census.len());
                emit(cli, &text, json!({ "day": census.day(), "count": census.len() }))?;
            }
            Ok(0)
        }
        Command::Count { n, full } => {
            if *n > 7 {
                return Err(Error::Capacity(format!(
                    "count supports days up to 7, got {n}"
                )));
            }
            // The recurrences reach two days past the census, so day 6 only
            // needs the (instant) day-4 census; day 7 needs day 5.
            let day = if *n >= 7 { 5 } else { n.saturating_sub(1).min(4) };
            let census = obtain_census(cli, day)?;
            let counter = Counter::new(&census);
            let mut tower = counter.m_sym(*n)?;
            // Day 6 is published with like terms combined; day 5 is published
            // raw, and the day-7 tower is already folded by construction.
            if *n == 6 {
                tower = tower.normalize();
            }
            let decimal = tower.to_decimal(64).ok();
            let rendered = render_tower(&tower, *full);
            let text = match &decimal {
                Some(v) => format!("{rendered} = {v}"),
                None => rendered.clone(),
            };
            emit(
                cli,
                &text,
                json!({
                    "n": n,
                    "tower": rendered,
                    "terms": tower.term_count(),
                    "decimal": decimal.as_ref().and_then(|v| v.to_u64()),
                }),
            )?;
            Ok(0)
        }
    }
}

/// Load the day-`n` census from the cache directory when possible, otherwise
/// enumerate it (and populate the cache if one was given).
fn obtain_census(cli: &Cli, n: u32) -> Result<Census, Error> {
    if let Some(dir) = &cli.cache {
        let path = cache_path(dir, n);
        if path.is_file() {
            return Census::load(&path);
        }
        let census = Census::enumerate(n)?;
        std::fs::create_dir_all(dir)?;
        census.save(&path)?;
        return Ok(census);
    }
    Census::enumerate(n)
}

fn cache_path(dir: &Path, n: u32) -> PathBuf {
    dir.join(format!("census-day{n}.txt"))
}

/// Replaces exponents that fit in 63 bits by their plain integer values, so
/// e.g. the day-6 tower prints `2^2096640` rather than `2^(2^21 - 2^9)`.
fn flatten(tower: &Tower) -> Tower {
    let terms = tower
        .terms()
        .iter()
        .map(|t| misere_core::tower::Term {
            coeff: t.coeff.clone(),
            exponent: t
                .exponent
                .to_decimal(63)
                .map(Tower::int)
                .unwrap_or_else(|_| t.exponent.clone()),
        })
        .collect();
    Tower::from_parts(terms, tower.constant().clone())
}

/// Presentation form of a tower; very long sums (day 7) are abridged to the
/// leading and trailing terms unless `full` is set.
fn render_tower(tower: &Tower, full: bool) -> String {
    const HEAD: usize = 4;
    const TAIL: usize = 2;
    // Only the day-7 tower (three quarters of a million terms, already in
    // presentation order) is ever abridged.
    if full || tower.term_count() <= 1000 {
        return flatten(tower).to_string();
    }
    let head = flatten(&Tower::from_parts(tower.terms()[..HEAD].to_vec(), 0.into()));
    let tail = flatten(&Tower::from_parts(
        tower.terms()[tower.term_count() - TAIL..].to_vec(),
        tower.constant().clone(),
    ));
    let omitted = tower.term_count() - HEAD - TAIL;
    let tail = tail.to_string();
    let (joiner, tail) = match tail.strip_prefix('-') {
        Some(rest) => (" - ", rest.to_string()),
        None => (" + ", tail),
    };
    format!("{head} ... [{omitted} terms omitted] ...{joiner}{tail}")
}

/// Write the command's payload to `--out` or stdout in the selected format.
fn emit(cli: &Cli, text: &str, jsonv: Value) -> Result<(), Error> {
    let body = match cli.format {
        Format::Text => format!("{text}\n"),
        Format::Json => format!("{jsonv:#}\n"),
    };
    match &cli.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(body.as_bytes())?;
        }
        None => print!("{body}"),
    }
    Ok(())
}
