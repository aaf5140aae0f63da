//! `lexrule`: analyze, generate and compile word forms over a grammar
//! directory.

use std::collections::HashSet;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use lexrule::lexicon::{stats, EntryKey};
use lexrule::{CompileOptions, Engine, Grammar, LexicalEntry, Mode};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use unicode_normalization::UnicodeNormalization;

#[derive(Parser)]
#[command(name = "lexrule", version, about = "Lexical-rule morphology over typed feature structures")]
struct Cli {
    /// Directory with hierarchy.tfs, rules.lr, senses.tbl and roots.lex.
    #[arg(long, global = true, env = "LEXRULE_GRAMMAR", default_value = "grammar")]
    grammar: PathBuf,

    #[arg(long, global = true, default_value = "runtime", value_parser = parse_mode)]
    mode: Mode,

    /// Causatives allowed in a row.
    #[arg(long, global = true)]
    max_caus: Option<u8>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every analysis of each word as one JSON object per line.
    Analyze {
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Print the surface forms of a lemma matching a spec such as
    /// `case=locative` or `caus+past`.
    Generate {
        lemma: String,
        #[arg(long)]
        spec: String,
    },
    /// Expand every root, write the lexicon as JSON and print statistics.
    Compile {
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare both modes on a word list: sizes, build time, latency.
    Bench {
        /// One word per line; defaults to words.txt in the grammar directory.
        #[arg(long)]
        words: Option<PathBuf>,
        /// Also check every surface form of the compiled lexicon.
        #[arg(long)]
        all_keys: bool,
    },
    /// Compile and print statistics only.
    Stats,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

/// Config errors end the process with status 2.
#[derive(Debug)]
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Fail(msg)) => {
            eprintln!("lexrule: {}", msg.lines().next().unwrap_or_default());
            ExitCode::from(2)
        }
    }
}

/// NFC, then lowercase with the Turkish dotted and dotless i.
fn normalize(word: &str) -> String {
    word.trim()
        .nfc()
        .flat_map(|c| match c {
            'I' => vec!['ı'],
            'İ' => vec!['i'],
            c => c.to_lowercase().collect(),
        })
        .collect()
}

fn load(cli: &Cli) -> Result<Arc<Grammar>, Fail> {
    let mut grammar = Grammar::load_dir(&cli.grammar)?;
    if let Some(m) = cli.max_caus {
        let options = CompileOptions {
            max_caus: m,
            ..grammar.options()
        };
        grammar = grammar.with_options(options);
    }
    Ok(Arc::new(grammar))
}

fn analysis_line(surface: &str, e: &LexicalEntry) -> Value {
    let mut obj = Map::new();
    obj.insert("surface".into(), Value::String(surface.to_string()));
    if let Value::Object(fields) = e.to_json() {
        obj.extend(fields);
    }
    Value::Object(obj)
}

fn run(cli: Cli) -> Result<ExitCode, Fail> {
    let grammar = load(&cli)?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match &cli.command {
        Command::Analyze { words } => {
            let engine = Engine::new(grammar, cli.mode)?;
            let mut all_found = true;
            for w in words {
                let surface = normalize(w);
                let found = engine.analyze(&surface)?;
                all_found &= !found.is_empty();
                for e in &found {
                    writeln!(out, "{}", analysis_line(&surface, e))?;
                }
            }
            out.flush()?;
            Ok(if all_found { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Generate { lemma, spec } => {
            for form in grammar.generate(&normalize(lemma), spec)? {
                writeln!(out, "{form}")?;
            }
            out.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compile { out: path } => {
            let lex = grammar.compile()?;
            let file = std::fs::File::create(path).map_err(|e| Fail(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            serde_json::to_writer(&mut w, &lex.to_json())?;
            w.flush()?;
            writeln!(out, "{}", stats(&lex))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Stats => {
            let lex = grammar.compile()?;
            writeln!(out, "{}", serde_json::to_string_pretty(&stats(&lex))?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { words, all_keys } => {
            let path = words.clone().unwrap_or_else(|| cli.grammar.join("words.txt"));
            let list = read_words(&path)?;
            let report = bench(grammar, &list, *all_keys)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read_words(path: &Path) -> Result<Vec<String>, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail(format!("{}: {e}", path.display())))?;
    Ok(text
        .lines()
        .map(|l| l.split('%').next().unwrap_or_default())
        .map(normalize)
        .filter(|l| !l.is_empty())
        .collect())
}

type Keys = HashSet<EntryKey>;

fn keys(entries: &[LexicalEntry]) -> Keys {
    entries.iter().map(LexicalEntry::key).collect()
}

/// Analyze every word in parallel; results come back in input order.
fn timed_analyses(engine: &Engine, words: &[String]) -> Result<(Vec<Keys>, Duration), Fail> {
    let start = Instant::now();
    let results: Vec<Keys> = words
        .par_iter()
        .map(|w| engine.analyze(w).map(|es| keys(&es)))
        .collect::<Result<_, _>>()?;
    Ok((results, start.elapsed()))
}

fn per_query_ms(total: Duration, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        total.as_secs_f64() * 1000.0 / n as f64
    }
}

fn bench(grammar: Arc<Grammar>, words: &[String], all_keys: bool) -> Result<Value, Fail> {
    let runtime = Engine::new(grammar.clone(), Mode::Runtime)?;
    let build = Instant::now();
    let compiled = Engine::new(grammar, Mode::Compiled)?;
    let build_time = build.elapsed();
    let lex = compiled.compiled().expect("compiled engine");

    let (rt, rt_time) = timed_analyses(&runtime, words)?;
    let (ct, ct_time) = timed_analyses(&compiled, words)?;
    let mut mismatches: Vec<&str> = words
        .iter()
        .zip(rt.iter().zip(&ct))
        .filter(|(_, (a, b))| a != b)
        .map(|(w, _)| w.as_str())
        .collect();

    let mut report = json!({
        "words": words.len(),
        "runtime": {
            "resident_entries": runtime.resident_count(),
            "total_ms": rt_time.as_secs_f64() * 1000.0,
            "per_query_ms": per_query_ms(rt_time, words.len()),
        },
        "compiled": {
            "resident_entries": compiled.resident_count(),
            "surface_forms": lex.stats().distinct_keys,
            "build_ms": build_time.as_secs_f64() * 1000.0,
            "total_ms": ct_time.as_secs_f64() * 1000.0,
            "per_query_ms": per_query_ms(ct_time, words.len()),
        },
        "analyses": rt.iter().map(Keys::len).sum::<usize>(),
        "unanalyzed": words.iter().zip(&rt).filter(|(_, k)| k.is_empty()).map(|(w, _)| w.clone()).collect::<Vec<_>>(),
    });

    if all_keys {
        let surfaces: Vec<String> = lex.keys().map(str::to_string).collect();
        let (rt_all, _) = timed_analyses(&runtime, &surfaces)?;
        let bad = surfaces
            .iter()
            .zip(&rt_all)
            .filter(|(s, k)| **k != keys(lex.lookup(s)))
            .count();
        report["all_keys"] = json!({ "checked": surfaces.len(), "mismatches": bad });
    }
    mismatches.dedup();
    report["mismatches"] = json!(mismatches);
    report["equivalent"] = json!(mismatches.is_empty()
        && report.get("all_keys").map_or(true, |a| a["mismatches"] == 0));
    Ok(report)
}
