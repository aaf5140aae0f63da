use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::rules::Slot;

use super::entry::{sort_dedup, LexicalEntry};
use super::grammar::{EngineError, Grammar};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BuildStats {
    pub total: usize,
    pub per_root: BTreeMap<String, usize>,
    /// Entries with at least one rule applied at each slot.
    pub per_slot: BTreeMap<Slot, usize>,
    /// Distinct surface strings.
    pub distinct_keys: usize,
    pub roots: usize,
    #[serde(serialize_with = "millis")]
    pub wall_time: Duration,
}

fn millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1000.0)
}

/// Every word form of every root, indexed by surface string.
#[derive(Clone, Debug, Default)]
pub struct CompiledLexicon {
    index: BTreeMap<String, Vec<LexicalEntry>>,
    stats: BuildStats,
}

impl CompiledLexicon {
    pub fn lookup(&self, surface: &str) -> &[LexicalEntry] {
        self.index.get(surface).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.index.keys().map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexicalEntry> {
        self.index.values().flatten()
    }

    pub fn entry_count(&self) -> usize {
        self.index.values().map(Vec::len).sum()
    }

    pub fn stats(&self) -> &BuildStats {
        &self.stats
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self.entries().map(LexicalEntry::to_json).collect();
        json!({ "entries": entries, "stats": stats(self) })
    }
}

/// Statistics report for a compiled lexicon.
pub fn stats(lex: &CompiledLexicon) -> Value {
    serde_json::to_value(&lex.stats).expect("stats serialize")
}

/// Apply rules to every root until nothing new appears. Roots are expanded
/// in parallel; the merge is order-insensitive.
pub fn compile_closure(grammar: &Grammar) -> Result<CompiledLexicon, EngineError> {
    compile_roots(grammar, grammar.resident_entries())
}

pub(crate) fn compile_roots(grammar: &Grammar, bases: &[LexicalEntry]) -> Result<CompiledLexicon, EngineError> {
    let start = Instant::now();
    let per_root: Vec<Vec<LexicalEntry>> = bases
        .par_iter()
        .map(|b| grammar.closure(b, |_| true))
        .collect::<Result<_, _>>()?;
    let all = sort_dedup(per_root.into_iter().flatten().collect());

    let mut stats = BuildStats {
        roots: bases.len(),
        ..BuildStats::default()
    };
    for b in bases {
        stats.per_root.insert(b.root.clone(), 0);
    }
    let mut index: BTreeMap<String, Vec<LexicalEntry>> = BTreeMap::new();
    for e in all {
        *stats.per_root.entry(e.root.clone()).or_default() += 1;
        for s in e.slots().keys() {
            *stats.per_slot.entry(*s).or_default() += 1;
        }
        index.entry(e.phon.clone()).or_default().push(e);
    }
    stats.total = index.values().map(Vec::len).sum();
    stats.distinct_keys = index.len();
    stats.wall_time = start.elapsed();
    log::info!(
        "compiled {} entries ({} surface forms) from {} roots in {:?}",
        stats.total,
        stats.distinct_keys,
        stats.roots,
        stats.wall_time
    );
    Ok(CompiledLexicon { index, stats })
}

impl Grammar {
    pub fn compile(&self) -> Result<CompiledLexicon, EngineError> {
        compile_closure(self)
    }

    /// Compile a subset of roots.
    pub fn compile_lemmas(&self, lemmas: &[&str]) -> Result<CompiledLexicon, EngineError> {
        let bases: Vec<LexicalEntry> = lemmas
            .iter()
            .map(|l| {
                self.base_entry(l)
                    .cloned()
                    .ok_or_else(|| EngineError::UnknownLemma(l.to_string()))
            })
            .collect::<Result<_, _>>()?;
        compile_roots(self, &bases)
    }
}
