//! Roots, word entries, on-demand analysis and full precompilation.

mod compile;
mod engine;
mod entry;
mod grammar;
mod root;

pub use compile::{compile_closure, stats, BuildStats, CompiledLexicon};
pub use engine::{Engine, Mode};
pub use entry::{Applied, EntryKey, LexicalEntry};
pub use grammar::{
    bundled, spec_of, CompileOptions, EngineError, Grammar, GrammarError, HIERARCHY_FILE, ROOTS_FILE, RULES_FILE,
    SENSES_FILE,
};
pub use root::{load_roots, RootEntry, RootFileError, RootLexicon, SEMANTIC_FEATURES};
