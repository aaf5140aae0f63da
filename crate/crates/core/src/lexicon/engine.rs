use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::compile::CompiledLexicon;
use super::entry::LexicalEntry;
use super::grammar::{EngineError, Grammar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Keep only roots; apply rules per query.
    Runtime,
    /// Expand everything up front; queries are lookups.
    Compiled,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "runtime" => Ok(Mode::Runtime),
            "compiled" => Ok(Mode::Compiled),
            _ => Err(format!("unknown mode `{s}` (runtime or compiled)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Runtime => "runtime",
            Mode::Compiled => "compiled",
        })
    }
}

/// Analysis front end over one grammar in either mode.
pub struct Engine {
    grammar: Arc<Grammar>,
    compiled: Option<CompiledLexicon>,
}

impl Engine {
    pub fn new(grammar: Arc<Grammar>, mode: Mode) -> Result<Engine, EngineError> {
        let compiled = match mode {
            Mode::Runtime => None,
            Mode::Compiled => Some(grammar.compile()?),
        };
        Ok(Engine { grammar, compiled })
    }

    pub fn mode(&self) -> Mode {
        if self.compiled.is_some() {
            Mode::Compiled
        } else {
            Mode::Runtime
        }
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn compiled(&self) -> Option<&CompiledLexicon> {
        self.compiled.as_ref()
    }

    /// Entries held in memory: roots only at runtime, everything when
    /// compiled. Does not change with queries.
    pub fn resident_count(&self) -> usize {
        match &self.compiled {
            Some(c) => c.entry_count(),
            None => self.grammar.resident_entries().len(),
        }
    }

    pub fn analyze(&self, surface: &str) -> Result<Vec<LexicalEntry>, EngineError> {
        match &self.compiled {
            Some(c) => Ok(c.lookup(surface).to_vec()),
            None => self.grammar.analyze(surface),
        }
    }
}
