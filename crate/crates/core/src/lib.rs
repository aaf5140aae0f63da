//! A morphological lexicon over typed feature structures.
//!
//! Words are built from roots by lexical rules. Each rule edits a typed
//! feature structure, attaches a suffix whose vowels and consonants are
//! fixed by Turkish harmony and voicing, and composes a logical form. The
//! lexicon can be queried by applying rules on demand or precompiled into
//! every derivable form.

pub mod feature;
pub mod lexicon;
pub mod phonology;
pub mod rules;

pub use feature::{FeatureStructure, SemanticForm, TypeLattice};
pub use lexicon::{CompileOptions, CompiledLexicon, Engine, Grammar, LexicalEntry, Mode};
