use std::collections::{BTreeSet, HashSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use crate::feature::{load_hierarchy, FeatureStructure, HierarchyError, TypeLattice};
use crate::phonology::{candidate_strips, MorphTemplate};
use crate::rules::{parse_rules, LexicalRule, RuleContext, RuleError, RuleFileError, SenseTable, Slot};

use super::entry::{sort_dedup, LexicalEntry};
use super::root::{load_roots, RootEntry, RootFileError, RootLexicon};

pub const HIERARCHY_FILE: &str = "hierarchy.tfs";
pub const RULES_FILE: &str = "rules.lr";
pub const SENSES_FILE: &str = "senses.tbl";
pub const ROOTS_FILE: &str = "roots.lex";

pub mod bundled {
    //! The grammar shipped with the crate.
    pub const HIERARCHY: &str = include_str!("../../../../grammar/hierarchy.tfs");
    pub const RULES: &str = include_str!("../../../../grammar/rules.lr");
    pub const SENSES: &str = include_str!("../../../../grammar/senses.tbl");
    pub const ROOTS: &str = include_str!("../../../../grammar/roots.lex");
    pub const WORDS: &str = include_str!("../../../../grammar/words.txt");
}

#[derive(Debug, Error)]
pub enum GrammarError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("hierarchy: {0}")]
    Hierarchy(#[from] HierarchyError),
    #[error("rules: {0}")]
    Rules(#[from] RuleFileError),
    #[error("senses: line {line}: {message}")]
    Senses { line: usize, message: String },
    #[error("roots: {0}")]
    Roots(#[from] RootFileError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("unknown lemma `{0}`")]
    UnknownLemma(String),
    #[error("bad generation spec: {0}")]
    BadSpec(String),
    #[error("rule `{rule}` keeps applying to `{root}` past depth {depth}")]
    UnboundedRecursion { rule: String, root: String, depth: usize },
}

/// Limits on rule application.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompileOptions {
    /// Causatives allowed in a row.
    pub max_caus: u8,
    /// Longest derivation before the grammar is declared unbounded.
    pub max_depth: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            max_caus: 2,
            max_depth: 32,
        }
    }
}

/// A loaded grammar: lattice, rules, sense table and roots with their base
/// entries. Immutable and shareable across threads.
pub struct Grammar {
    lattice: Arc<TypeLattice>,
    rules: Vec<LexicalRule>,
    senses: SenseTable,
    lexicon: RootLexicon,
    bases: Vec<LexicalEntry>,
    templates: Vec<MorphTemplate>,
    options: CompileOptions,
}

impl Grammar {
    pub fn load(hierarchy: &str, rules: &str, senses: &str, roots: &str) -> Result<Grammar, GrammarError> {
        let lattice = load_hierarchy(hierarchy)?;
        let rules = parse_rules(rules, &lattice)?;
        let senses = SenseTable::parse(senses).map_err(|(line, message)| GrammarError::Senses { line, message })?;
        let lexicon = load_roots(roots, &lattice)?;
        let bases = lexicon
            .roots
            .iter()
            .map(|r| lexicon.base_entry(r, &lattice))
            .collect::<Result<Vec<_>, _>>()?;
        let templates: BTreeSet<MorphTemplate> = rules
            .iter()
            .filter_map(|r| r.allomorphs.as_ref())
            .flat_map(|a| a.templates().cloned())
            .collect();
        Ok(Grammar {
            lattice,
            rules,
            senses,
            lexicon,
            bases,
            templates: templates.into_iter().collect(),
            options: CompileOptions::default(),
        })
    }

    /// Load `hierarchy.tfs`, `rules.lr`, `senses.tbl` and `roots.lex` from
    /// a directory. A hierarchy or sense table missing there is taken from
    /// the nearest enclosing directory that has one.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Grammar, GrammarError> {
        let dir = dir.as_ref();
        let read = |name: &str| {
            let inherited = name == HIERARCHY_FILE || name == SENSES_FILE;
            let path = if inherited {
                dir.ancestors()
                    .map(|d| d.join(name))
                    .find(|p| p.is_file())
                    .unwrap_or_else(|| dir.join(name))
            } else {
                dir.join(name)
            };
            std::fs::read_to_string(&path).map_err(|source| GrammarError::Io { path, source })
        };
        Grammar::load(
            &read(HIERARCHY_FILE)?,
            &read(RULES_FILE)?,
            &read(SENSES_FILE)?,
            &read(ROOTS_FILE)?,
        )
    }

    pub fn bundled() -> Grammar {
        Grammar::load(bundled::HIERARCHY, bundled::RULES, bundled::SENSES, bundled::ROOTS)
            .expect("bundled grammar is valid")
    }

    pub fn with_options(mut self, options: CompileOptions) -> Grammar {
        self.options = options;
        self
    }

    pub fn options(&self) -> CompileOptions {
        self.options
    }

    pub fn lattice(&self) -> &Arc<TypeLattice> {
        &self.lattice
    }

    pub fn rules(&self) -> &[LexicalRule] {
        &self.rules
    }

    pub fn rule(&self, id: &str) -> Option<&LexicalRule> {
        self.rules.iter().find(|r| r.id == id)
    }

    pub fn senses(&self) -> &SenseTable {
        &self.senses
    }

    pub fn roots(&self) -> &[RootEntry] {
        &self.lexicon.roots
    }

    pub fn root_lexicon(&self) -> &RootLexicon {
        &self.lexicon
    }

    /// Every suffix template any rule can attach.
    pub fn templates(&self) -> &[MorphTemplate] {
        &self.templates
    }

    /// The entries runtime mode keeps in memory: one per root.
    pub fn resident_entries(&self) -> &[LexicalEntry] {
        &self.bases
    }

    pub fn base_entry(&self, lemma: &str) -> Option<&LexicalEntry> {
        self.bases.iter().find(|e| e.root == lemma)
    }

    /// An argument template from the root file, parsed.
    pub fn arg(&self, name: &str) -> Option<&FeatureStructure> {
        self.lexicon.args.get(name)
    }

    pub fn context(&self) -> RuleContext<'_> {
        RuleContext {
            senses: &self.senses,
            args: &self.lexicon.args,
            max_caus: self.options.max_caus,
        }
    }

    /// Apply one rule by id. Unknown ids give an empty result.
    pub fn apply_rule(&self, id: &str, entry: &LexicalEntry) -> Result<Vec<LexicalEntry>, RuleError> {
        match self.rule(id) {
            Some(r) => r.apply(entry, &self.context()),
            None => Ok(Vec::new()),
        }
    }

    /// Depth-first closure of `start`, visiting only outputs whose surface
    /// passes `keep`. Intermediate entries are expanded but not returned.
    pub(crate) fn closure<F>(&self, start: &LexicalEntry, keep: F) -> Result<Vec<LexicalEntry>, EngineError>
    where
        F: Fn(&str) -> bool,
    {
        let ctx = self.context();
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        seen.insert(start.expansion_key());
        let mut stack = vec![start.clone()];
        while let Some(e) = stack.pop() {
            for rule in &self.rules {
                if !rule.admits(&e, ctx.max_caus) {
                    continue;
                }
                let Some(phon) = rule.next_phon(&e) else {
                    continue;
                };
                if !keep(&phon) {
                    continue;
                }
                for next in rule.apply_with_phon(&e, phon, &ctx)? {
                    if next.history.len() > self.options.max_depth {
                        return Err(EngineError::UnboundedRecursion {
                            rule: rule.id.clone(),
                            root: e.root.clone(),
                            depth: self.options.max_depth,
                        });
                    }
                    if seen.insert(next.expansion_key()) {
                        stack.push(next);
                    }
                }
            }
            if !e.intermediate {
                out.push(e);
            }
        }
        Ok(out)
    }

    /// Lemmas of roots `surface` could be built on, found by repeatedly
    /// stripping suffix candidates.
    pub fn candidate_roots(&self, surface: &str) -> Vec<&LexicalEntry> {
        let mut stems: HashSet<String> = HashSet::new();
        let mut todo = vec![surface.to_string()];
        while let Some(s) = todo.pop() {
            if !stems.insert(s.clone()) {
                continue;
            }
            for strip in candidate_strips(&s, &self.templates) {
                if strip.template.is_some() && !stems.contains(&strip.stem) {
                    todo.push(strip.stem);
                }
            }
        }
        self.bases.iter().filter(|b| stems.contains(&b.root)).collect()
    }

    /// All analyses of `surface`, derived on demand from the roots.
    pub fn analyze(&self, surface: &str) -> Result<Vec<LexicalEntry>, EngineError> {
        let target: Vec<char> = surface.chars().collect();
        let viable = |phon: &str| prefix_viable(phon, &target);
        let mut found = Vec::new();
        for base in self.candidate_roots(surface) {
            for e in self.closure(base, viable)? {
                if e.phon == surface {
                    found.push(e);
                }
            }
        }
        Ok(sort_dedup(found))
    }

    /// Every word form of `lemma` (non-intermediate), deduplicated.
    pub fn paradigm(&self, lemma: &str) -> Result<Vec<LexicalEntry>, EngineError> {
        let base = self
            .base_entry(lemma)
            .ok_or_else(|| EngineError::UnknownLemma(lemma.to_string()))?;
        Ok(sort_dedup(self.closure(base, |_| true)?))
    }

    /// Surface forms of `lemma` whose analysis matches `spec`, sorted.
    ///
    /// `spec` is either a description (`[...]`) the sign must be subsumed
    /// by, or a list like `caus=2,tense=past` naming exactly the slots that
    /// are filled. Items are separated by `,`, `+` or `.`; a bare slot name
    /// accepts any value (the causative: exactly once), a bare rule value or id stands for its slot, and
    /// `3sg` (unmarked agreement) fills nothing.
    pub fn generate(&self, lemma: &str, spec: &str) -> Result<Vec<String>, EngineError> {
        let spec = GenSpec::parse(spec, self)?;
        let mut out: Vec<String> = self
            .paradigm(lemma)?
            .into_iter()
            .filter(|e| spec.matches(e))
            .map(|e| e.phon)
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Whether a partial surface can still grow into `target`: it must be a
/// prefix, except that its last letter may be a stop that later voices.
fn prefix_viable(phon: &str, target: &[char]) -> bool {
    let p: Vec<char> = phon.chars().collect();
    if p.len() > target.len() {
        return false;
    }
    let Some((&last, init)) = p.split_last() else {
        return true;
    };
    init == &target[..init.len()]
        && (last == target[init.len()] || matches!(last, 'p' | 'ç' | 't' | 'k'))
}

const UNMARKED_AGREEMENT: &str = "3sg";

enum GenSpec {
    Sign(FeatureStructure),
    Slots(Vec<(Slot, Option<String>)>),
}

fn slot_alias(key: &str) -> Option<Slot> {
    let k = key.to_ascii_lowercase();
    let s = match k.as_str() {
        "derivation" | "deriv" => Slot::Deriv,
        "substantive" | "subst" => Slot::Subst,
        "plural" | "plu" => Slot::Plu,
        "possessive" | "poss" => Slot::Poss,
        "case" => Slot::Case,
        "relative" | "rel" => Slot::Rel,
        "causative" | "caus" => Slot::Caus,
        "passive" | "pass" => Slot::Pass,
        "valency" | "val" => Slot::Val,
        "negation" | "neg" => Slot::Neg,
        "mood" => Slot::Mood,
        "aspect" | "asp" => Slot::Asp,
        "tense" => Slot::Tense,
        "person" => Slot::Person,
        "number" | "num" => Slot::Num,
        "adverbial" | "adv" => Slot::Adv,
        _ => return None,
    };
    Some(s)
}

impl GenSpec {
    fn parse(text: &str, g: &Grammar) -> Result<GenSpec, EngineError> {
        let text = text.trim();
        if text.starts_with('[') {
            return FeatureStructure::parse(&g.lattice, text)
                .map(GenSpec::Sign)
                .map_err(|e| EngineError::BadSpec(e.to_string()));
        }
        let mut slots: Vec<(Slot, Option<String>)> = Vec::new();
        for item in text.split([',', '+', '.']).map(str::trim).filter(|s| !s.is_empty()) {
            if item.eq_ignore_ascii_case(UNMARKED_AGREEMENT) {
                continue;
            }
            let (slot, v) = match item.split_once('=') {
                Some((k, v)) => (
                    slot_alias(k.trim()).ok_or_else(|| EngineError::BadSpec(format!("unknown key `{}`", k.trim())))?,
                    Some(v.trim().to_string()),
                ),
                None => match slot_alias(item) {
                    Some(slot) => (slot, None),
                    None => {
                        let rule = g
                            .rules
                            .iter()
                            .find(|r| r.value.eq_ignore_ascii_case(item) || r.id.eq_ignore_ascii_case(item))
                            .ok_or_else(|| EngineError::BadSpec(format!("unknown key `{item}`")))?;
                        (rule.slot, Some(item.to_string()))
                    }
                },
            };
            // A repeatable slot named without a count means once.
            let v = match v {
                None if slot.repeatable() => Some("1".to_string()),
                Some(v) if slot.repeatable() && v.parse::<usize>().is_err() => {
                    let known = g
                        .rules
                        .iter()
                        .any(|r| r.slot == slot && (r.value.eq_ignore_ascii_case(&v) || r.id.eq_ignore_ascii_case(&v)));
                    if !known {
                        return Err(EngineError::BadSpec(format!("no `{v}` for {slot}")));
                    }
                    Some("1".to_string())
                }
                v => v,
            };
            if let Some(v) = &v {
                let known = if slot.repeatable() {
                    v.parse::<usize>().is_ok_and(|n| n >= 1)
                } else {
                    g.rules
                        .iter()
                        .filter(|r| r.slot == slot)
                        .any(|r| r.value.eq_ignore_ascii_case(v) || r.id.eq_ignore_ascii_case(v))
                };
                if !known {
                    return Err(EngineError::BadSpec(format!("no `{v}` for {slot}")));
                }
            }
            if slots.iter().any(|(s, _)| *s == slot) {
                return Err(EngineError::BadSpec(format!("{slot} given twice")));
            }
            slots.push((slot, v));
        }
        Ok(GenSpec::Slots(slots))
    }

    fn matches(&self, e: &LexicalEntry) -> bool {
        match self {
            GenSpec::Sign(fs) => fs.subsumes(&e.sign),
            GenSpec::Slots(want) => {
                let have = e.slots();
                have.len() == want.len()
                    && want.iter().all(|(slot, v)| match (have.get(slot), v) {
                        (None, _) => false,
                        (Some(_), None) => true,
                        (Some(h), Some(v)) => {
                            h.eq_ignore_ascii_case(v)
                                || e.history
                                    .iter()
                                    .any(|a| a.slot == *slot && a.rule.eq_ignore_ascii_case(v))
                        }
                    })
            }
        }
    }
}

/// A spec that [`Grammar::generate`] maps back to exactly the slots `e`
/// fills.
pub fn spec_of(e: &LexicalEntry) -> String {
    e.slots()
        .into_iter()
        .map(|(s, v)| format!("{}={}", s.name().to_ascii_lowercase(), v))
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn viability() {
        let t: Vec<char> = "kitabı".chars().collect();
        assert!(prefix_viable("kitap", &t));
        assert!(prefix_viable("kitabı", &t));
        assert!(!prefix_viable("kitapta", &t));
        assert!(!prefix_viable("kalem", &t));
    }
}
