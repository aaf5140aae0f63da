use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::feature::{FeatureStructure, SemanticForm};
use crate::phonology::StemFlags;
use crate::rules::{Slot, SlotState};

/// One rule application in an entry's derivation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Applied {
    pub rule: String,
    pub slot: Slot,
    pub value: String,
}

/// A word form: surface string, sign, logical form and how it was derived.
#[derive(Clone, Debug)]
pub struct LexicalEntry {
    pub phon: String,
    pub sign: FeatureStructure,
    pub lf: SemanticForm,
    pub history: Vec<Applied>,
    pub root: String,
    /// Produced by a feeder rule: only an input to later rules, never a
    /// word of its own.
    pub intermediate: bool,
    pub(crate) state: SlotState,
    pub(crate) flags: StemFlags,
    pub(crate) features: Arc<BTreeSet<String>>,
}

/// Identity of an entry for deduplication: two derivations that reach the
/// same surface, sign and logical form are one entry.
pub type EntryKey = (String, FeatureStructure, SemanticForm);

impl LexicalEntry {
    pub fn key(&self) -> EntryKey {
        (self.phon.clone(), self.sign.clone(), self.lf.clone())
    }

    /// Key for search: also distinguishes entries that may still expand
    /// differently.
    pub(crate) fn expansion_key(&self) -> (EntryKey, SlotState, StemFlags) {
        (self.key(), self.state, self.flags)
    }

    pub fn type_name(&self) -> &str {
        self.sign.type_name()
    }

    pub fn case(&self) -> Option<&str> {
        self.sign.type_at("SYNSEM|LOCAL|CAT|HEAD|CASE")
    }

    pub fn rule_ids(&self) -> Vec<&str> {
        self.history.iter().map(|a| a.rule.as_str()).collect()
    }

    pub fn semantic_features(&self) -> &BTreeSet<String> {
        &self.features
    }

    pub fn flags(&self) -> StemFlags {
        self.flags
    }

    /// Slot → value. The causative slot's value is how often it was
    /// filled.
    pub fn slots(&self) -> BTreeMap<Slot, String> {
        let mut out: BTreeMap<Slot, String> = BTreeMap::new();
        for a in &self.history {
            if a.slot.repeatable() {
                let n = out
                    .get(&a.slot)
                    .and_then(|v| v.parse::<usize>().ok())
                    .unwrap_or(0);
                out.insert(a.slot, (n + 1).to_string());
            } else {
                out.insert(a.slot, a.value.clone());
            }
        }
        out
    }

    /// Deterministic order: surface, root, then derivation.
    pub(crate) fn sort_key(&self) -> (String, String, Vec<Applied>, String) {
        (
            self.phon.clone(),
            self.root.clone(),
            self.history.clone(),
            self.sign.to_description(),
        )
    }

    pub fn to_json(&self) -> Value {
        let slots: serde_json::Map<String, Value> = self
            .slots()
            .into_iter()
            .map(|(s, v)| (s.name().to_string(), Value::String(v)))
            .collect();
        json!({
            "phon": self.phon,
            "root": self.root,
            "type": self.type_name(),
            "history": self.rule_ids(),
            "case": self.case(),
            "slots": slots,
            "lf": self.lf,
            "sign": self.sign.to_description(),
        })
    }
}

impl fmt::Display for LexicalEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}", self.phon, self.root)?;
        for a in &self.history {
            write!(f, "+{}", a.rule)?;
        }
        write!(f, "] {} {}", self.type_name(), self.lf)
    }
}

/// Sort and drop entries with a key already seen, keeping the first.
pub(crate) fn sort_dedup(mut entries: Vec<LexicalEntry>) -> Vec<LexicalEntry> {
    entries.sort_by_cached_key(LexicalEntry::sort_key);
    let mut seen = std::collections::HashSet::new();
    entries.retain(|e| seen.insert(e.key()));
    entries
}
