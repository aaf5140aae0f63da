use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::feature::{logical_lines, Description, DescriptionError, FeatureStructure, TypeLattice};
use crate::lexicon::{Applied, LexicalEntry};
use crate::phonology::{realize, Allomorphs, StemFlags};

use super::lf::LfAction;
use super::senses::SenseTable;
use super::slot::Slot;
use super::subcat::Procedure;

/// Misconfigured rules. Distinct from a rule simply not applying, which is
/// an empty result.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("rule `{rule}`: output edits are ill-typed for input {input}")]
    IllTyped { rule: String, input: String },
    #[error("rule `{rule}`: output has type `{ty}`, which is not a word")]
    NotAWord { rule: String, ty: String },
    #[error("rule `{rule}`: {source}")]
    Description { rule: String, source: DescriptionError },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct RuleFileError {
    pub line: usize,
    pub message: String,
}

/// Everything besides the entry a rule application may consult.
pub struct RuleContext<'a> {
    pub senses: &'a SenseTable,
    /// Named argument templates for procedures (`subj`, ...).
    pub args: &'a BTreeMap<String, FeatureStructure>,
    pub max_caus: u8,
}

#[derive(Clone, Debug)]
pub struct LexicalRule {
    pub id: String,
    pub slot: Slot,
    /// Slot value reported for entries this rule produced.
    pub value: String,
    /// `None` for zero-affix rules.
    pub allomorphs: Option<Allomorphs>,
    pub input: Description,
    pub output: Option<Description>,
    pub lf: LfAction,
    pub procedure: Option<Procedure>,
    /// Root semantic features the rule needs.
    pub requires: Vec<String>,
    pub feeder: bool,
    pub line: usize,
    source: String,
}

const KEYS: [&str; 9] = ["slot", "val", "tmpl", "in", "out", "lf", "proc", "req", "feeder"];

/// Split `k1=v1 k2=v2 ...` where values may contain spaces; a key is only
/// recognized at the start or after whitespace.
fn attributes(text: &str) -> Result<Vec<(&'static str, &str)>, String> {
    let mut starts: Vec<(usize, &'static str)> = Vec::new();
    let mut prev_ws = true;
    for (i, c) in text.char_indices() {
        if prev_ws {
            if let Some(k) = KEYS.iter().find(|k| text[i..].starts_with(&format!("{k}="))) {
                starts.push((i, k));
            }
        }
        prev_ws = c.is_whitespace();
    }
    if let Some(&(first, _)) = starts.first() {
        if !text[..first].trim().is_empty() {
            return Err(format!("unexpected `{}`", text[..first].trim()));
        }
    } else if !text.trim().is_empty() {
        return Err(format!("unexpected `{}`", text.trim()));
    }
    let mut out = Vec::new();
    for (n, &(pos, key)) in starts.iter().enumerate() {
        let end = starts.get(n + 1).map(|&(p, _)| p).unwrap_or(text.len());
        let value = text[pos + key.len() + 1..end].trim();
        if out.iter().any(|&(k, _)| k == key) {
            return Err(format!("`{key}` given twice"));
        }
        out.push((key, value));
    }
    Ok(out)
}

impl LexicalRule {
    /// Parse one `rule <id> slot=... tmpl=... in=... out=... lf=...` line.
    pub fn parse(text: &str, line: usize, lat: &TypeLattice) -> Result<LexicalRule, RuleFileError> {
        let err = |message: String| RuleFileError { line, message };
        let rest = text
            .strip_prefix("rule")
            .filter(|r| r.starts_with(char::is_whitespace))
            .ok_or_else(|| err("expected `rule <id> ...`".into()))?
            .trim_start();
        let (id, rest) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
        let attrs = attributes(rest).map_err(|m| err(format!("rule `{id}`: {m}")))?;
        let get = |k: &str| attrs.iter().find(|&&(key, _)| key == k).map(|&(_, v)| v);
        let descr = |k: &str, v: &str| {
            Description::parse(v, lat).map_err(|e| err(format!("rule `{id}`: `{k}`: {e}")))
        };

        let slot: Slot = get("slot")
            .ok_or_else(|| err(format!("rule `{id}`: missing slot")))?
            .parse()
            .map_err(|m| err(format!("rule `{id}`: {m}")))?;
        let allomorphs = match get("tmpl") {
            None | Some("0") => None,
            Some(t) => Some(
                t.parse::<Allomorphs>()
                    .map_err(|e| err(format!("rule `{id}`: {e}")))?,
            ),
        };
        let input = descr("in", get("in").unwrap_or("word"))?;
        let output = get("out").map(|o| descr("out", o)).transpose()?;
        let lf = get("lf")
            .unwrap_or("identity")
            .parse()
            .map_err(|m| err(format!("rule `{id}`: {m}")))?;
        let procedure = get("proc")
            .map(|p| p.parse())
            .transpose()
            .map_err(|m| err(format!("rule `{id}`: {m}")))?;
        let requires = get("req")
            .map(|r| {
                r.split(',')
                    .map(|f| f.trim().trim_start_matches('+').to_string())
                    .filter(|f| !f.is_empty())
                    .collect()
            })
            .unwrap_or_default();
        let feeder = match get("feeder") {
            None | Some("no") => false,
            Some("yes") => true,
            Some(v) => return Err(err(format!("rule `{id}`: feeder must be yes or no, not `{v}`"))),
        };
        Ok(LexicalRule {
            id: id.to_string(),
            value: get("val").unwrap_or(id).to_string(),
            slot,
            allomorphs,
            input,
            output,
            lf,
            procedure,
            requires,
            feeder,
            line,
            source: text.to_string(),
        })
    }

    /// The rule as written in the rule file.
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Surface form the rule would give `entry`, or `None` if no allomorph
    /// fits. Cheap; callers use it to prune before unification.
    pub fn next_phon(&self, entry: &LexicalEntry) -> Option<String> {
        match &self.allomorphs {
            None => Some(entry.phon.clone()),
            Some(a) => {
                let t = a.select(&entry.phon, entry.flags)?;
                realize(&entry.phon, t, entry.flags).ok()
            }
        }
    }

    /// Whether slot order and root features allow this rule on `entry`.
    pub fn admits(&self, entry: &LexicalEntry, max_caus: u8) -> bool {
        entry.state.admits(self.slot, max_caus) && self.requires.iter().all(|f| entry.features.contains(f))
    }

    /// All outputs of applying the rule to `entry`; empty if it does not
    /// apply.
    pub fn apply(&self, entry: &LexicalEntry, ctx: &RuleContext<'_>) -> Result<Vec<LexicalEntry>, RuleError> {
        if !self.admits(entry, ctx.max_caus) {
            return Ok(Vec::new());
        }
        match self.next_phon(entry) {
            Some(phon) => self.apply_with_phon(entry, phon, ctx),
            None => Ok(Vec::new()),
        }
    }

    /// [`LexicalRule::apply`] after the admissibility check, with the new
    /// surface already computed.
    pub(crate) fn apply_with_phon(
        &self,
        entry: &LexicalEntry,
        phon: String,
        ctx: &RuleContext<'_>,
    ) -> Result<Vec<LexicalEntry>, RuleError> {
        let Some(sign) = self.transform(&entry.sign, ctx)? else {
            return Ok(Vec::new());
        };

        let causes = entry.history.iter().filter(|a| a.slot == Slot::Caus).count();
        let senses = match self.lf {
            LfAction::Sense { .. } => ctx.senses.senses_for(entry.features.iter()),
            _ => Vec::new(),
        };
        let lfs = self.lf.apply(&entry.lf, causes, &senses);
        if lfs.is_empty() {
            log::debug!("rule `{}`: no sense licensed for `{}`", self.id, entry.root);
        }

        let mut history = entry.history.clone();
        history.push(Applied {
            rule: self.id.clone(),
            slot: self.slot,
            value: self.value.clone(),
        });
        let flags = if self.allomorphs.is_some() {
            StemFlags::default()
        } else {
            entry.flags
        };
        Ok(lfs
            .into_iter()
            .map(|lf| LexicalEntry {
                phon: phon.clone(),
                sign: sign.clone(),
                lf,
                history: history.clone(),
                root: entry.root.clone(),
                intermediate: self.feeder,
                state: entry.state.after(self.slot),
                flags,
                features: Arc::clone(&entry.features),
            })
            .collect())
    }

    /// The sign-level part of the rule: input check, edits, procedure and
    /// constraint enforcement.
    pub fn transform(
        &self,
        sign: &FeatureStructure,
        ctx: &RuleContext<'_>,
    ) -> Result<Option<FeatureStructure>, RuleError> {
        let described = |source| RuleError::Description {
            rule: self.id.clone(),
            source,
        };
        let Some((matched, tags)) = sign.unify_description(&self.input).map_err(described)? else {
            return Ok(None);
        };
        let mut out = match &self.output {
            Some(edits) => match matched.edit(edits, &tags).map_err(described)? {
                Some(fs) => fs,
                None => {
                    return Err(RuleError::IllTyped {
                        rule: self.id.clone(),
                        input: sign.type_name().to_string(),
                    })
                }
            },
            None => matched,
        };
        if let Some(p) = self.procedure {
            match p.apply(&out, ctx.args) {
                Some(fs) => out = fs,
                None => return Ok(None),
            }
        }
        let Some(out) = out.enforce_constraints() else {
            return Ok(None);
        };
        let lat = out.lattice();
        let is_word = lat
            .type_id("word")
            .is_some_and(|w| lat.is_subtype(out.ty(), w));
        if !is_word {
            return Err(RuleError::NotAWord {
                rule: self.id.clone(),
                ty: out.type_name().to_string(),
            });
        }
        Ok(Some(out))
    }
}

/// Parse a rule file. Rule ids must be unique.
pub fn parse_rules(source: &str, lat: &Arc<TypeLattice>) -> Result<Vec<LexicalRule>, RuleFileError> {
    let mut rules: Vec<LexicalRule> = Vec::new();
    for (line, text) in logical_lines(source) {
        let r = LexicalRule::parse(&text, line, lat)?;
        if rules.iter().any(|o| o.id == r.id) {
            return Err(RuleFileError {
                line,
                message: format!("duplicate rule `{}`", r.id),
            });
        }
        rules.push(r);
    }
    Ok(rules)
}
