use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::feature::{logical_lines, FeatureStructure, Predication, SemanticForm, Term, TypeLattice};
use crate::phonology::{is_vowel, StemFlags};
use crate::rules::{SubcatFrame, SlotState};

use super::entry::LexicalEntry;

/// Semantic features a root may carry. Derivational senses are keyed on
/// these.
pub const SEMANTIC_FEATURES: [&str; 7] = [
    "animate",
    "artifact",
    "container",
    "period",
    "place",
    "goods",
    "edible",
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct RootFileError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootEntry {
    pub lemma: String,
    pub ty: String,
    /// Names of argument templates, subject first.
    pub subcat: Vec<String>,
    pub pred: String,
    pub features: BTreeSet<String>,
    pub flags: StemFlags,
    pub line: usize,
}

/// A parsed root file: roots plus the per-type base descriptions and the
/// named argument templates verbs' frames are built from.
///
/// ```text
/// base <type> <descr>        defaults for roots of <type> (and subtypes)
/// arg <name> <descr>         a subcategorized element
/// root <lemma> type=<type> [pred=<p>] [subcat=a,b] [feats=+f,...] [flags=alt,...]
/// ```
#[derive(Clone, Debug)]
pub struct RootLexicon {
    pub roots: Vec<RootEntry>,
    pub bases: BTreeMap<String, FeatureStructure>,
    pub args: BTreeMap<String, FeatureStructure>,
}

fn root_line(text: &str, line: usize) -> Result<RootEntry, RootFileError> {
    let err = |message: String| RootFileError { line, message };
    let mut words = text.split_whitespace();
    words.next();
    let lemma = words.next().ok_or_else(|| err("missing lemma".into()))?;
    if !lemma.chars().any(is_vowel) {
        return Err(err(format!("lemma `{lemma}` has no vowel")));
    }
    let mut root = RootEntry {
        lemma: lemma.to_string(),
        ty: String::new(),
        subcat: Vec::new(),
        pred: lemma.to_string(),
        features: BTreeSet::new(),
        flags: StemFlags::default(),
        line,
    };
    let list = |v: &str| -> Vec<String> {
        v.split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect()
    };
    for w in words {
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, got `{w}`")))?;
        match k {
            "type" => root.ty = v.to_string(),
            "pred" => root.pred = v.to_string(),
            "subcat" => root.subcat = list(v),
            "feats" => {
                for f in list(v) {
                    let name = f
                        .strip_prefix('+')
                        .ok_or_else(|| err(format!("feature `{f}` must be written +{f}")))?;
                    if !SEMANTIC_FEATURES.contains(&name) {
                        return Err(err(format!("unknown semantic feature `{f}`")));
                    }
                    root.features.insert(name.to_string());
                }
            }
            "flags" => root.flags = StemFlags::parse_list(v).map_err(|e| err(e.to_string()))?,
            _ => return Err(err(format!("unknown key `{k}`"))),
        }
    }
    if root.ty.is_empty() {
        return Err(err(format!("root `{lemma}` has no type")));
    }
    Ok(root)
}

/// Parse and validate a root file against `lat`.
pub fn load_roots(source: &str, lat: &Arc<TypeLattice>) -> Result<RootLexicon, RootFileError> {
    let mut lex = RootLexicon {
        roots: Vec::new(),
        bases: BTreeMap::new(),
        args: BTreeMap::new(),
    };
    let word = lat.type_id("word");
    for (line, text) in logical_lines(source) {
        let err = |message: String| RootFileError { line, message };
        let kw = text.split_whitespace().next().unwrap_or("");
        match kw {
            "base" | "arg" => {
                let rest = text[kw.len()..].trim_start();
                let (name, d) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| err(format!("expected `{kw} <name> <description>`")))?;
                let fs = FeatureStructure::parse(lat, d.trim()).map_err(|e| err(format!("`{name}`: {e}")))?;
                if kw == "base" {
                    if lat.type_id(name).is_none() {
                        return Err(err(format!("unknown type `{name}`")));
                    }
                    lex.bases.insert(name.to_string(), fs);
                } else {
                    lex.args.insert(name.to_string(), fs);
                }
            }
            "root" => {
                let r = root_line(&text, line)?;
                let Some(t) = lat.type_id(&r.ty) else {
                    return Err(err(format!("unknown type `{}`", r.ty)));
                };
                if !word.is_some_and(|w| lat.is_subtype(t, w)) {
                    return Err(err(format!("type `{}` is not a word type", r.ty)));
                }
                if lex.roots.iter().any(|o| o.lemma == r.lemma) {
                    return Err(err(format!("duplicate lemma `{}`", r.lemma)));
                }
                if let Some(a) = r.subcat.iter().find(|a| !lex.args.contains_key(*a)) {
                    return Err(err(format!("unknown argument `{a}`")));
                }
                lex.roots.push(r);
            }
            other => return Err(err(format!("unknown declaration `{other}`"))),
        }
    }
    Ok(lex)
}

impl RootLexicon {
    /// Logical form of a bare root: verbs get an event index and one
    /// argument variable per frame element, everything else an individual
    /// index.
    pub fn root_lf(&self, root: &RootEntry, lat: &TypeLattice) -> SemanticForm {
        let is_verb = matches!(
            (lat.type_id(&root.ty), lat.type_id("verb-l")),
            (Some(t), Some(v)) if lat.is_subtype(t, v)
        );
        if is_verb {
            let mut p = Predication::new(root.pred.clone());
            for i in 0..root.subcat.len() {
                p = p.arg(format!("ARG{}", i + 1), Term::var(format!("x{}", i + 1)));
            }
            SemanticForm::new("e").with(p)
        } else {
            SemanticForm::new("x").with(Predication::new(root.pred.clone()).arg("INST", Term::var("x")))
        }
    }

    /// The base entry of a root: its type, the base descriptions of that
    /// type and its supertypes, its frame, then type constraints.
    pub fn base_entry(&self, root: &RootEntry, lat: &Arc<TypeLattice>) -> Result<LexicalEntry, RootFileError> {
        let err = |message: String| RootFileError {
            line: root.line,
            message: format!("root `{}`: {message}", root.lemma),
        };
        let t = lat
            .type_id(&root.ty)
            .ok_or_else(|| err(format!("unknown type `{}`", root.ty)))?;
        let mut sign = FeatureStructure::of_type(lat, t);
        for (name, base) in &self.bases {
            let bt = lat.type_id(name).expect("checked at load");
            if lat.is_subtype(t, bt) {
                sign = sign
                    .unify(base)
                    .expect("same lattice")
                    .ok_or_else(|| err(format!("clashes with base `{name}`")))?;
            }
        }
        if !root.subcat.is_empty() {
            let frame = SubcatFrame {
                elements: root.subcat.iter().map(|a| self.args[a].clone()).collect(),
            };
            sign = frame
                .install(&sign)
                .ok_or_else(|| err("frame does not fit the sign".into()))?;
        }
        let sign = sign
            .enforce_constraints()
            .ok_or_else(|| err("violates type constraints".into()))?;
        Ok(LexicalEntry {
            phon: root.lemma.clone(),
            sign,
            lf: self.root_lf(root, lat),
            history: Vec::new(),
            root: root.lemma.clone(),
            intermediate: false,
            state: SlotState::default(),
            flags: root.flags,
            features: Arc::new(root.features.clone()),
        })
    }
}
