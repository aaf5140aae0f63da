//! Logical forms: an index plus a set of restrictions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Term {
    Var(String),
    /// A whole logical form as an argument (second-order predicates).
    Form(Box<SemanticForm>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Form(_) => None,
        }
    }

    pub fn as_form(&self) -> Option<&SemanticForm> {
        match self {
            Term::Form(f) => Some(f),
            Term::Var(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Predication {
    #[serde(rename = "rel")]
    pub relation: String,
    pub args: BTreeMap<String, Term>,
    pub quants: Vec<String>,
}

impl Predication {
    pub fn new(relation: impl Into<String>) -> Predication {
        Predication {
            relation: relation.into(),
            args: BTreeMap::new(),
            quants: Vec::new(),
        }
    }

    pub fn arg(mut self, role: impl Into<String>, t: Term) -> Predication {
        self.args.insert(role.into(), t);
        self
    }

    pub fn get(&self, role: &str) -> Option<&Term> {
        self.args.get(role)
    }
}

/// `restrictions` is a set: inserting a predication already present does
/// nothing, and order never matters for equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SemanticForm {
    pub index: String,
    #[serde(rename = "restr")]
    pub restrictions: BTreeSet<Predication>,
}

impl SemanticForm {
    pub fn new(index: impl Into<String>) -> SemanticForm {
        SemanticForm {
            index: index.into(),
            restrictions: BTreeSet::new(),
        }
    }

    pub fn with(mut self, p: Predication) -> SemanticForm {
        self.restrictions.insert(p);
        self
    }

    /// Returns false if the predication was already present.
    pub fn insert(&mut self, p: Predication) -> bool {
        self.restrictions.insert(p)
    }

    pub fn find(&self, relation: &str) -> Option<&Predication> {
        self.restrictions.iter().find(|p| p.relation == relation)
    }

    /// `relation(role: self)` over the same index.
    pub fn wrap(&self, relation: &str, role: &str) -> SemanticForm {
        SemanticForm::new(self.index.clone())
            .with(Predication::new(relation).arg(role, Term::Form(Box::new(self.clone()))))
    }

    /// `cause(causer, self)`.
    pub fn cause(&self, causer: &str) -> SemanticForm {
        SemanticForm::new(self.index.clone()).with(
            Predication::new("cause")
                .arg("CAUSER", Term::var(causer))
                .arg("EFFECT", Term::Form(Box::new(self.clone()))),
        )
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Form(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Display for Predication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.relation)?;
        for (i, (role, t)) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{role}: {t}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for SemanticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.index)?;
        for (i, p) in self.restrictions.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restriction_set_ignores_duplicates() {
        let mut lf = SemanticForm::new("x");
        let p = Predication::new("car").arg("INST", Term::var("x"));
        assert!(lf.insert(p.clone()));
        assert!(!lf.insert(p));
        assert_eq!(lf.restrictions.len(), 1);
    }

    #[test]
    fn cause_wraps_input() {
        let base = SemanticForm::new("e").with(Predication::new("sleep").arg("ARG1", Term::var("x1")));
        let c = base.cause("c1");
        let p = c.find("cause").unwrap();
        assert_eq!(p.get("CAUSER"), Some(&Term::var("c1")));
        assert_eq!(p.get("EFFECT").and_then(Term::as_form), Some(&base));
        assert_eq!(c.to_string(), "e{cause(CAUSER: c1, EFFECT: e{sleep(ARG1: x1)})}");
    }

    #[test]
    fn json_shape() {
        let lf = SemanticForm::new("x").with(
            Predication::new("at")
                .arg("WHAT", Term::var("m"))
                .arg("WHERE", Term::var("x")),
        );
        let v = serde_json::to_value(&lf).unwrap();
        assert_eq!(v["restr"][0]["rel"], "at");
        assert_eq!(v["restr"][0]["args"]["WHERE"], "x");
        assert_eq!(v["restr"][0]["quants"], serde_json::json!([]));
    }
}
