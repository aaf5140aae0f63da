use std::fmt;
use std::str::FromStr;

use crate::feature::{Predication, SemanticForm, Term};

/// Variable standing for the content of the head a modifier attaches to.
pub const MODIFIED_VAR: &str = "m";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LfArg {
    /// `$self`: the entry's own index.
    SelfIndex,
    /// `$mod`: the modified head's content.
    Modified,
    Var(String),
}

/// How a rule composes the logical form of its output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LfAction {
    Identity,
    /// Add a predication to the restriction set.
    Insert { relation: String, args: Vec<(String, LfArg)> },
    /// `relation(ROLE: lf)`.
    Wrap { relation: String, role: String },
    /// `cause(CAUSER: c<n>, EFFECT: lf)`.
    Cause,
    /// One output per sense licensed by the root's semantic features, each
    /// `sense(ROLE: lf)`.
    Sense { role: String },
}

impl LfAction {
    /// `causes` counts causatives already applied; `senses` are the sense
    /// predicates available to the entry.
    pub fn apply(&self, lf: &SemanticForm, causes: usize, senses: &[String]) -> Vec<SemanticForm> {
        match self {
            LfAction::Identity => vec![lf.clone()],
            LfAction::Insert { relation, args } => {
                let mut p = Predication::new(relation.clone());
                for (role, a) in args {
                    let t = match a {
                        LfArg::SelfIndex => Term::var(lf.index.clone()),
                        LfArg::Modified => Term::var(MODIFIED_VAR),
                        LfArg::Var(v) => Term::var(v.clone()),
                    };
                    p = p.arg(role.clone(), t);
                }
                let mut out = lf.clone();
                out.insert(p);
                vec![out]
            }
            LfAction::Wrap { relation, role } => vec![lf.wrap(relation, role)],
            LfAction::Cause => vec![lf.cause(&causer_var(causes + 1))],
            LfAction::Sense { role } => senses.iter().map(|s| lf.wrap(s, role)).collect(),
        }
    }
}

pub fn causer_var(n: usize) -> String {
    format!("c{n}")
}

fn call(s: &str) -> Option<(&str, Vec<&str>)> {
    let open = s.find('(')?;
    let inner = s[open + 1..].strip_suffix(')')?;
    let args = inner
        .split(',')
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .collect();
    Some((s[..open].trim(), args))
}

impl FromStr for LfAction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "identity" => return Ok(LfAction::Identity),
            "cause" => return Ok(LfAction::Cause),
            "sense" => {
                return Ok(LfAction::Sense {
                    role: "OF".to_string(),
                })
            }
            _ => {}
        }
        let (name, args) = call(s).ok_or_else(|| format!("bad LF action `{s}`"))?;
        match (name, args.as_slice()) {
            ("wrap", [rel, role]) => Ok(LfAction::Wrap {
                relation: rel.to_string(),
                role: role.to_string(),
            }),
            ("sense", [role]) => Ok(LfAction::Sense {
                role: role.to_string(),
            }),
            ("insert", [rel, rest @ ..]) => {
                let args = rest
                    .iter()
                    .map(|a| {
                        let (role, v) = a
                            .split_once('=')
                            .ok_or_else(|| format!("expected ROLE=value in `{a}`"))?;
                        let v = match v.trim() {
                            "$self" => LfArg::SelfIndex,
                            "$mod" => LfArg::Modified,
                            other if other.starts_with('$') => {
                                return Err(format!("unknown LF reference `{other}`"))
                            }
                            other => LfArg::Var(other.to_string()),
                        };
                        Ok((role.trim().to_string(), v))
                    })
                    .collect::<Result<_, String>>()?;
                Ok(LfAction::Insert {
                    relation: rel.to_string(),
                    args,
                })
            }
            _ => Err(format!("bad LF action `{s}`")),
        }
    }
}

impl fmt::Display for LfAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LfAction::Identity => f.write_str("identity"),
            LfAction::Cause => f.write_str("cause"),
            LfAction::Sense { role } => write!(f, "sense({role})"),
            LfAction::Wrap { relation, role } => write!(f, "wrap({relation}, {role})"),
            LfAction::Insert { relation, args } => {
                write!(f, "insert({relation}")?;
                for (role, a) in args {
                    let v = match a {
                        LfArg::SelfIndex => "$self",
                        LfArg::Modified => "$mod",
                        LfArg::Var(v) => v,
                    };
                    write!(f, ", {role}={v}")?;
                }
                f.write_str(")")
            }
        }
    }
}
