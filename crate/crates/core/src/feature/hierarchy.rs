//! Reader for hierarchy description files.
//!
//! One declaration per line; a line starting with whitespace continues the
//! previous one, `%` starts a comment.
//!
//! ```text
//! type <child> sub <parent>      subtype edge (repeat for multiple parents)
//! type <name>                    declare a type
//! feat <type> <FEATURE> <value>  appropriateness with value restriction
//! cons <type> <description>      constraint unified into every node of <type>
//! ```

use std::collections::HashMap;
use std::sync::Arc;

use super::dag::Graph;
use super::descr::Description;
use super::error::{HierarchyError, LatticeError};
use super::lattice::{LatticeBuilder, TypeLattice};

/// Join continuation lines and strip comments; yields (line number, text).
pub(crate) fn logical_lines(source: &str) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = Vec::new();
    for (i, raw) in source.lines().enumerate() {
        let line = match raw.find('%') {
            Some(p) => &raw[..p],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let continues = line.starts_with(char::is_whitespace);
        match out.last_mut() {
            Some((_, prev)) if continues => {
                prev.push(' ');
                prev.push_str(line.trim());
            }
            _ => out.push((i + 1, line.trim().to_string())),
        }
    }
    out
}

/// Parse and validate a hierarchy: order, glb table, appropriateness and
/// constraints.
pub fn load_hierarchy(source: &str) -> Result<Arc<TypeLattice>, HierarchyError> {
    let mut b = LatticeBuilder::new();
    let mut cons: Vec<(usize, String, String)> = Vec::new();
    for (line, text) in logical_lines(source) {
        let syntax = |message: &str| HierarchyError::Syntax {
            line,
            message: message.to_string(),
        };
        let (kw, rest) = text.split_once(char::is_whitespace).unwrap_or((&text, ""));
        let rest = rest.trim();
        match kw {
            "type" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                match words.as_slice() {
                    [name] => {
                        b.declare(name);
                    }
                    [child, "sub", parents @ ..] if !parents.is_empty() => {
                        for p in parents {
                            b.subtype(child, p.trim_end_matches(','));
                        }
                    }
                    _ => return Err(syntax("expected `type <child> sub <parent>`")),
                }
            }
            "feat" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                match words.as_slice() {
                    [ty, feat, value] => b.feature(ty, feat, value),
                    _ => return Err(syntax("expected `feat <type> <FEATURE> <value-type>`")),
                }
            }
            "cons" => {
                let (ty, descr) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| syntax("expected `cons <type> <description>`"))?;
                cons.push((line, ty.to_string(), descr.trim().to_string()));
            }
            other => return Err(syntax(&format!("unknown declaration `{other}`"))),
        }
    }

    let mut lattice = b.build()?;
    for (line, ty, text) in cons {
        let t = lattice
            .type_id(&ty)
            .ok_or_else(|| LatticeError::UnknownType(ty.clone()))?;
        let d = Description::parse(&text, &lattice).map_err(|source| HierarchyError::Constraint {
            line,
            ty: ty.clone(),
            source,
        })?;
        let mut g = Graph {
            nodes: Vec::new(),
            root: 0,
            eqs: Vec::new(),
        };
        let mut tags = HashMap::new();
        let root = d
            .build(&mut g, &mut tags, &lattice)
            .map_err(|source| HierarchyError::Constraint {
                line,
                ty: ty.clone(),
                source,
            })?;
        g.root = root;
        // The constraint describes nodes of its own type.
        let own = g.add_node(t);
        g.equate(root, own);
        let (dag, _) = g
            .resolve(&lattice)
            .ok_or_else(|| LatticeError::InconsistentConstraint(ty.clone()))?;
        lattice.set_constraint(t, dag);
    }
    Ok(Arc::new(lattice))
}
