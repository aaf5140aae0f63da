//! Subcategorization frames and the valency-changing procedures that
//! rebuild them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::feature::{FeatureStructure, Graph, TypeLattice};

pub const SUBCAT_PATH: &str = "SYNSEM|LOCAL|CAT|SUBCAT";
const CASE_PATH: &str = "LOCAL|CAT|HEAD|CASE";

/// The arguments a head still requires, subject first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubcatFrame {
    pub elements: Vec<FeatureStructure>,
}

impl SubcatFrame {
    /// Read the SUBCAT list of a sign. `None` if the sign has no proper list
    /// there.
    pub fn of(sign: &FeatureStructure) -> Option<SubcatFrame> {
        let mut cur = sign.get(SUBCAT_PATH)?;
        let mut elements = Vec::new();
        loop {
            match cur.type_name() {
                "e-list" => break,
                "ne-list" => {
                    elements.push(cur.get("FIRST")?);
                    cur = cur.get("REST")?;
                }
                _ => return None,
            }
        }
        Some(SubcatFrame { elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn case(&self, i: usize) -> Option<&str> {
        self.elements.get(i)?.type_at(CASE_PATH)
    }

    pub fn role(&self, i: usize) -> Option<&str> {
        self.elements.get(i)?.type_at("ROLE")
    }

    pub fn is_preverbal(&self, i: usize) -> bool {
        self.elements
            .get(i)
            .and_then(|e| e.type_at("PREVERBAL"))
            == Some("+")
    }

    pub fn position(&self, case: &str) -> Option<usize> {
        (0..self.len()).find(|&i| self.case(i) == Some(case))
    }

    /// The frame as a FIRST/REST list structure.
    pub fn to_list(&self, lat: &Arc<TypeLattice>) -> FeatureStructure {
        let ty = |n: &str| lat.type_id(n).expect("list types");
        let feat = |n: &str| lat.feat_id(n).expect("list features");
        let (first, rest) = (feat("FIRST"), feat("REST"));
        let mut g = Graph {
            nodes: Vec::new(),
            root: 0,
            eqs: Vec::new(),
        };
        let mut next = g.add_node(ty("e-list"));
        for item in self.elements.iter().rev() {
            let n = g.add_node(ty("ne-list"));
            let off = g.append(item.dag());
            g.add_arc(n, first, off);
            g.add_arc(n, rest, next);
            next = n;
        }
        g.root = next;
        let (dag, _) = g.resolve(lat).expect("list of well-typed elements");
        FeatureStructure::from_dag(lat, dag)
    }

    /// `sign` with its SUBCAT list replaced by this frame.
    pub fn install(&self, sign: &FeatureStructure) -> Option<FeatureStructure> {
        sign.replace(SUBCAT_PATH, &self.to_list(sign.lattice()))
            .ok()
            .flatten()
    }
}

impl fmt::Display for SubcatFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for i in 0..self.len() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(
                f,
                "{}.{}",
                self.role(i).unwrap_or("?"),
                self.case(i).unwrap_or("?")
            )?;
            if self.is_preverbal(i) {
                f.write_str("[preverbal]")?;
            }
        }
        f.write_str(">")
    }
}

/// Remove the first accusative element; returns the rest of the frame and
/// the removed element. `None` if there is no accusative element.
pub fn move_object(frame: &SubcatFrame) -> Option<(SubcatFrame, FeatureStructure)> {
    let i = frame.position("accusative")?;
    let mut rest = frame.elements.clone();
    let obj = rest.remove(i);
    Some((SubcatFrame { elements: rest }, obj))
}

fn role_rank(role: Option<&str>) -> usize {
    match role {
        Some("subj") => 0,
        Some("dobj") => 1,
        Some("iobj") => 2,
        Some("obl") => 3,
        _ => 4,
    }
}

fn set_type(fs: &FeatureStructure, path: &str, ty: &str) -> Option<FeatureStructure> {
    let lat = fs.lattice();
    let t = lat.type_id(ty)?;
    fs.replace(path, &FeatureStructure::of_type(lat, t)).ok().flatten()
}

fn recast(fs: &FeatureStructure, case: &str, role: &str) -> Option<FeatureStructure> {
    set_type(&set_type(fs, CASE_PATH, case)?, "ROLE", role)
}

/// Valency changes too structural for a description edit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Procedure {
    /// Add a nominative causer as subject; the old subject becomes a dative
    /// indirect object if there is an accusative object already, else the
    /// accusative direct object.
    AddCauser,
    /// Drop the subject; an accusative object becomes the subject.
    Passivize,
    /// Replace the accusative object by a non-referential nominative object
    /// that must stand right before the verb.
    MoveObject,
}

impl FromStr for Procedure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "add-causer" => Ok(Procedure::AddCauser),
            "passivize" => Ok(Procedure::Passivize),
            "move-object" => Ok(Procedure::MoveObject),
            _ => Err(format!("unknown procedure `{s}`")),
        }
    }
}

impl fmt::Display for Procedure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Procedure::AddCauser => "add-causer",
            Procedure::Passivize => "passivize",
            Procedure::MoveObject => "move-object",
        })
    }
}

/// Shape of the object the non-referential rule puts in place of an
/// accusative one; CONT is copied from the removed object.
const NONREF_OBJECT: &str = "[synsem, ROLE: dobj, PREVERBAL: +,
    LOCAL|CAT: [HEAD: [common, CASE: nominative, MOD: null],
                SUBCAT: <>, ADJUNCTS|NON-REF: +]]";

impl Procedure {
    /// Named argument templates (`subj`, ...) come from the root lexicon.
    /// `None` means the procedure does not apply.
    pub fn apply(
        self,
        sign: &FeatureStructure,
        args: &BTreeMap<String, FeatureStructure>,
    ) -> Option<FeatureStructure> {
        let frame = SubcatFrame::of(sign)?;
        let subj = (0..frame.len()).find(|&i| frame.role(i) == Some("subj"));
        let new = match self {
            Procedure::AddCauser => {
                let s = subj?;
                let transitive = frame.position("accusative").is_some();
                let (case, role) = if transitive {
                    ("dative", "iobj")
                } else {
                    ("accusative", "dobj")
                };
                let mut elements = frame.elements.clone();
                elements[s] = recast(&elements[s], case, role)?;
                elements.insert(0, args.get("subj")?.clone());
                // Stable: relative order within a role is kept.
                elements.sort_by_key(|e| role_rank(e.type_at("ROLE")));
                SubcatFrame { elements }
            }
            Procedure::Passivize => {
                let s = subj?;
                let mut elements = frame.elements.clone();
                elements.remove(s);
                let rest = SubcatFrame { elements };
                match rest.position("accusative") {
                    Some(o) => {
                        let mut elements = rest.elements;
                        let promoted = recast(&elements.remove(o), "nominative", "subj")?;
                        elements.insert(0, promoted);
                        SubcatFrame { elements }
                    }
                    None => rest,
                }
            }
            Procedure::MoveObject => {
                let (rest, obj) = move_object(&frame)?;
                let shape = FeatureStructure::parse(sign.lattice(), NONREF_OBJECT).ok()?;
                let nonref = match obj.get("LOCAL|CONT") {
                    Some(cont) => shape.replace("LOCAL|CONT", &cont).ok()??,
                    None => shape,
                };
                let mut elements = rest.elements;
                elements.push(nonref);
                SubcatFrame { elements }
            }
        };
        new.install(sign)
    }
}
