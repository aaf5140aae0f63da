use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::dag::{Dag, Graph};
use super::descr::{Description, Entry, Term as DescrTerm};
use super::error::{DescriptionError, FeatureError};
use super::lattice::{FeatId, TypeId, TypeLattice};

/// Upper bound on constraint-enforcement rounds; a hierarchy whose
/// constraints keep introducing constrained nodes is treated as failing.
const MAX_CONSTRAINT_ROUNDS: usize = 32;

/// A typed, possibly reentrant, acyclic feature structure.
///
/// Values are immutable: every operation returns a new structure. Equality
/// and hashing are isomorphism (see the canonical form in [`Dag`]).
#[derive(Clone)]
pub struct FeatureStructure {
    lattice: Arc<TypeLattice>,
    dag: Dag,
}

/// A feature path such as `SYNSEM|LOCAL|CAT|HEAD`.
pub type Path = Vec<FeatId>;

pub fn parse_path(lat: &TypeLattice, text: &str) -> Result<Path, FeatureError> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split('|')
        .map(|f| {
            lat.feat_id(f.trim())
                .ok_or_else(|| FeatureError::BadPath(text.to_string()))
        })
        .collect()
}

impl FeatureStructure {
    /// The empty structure: a single node of the most general type.
    pub fn top(lattice: &Arc<TypeLattice>) -> FeatureStructure {
        FeatureStructure {
            dag: Dag::single(lattice.top()),
            lattice: lattice.clone(),
        }
    }

    pub fn of_type(lattice: &Arc<TypeLattice>, ty: TypeId) -> FeatureStructure {
        let mut g = Graph::new(ty);
        g.root = 0;
        let (dag, _) = g.resolve(lattice).expect("single node is consistent");
        FeatureStructure {
            dag,
            lattice: lattice.clone(),
        }
    }

    pub(crate) fn from_dag(lattice: &Arc<TypeLattice>, dag: Dag) -> FeatureStructure {
        FeatureStructure {
            lattice: lattice.clone(),
            dag,
        }
    }

    pub fn parse(lattice: &Arc<TypeLattice>, text: &str) -> Result<FeatureStructure, DescriptionError> {
        let d = Description::parse(text, lattice)?;
        Self::from_description(lattice, &d)
    }

    pub fn from_description(
        lattice: &Arc<TypeLattice>,
        d: &Description,
    ) -> Result<FeatureStructure, DescriptionError> {
        let mut g = Graph {
            nodes: Vec::new(),
            root: 0,
            eqs: Vec::new(),
        };
        let mut tags = HashMap::new();
        let root = d.build(&mut g, &mut tags, lattice)?;
        g.root = root;
        let (dag, _) = g.resolve(lattice).ok_or(DescriptionError::Inconsistent)?;
        Ok(FeatureStructure {
            lattice: lattice.clone(),
            dag,
        })
    }

    pub fn lattice(&self) -> &Arc<TypeLattice> {
        &self.lattice
    }

    pub(crate) fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn ty(&self) -> TypeId {
        self.dag.nodes[0].ty
    }

    pub fn type_name(&self) -> &str {
        self.lattice.type_name(self.ty())
    }

    pub fn node_count(&self) -> usize {
        self.dag.nodes.len()
    }

    /// Number of nodes reached by more than one arc.
    pub fn reentrancy_count(&self) -> usize {
        let mut indeg = vec![0usize; self.dag.nodes.len()];
        for n in &self.dag.nodes {
            for &(_, t) in &n.arcs {
                indeg[t as usize] += 1;
            }
        }
        indeg.iter().filter(|&&d| d > 1).count()
    }

    pub fn features(&self) -> impl Iterator<Item = (&str, FeatureStructure)> + '_ {
        self.dag.nodes[0].arcs.iter().map(move |&(f, t)| {
            (
                self.lattice.feat_name(f),
                FeatureStructure::from_dag(&self.lattice, self.dag.subdag(t)),
            )
        })
    }

    pub(crate) fn node_at(&self, path: &[FeatId]) -> Option<u32> {
        self.dag.follow(0, path)
    }

    /// The substructure at `path` (`A|B|C`), if the path exists.
    pub fn get(&self, path: &str) -> Option<FeatureStructure> {
        let p = parse_path(&self.lattice, path).ok()?;
        self.get_path(&p)
    }

    pub fn get_path(&self, path: &[FeatId]) -> Option<FeatureStructure> {
        self.node_at(path)
            .map(|n| FeatureStructure::from_dag(&self.lattice, self.dag.subdag(n)))
    }

    /// Type name of the node at `path`.
    pub fn type_at(&self, path: &str) -> Option<&str> {
        let p = parse_path(&self.lattice, path).ok()?;
        self.node_at(&p)
            .map(|n| self.lattice.type_name(self.dag.nodes[n as usize].ty))
    }

    /// Whether two paths lead to the very same node (a reentrancy).
    pub fn shares(&self, a: &str, b: &str) -> bool {
        match (
            parse_path(&self.lattice, a).ok().and_then(|p| self.node_at(&p)),
            parse_path(&self.lattice, b).ok().and_then(|p| self.node_at(&p)),
        ) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }

    fn check_lattice(&self, other: &FeatureStructure) -> Result<(), FeatureError> {
        if self.lattice.id() == other.lattice.id() {
            Ok(())
        } else {
            Err(FeatureError::LatticeMismatch)
        }
    }

    /// Most general structure subsumed by both. `Ok(None)` is unification
    /// failure (bottom); `Err` only for structures from different lattices.
    pub fn unify(&self, other: &FeatureStructure) -> Result<Option<FeatureStructure>, FeatureError> {
        self.check_lattice(other)?;
        Ok(self.unify_at_node(0, &other.dag))
    }

    /// Unify `other` into the node at `path`.
    pub fn unify_at(
        &self,
        path: &str,
        other: &FeatureStructure,
    ) -> Result<Option<FeatureStructure>, FeatureError> {
        self.check_lattice(other)?;
        let p = parse_path(&self.lattice, path)?;
        let mut g = Graph::from_dag(&self.dag);
        let at = g.walk_or_create(0, &p, self.lattice.top());
        let off = g.append(&other.dag);
        g.equate(at, off);
        Ok(g
            .resolve(&self.lattice)
            .map(|(dag, _)| FeatureStructure::from_dag(&self.lattice, dag)))
    }

    pub(crate) fn unify_at_node(&self, node: u32, other: &Dag) -> Option<FeatureStructure> {
        let mut g = Graph::from_dag(&self.dag);
        let off = g.append(other);
        g.equate(node as usize, off);
        g.resolve(&self.lattice)
            .map(|(dag, _)| FeatureStructure::from_dag(&self.lattice, dag))
    }

    /// Unify with a description, returning where each `#n` tag landed.
    pub(crate) fn unify_description(
        &self,
        d: &Description,
    ) -> Result<Option<(FeatureStructure, HashMap<u32, u32>)>, DescriptionError> {
        let mut g = Graph::from_dag(&self.dag);
        let mut tags = HashMap::new();
        let n = d.build(&mut g, &mut tags, &self.lattice)?;
        g.equate(0, n);
        Ok(g.resolve(&self.lattice).map(|(dag, map)| {
            let bound = tags
                .into_iter()
                .filter_map(|(k, v)| map[v].map(|i| (k, i)))
                .collect();
            (FeatureStructure::from_dag(&self.lattice, dag), bound)
        }))
    }

    /// Apply output edits: a type term retypes the root, `PATH: d` replaces
    /// the value at PATH with a fresh node built from `d`. Tags already bound
    /// in `tags` (canonical node indices of `self`) refer back into `self`.
    ///
    /// `Ok(None)` means the edited graph is ill-typed.
    pub(crate) fn edit(
        &self,
        out: &Description,
        tags: &HashMap<u32, u32>,
    ) -> Result<Option<FeatureStructure>, DescriptionError> {
        let lat = &self.lattice;
        let mut g = Graph::from_dag(&self.dag);
        let mut bound: HashMap<u32, usize> = tags.iter().map(|(&k, &v)| (k, v as usize)).collect();
        for term in &out.terms {
            match term {
                DescrTerm::Type(t) => g.nodes[0].ty = *t,
                DescrTerm::Avm(entries) => {
                    for e in entries {
                        match e {
                            Entry::Path(path, d) => {
                                let (last, prefix) = path.split_last().expect("non-empty path");
                                let at = g.walk_or_create(0, prefix, lat.top());
                                let v = d.build(&mut g, &mut bound, lat)?;
                                g.set_arc(at, *last, v);
                            }
                            Entry::Bare(d) => match d.terms.as_slice() {
                                [DescrTerm::Type(t)] => g.nodes[0].ty = *t,
                                _ => d.build_at(&mut g, 0, &mut bound, lat)?,
                            },
                        }
                    }
                }
                DescrTerm::Tag(_) | DescrTerm::List { .. } => {
                    return Err(DescriptionError::Syntax {
                        offset: 0,
                        message: "output edits must be a type or path entries".to_string(),
                    })
                }
            }
        }
        Ok(g.resolve(lat).map(|(dag, _)| FeatureStructure::from_dag(lat, dag)))
    }

    /// Whether the description is satisfiable together with this structure.
    pub fn satisfies(&self, d: &Description) -> bool {
        matches!(self.unify_description(d), Ok(Some(_)))
    }

    /// `self` is at least as general as `specific`: every path, type and
    /// reentrancy of `self` also holds in `specific`.
    pub fn subsumes(&self, specific: &FeatureStructure) -> bool {
        if self.lattice.id() != specific.lattice.id() {
            return false;
        }
        let g = &self.dag.nodes;
        let s = &specific.dag.nodes;
        let mut image: Vec<Option<u32>> = vec![None; g.len()];
        let mut stack = vec![(0u32, 0u32)];
        while let Some((a, b)) = stack.pop() {
            match image[a as usize] {
                Some(prev) if prev != b => return false,
                Some(_) => continue,
                None => image[a as usize] = Some(b),
            }
            let (ga, sb) = (&g[a as usize], &s[b as usize]);
            if !self.lattice.is_subtype(sb.ty, ga.ty) {
                return false;
            }
            for &(f, t) in &ga.arcs {
                match specific.dag.arc(b, f) {
                    Some(u) => stack.push((t, u)),
                    None => return false,
                }
            }
        }
        true
    }

    pub fn is_isomorphic(&self, other: &FeatureStructure) -> bool {
        self == other
    }

    /// Unify in the constraints of every node's type and supertypes until
    /// nothing changes. `None` when a constraint clashes.
    pub fn enforce_constraints(&self) -> Option<FeatureStructure> {
        let lat = &self.lattice;
        let mut cur = self.dag.clone();
        for _ in 0..MAX_CONSTRAINT_ROUNDS {
            let mut g = Graph::from_dag(&cur);
            let mut any = false;
            for (i, node) in cur.nodes.iter().enumerate() {
                for &t in lat.constrained_supertypes(node.ty) {
                    let c = lat.constraint(t).expect("listed as constrained");
                    let off = g.append(c);
                    g.equate(i, off);
                    any = true;
                }
            }
            if !any {
                return Some(FeatureStructure::from_dag(lat, cur));
            }
            let (next, _) = g.resolve(lat)?;
            if next == cur {
                return Some(FeatureStructure::from_dag(lat, cur));
            }
            cur = next;
        }
        log::warn!("constraint enforcement did not converge");
        None
    }

    /// Replace the value at `path` with `value`, creating missing
    /// intermediate nodes. `None` if the result is ill-typed.
    pub fn replace(&self, path: &str, value: &FeatureStructure) -> Result<Option<FeatureStructure>, FeatureError> {
        self.check_lattice(value)?;
        let p = parse_path(&self.lattice, path)?;
        let Some((last, prefix)) = p.split_last() else {
            return Ok(Some(value.clone()));
        };
        let mut g = Graph::from_dag(&self.dag);
        let at = g.walk_or_create(0, prefix, self.lattice.top());
        let off = g.append(&value.dag);
        g.set_arc(at, *last, off);
        Ok(g
            .resolve(&self.lattice)
            .map(|(dag, _)| FeatureStructure::from_dag(&self.lattice, dag)))
    }

    /// Render as a description that [`FeatureStructure::parse`] accepts.
    pub fn to_description(&self) -> String {
        let mut indeg = vec![0usize; self.dag.nodes.len()];
        for n in &self.dag.nodes {
            for &(_, t) in &n.arcs {
                indeg[t as usize] += 1;
            }
        }
        let mut tags: HashMap<u32, u32> = HashMap::new();
        let mut out = String::new();
        self.render(0, &indeg, &mut tags, &mut out);
        out
    }

    fn render(&self, n: u32, indeg: &[usize], tags: &mut HashMap<u32, u32>, out: &mut String) {
        if let Some(k) = tags.get(&n) {
            out.push_str(&format!("#{k}"));
            return;
        }
        if indeg[n as usize] > 1 {
            let k = tags.len() as u32 + 1;
            tags.insert(n, k);
            out.push_str(&format!("#{k} "));
        }
        let node = &self.dag.nodes[n as usize];
        let name = self.lattice.type_name(node.ty);
        if node.arcs.is_empty() {
            out.push_str(name);
            return;
        }
        out.push('[');
        out.push_str(name);
        for &(f, t) in &node.arcs {
            out.push_str(", ");
            out.push_str(self.lattice.feat_name(f));
            out.push_str(": ");
            self.render(t, indeg, tags, out);
        }
        out.push(']');
    }
}

impl PartialEq for FeatureStructure {
    fn eq(&self, other: &Self) -> bool {
        self.lattice.id() == other.lattice.id() && self.dag == other.dag
    }
}

impl Eq for FeatureStructure {}

impl Hash for FeatureStructure {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dag.hash(state);
    }
}

impl fmt::Display for FeatureStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_description())
    }
}

impl fmt::Debug for FeatureStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FeatureStructure({})", self.to_description())
    }
}
