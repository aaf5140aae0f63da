//! The type hierarchy: subtype order, greatest lower bounds, feature
//! appropriateness and the constraints attached to types.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use super::dag::Dag;
use super::error::LatticeError;

static NEXT_LATTICE_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeId(pub(crate) u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatId(pub(crate) u32);

impl TypeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl FeatId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Fixed-width bit set over type indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct TypeSet {
    words: Vec<u64>,
}

impl TypeSet {
    fn new(n: usize) -> Self {
        TypeSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    fn union_with(&mut self, other: &TypeSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    fn intersection(&self, other: &TypeSet) -> TypeSet {
        TypeSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter_map(move |b| (bits & (1 << b) != 0).then_some(w * 64 + b))
        })
    }
}

/// Collects declarations before validation. Constraints are attached after
/// the order is validated, since parsing them needs the finished lattice.
#[derive(Default, Debug)]
pub struct LatticeBuilder {
    names: Vec<String>,
    by_name: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    feats: Vec<(String, String, String)>,
}

impl LatticeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, name: &str) -> usize {
        if let Some(&i) = self.by_name.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.by_name.insert(name.to_string(), i);
        i
    }

    pub fn subtype(&mut self, child: &str, parent: &str) {
        let c = self.declare(child);
        let p = self.declare(parent);
        if !self.edges.contains(&(p, c)) {
            self.edges.push((p, c));
        }
    }

    pub fn feature(&mut self, ty: &str, feat: &str, value: &str) {
        self.feats
            .push((ty.to_string(), feat.to_string(), value.to_string()));
    }

    pub fn build(self) -> Result<TypeLattice, LatticeError> {
        let n = self.names.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for &(p, c) in &self.edges {
            parents[c].push(TypeId(p as u32));
            children[p].push(TypeId(c as u32));
        }

        // Reject cycles before anything walks the order.
        let mut state = vec![0u8; n];
        for start in 0..n {
            if state[start] == 0 {
                detect_cycle(start, &children, &mut state, &self.names)?;
            }
        }

        let roots: Vec<usize> = (0..n).filter(|&i| parents[i].is_empty()).collect();
        if roots.len() != 1 {
            return Err(LatticeError::NoUniqueTop(
                roots.iter().map(|&i| self.names[i].clone()).collect(),
            ));
        }
        let top = TypeId(roots[0] as u32);

        // below[t] holds every s with s <= t.
        let order = topo_order(n, &children);
        let mut below: Vec<TypeSet> = (0..n).map(|_| TypeSet::new(n)).collect();
        for &t in order.iter().rev() {
            let mut set = TypeSet::new(n);
            set.insert(t);
            for c in &children[t] {
                set.union_with(&below[c.index()]);
            }
            below[t] = set;
        }

        let mut glb = vec![None; n * n];
        for a in 0..n {
            for b in a..n {
                let common = below[a].intersection(&below[b]);
                let maximal: Vec<usize> = common
                    .iter()
                    .filter(|&m| !common.iter().any(|c| c != m && below[c].contains(m)))
                    .collect();
                let g = match maximal.as_slice() {
                    [] => None,
                    [m] => Some(TypeId(*m as u32)),
                    _ => {
                        return Err(LatticeError::AmbiguousGlb {
                            left: self.names[a].clone(),
                            right: self.names[b].clone(),
                            candidates: maximal.iter().map(|&m| self.names[m].clone()).collect(),
                        })
                    }
                };
                glb[a * n + b] = g;
                glb[b * n + a] = g;
            }
        }

        let mut lattice = TypeLattice {
            id: NEXT_LATTICE_ID.fetch_add(1, Ordering::Relaxed),
            by_name: self
                .by_name
                .iter()
                .map(|(k, &v)| (k.clone(), TypeId(v as u32)))
                .collect(),
            names: self.names,
            parents,
            children,
            below,
            glb,
            top,
            features: Vec::new(),
            feat_by_name: HashMap::new(),
            intro: Vec::new(),
            approp: vec![BTreeMap::new(); n],
            constraints: vec![None; n],
            constrained_supertypes: vec![Vec::new(); n],
        };
        lattice.install_features(&self.feats)?;
        Ok(lattice)
    }
}

fn detect_cycle(
    node: usize,
    children: &[Vec<TypeId>],
    state: &mut [u8],
    names: &[String],
) -> Result<(), LatticeError> {
    // 1 = on the current path, 2 = finished
    state[node] = 1;
    for c in &children[node] {
        match state[c.index()] {
            1 => {
                return Err(LatticeError::Cycle(
                    names[node].clone(),
                    names[c.index()].clone(),
                ))
            }
            0 => detect_cycle(c.index(), children, state, names)?,
            _ => {}
        }
    }
    state[node] = 2;
    Ok(())
}

fn topo_order(n: usize, children: &[Vec<TypeId>]) -> Vec<usize> {
    let mut indegree = vec![0usize; n];
    for cs in children {
        for c in cs {
            indegree[c.index()] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(t) = queue.pop() {
        out.push(t);
        for c in &children[t] {
            indegree[c.index()] -= 1;
            if indegree[c.index()] == 0 {
                queue.push(c.index());
            }
        }
    }
    out
}

/// An immutable, validated type hierarchy. Shared behind an `Arc` by every
/// feature structure typed against it.
pub struct TypeLattice {
    id: u64,
    names: Vec<String>,
    by_name: HashMap<String, TypeId>,
    parents: Vec<Vec<TypeId>>,
    children: Vec<Vec<TypeId>>,
    below: Vec<TypeSet>,
    glb: Vec<Option<TypeId>>,
    top: TypeId,
    features: Vec<String>,
    feat_by_name: HashMap<String, FeatId>,
    intro: Vec<TypeId>,
    approp: Vec<BTreeMap<FeatId, TypeId>>,
    constraints: Vec<Option<Dag>>,
    constrained_supertypes: Vec<Vec<TypeId>>,
}

impl TypeLattice {
    fn install_features(&mut self, decls: &[(String, String, String)]) -> Result<(), LatticeError> {
        let mut declared: Vec<(TypeId, FeatId, TypeId)> = Vec::new();
        for (ty, feat, value) in decls {
            let ty = self.require(ty)?;
            let value = self.require(value)?;
            let f = match self.feat_by_name.get(feat) {
                Some(&f) => f,
                None => {
                    let f = FeatId(self.features.len() as u32);
                    self.features.push(feat.clone());
                    self.feat_by_name.insert(feat.clone(), f);
                    self.intro.push(ty);
                    f
                }
            };
            let cur = self.intro[f.index()];
            if self.is_subtype(cur, ty) {
                self.intro[f.index()] = ty;
            } else if !self.is_subtype(ty, cur) {
                return Err(LatticeError::UnrelatedIntroduction {
                    feature: feat.clone(),
                    first: self.names[cur.index()].clone(),
                    second: self.names[ty.index()].clone(),
                });
            }
            declared.push((ty, f, value));
        }

        for t in 0..self.names.len() {
            let t = TypeId(t as u32);
            let mut map: BTreeMap<FeatId, TypeId> = BTreeMap::new();
            for &(at, f, value) in &declared {
                if !self.is_subtype(t, at) {
                    continue;
                }
                let merged = match map.get(&f) {
                    None => Some(value),
                    Some(&prev) => self.glb(prev, value),
                };
                match merged {
                    Some(v) => {
                        map.insert(f, v);
                    }
                    None => {
                        return Err(LatticeError::IncompatibleRestriction {
                            feature: self.features[f.index()].clone(),
                            ty: self.names[t.index()].clone(),
                        })
                    }
                }
            }
            self.approp[t.index()] = map;
        }
        Ok(())
    }

    fn require(&self, name: &str) -> Result<TypeId, LatticeError> {
        self.type_id(name)
            .ok_or_else(|| LatticeError::UnknownType(name.to_string()))
    }

    pub(crate) fn set_constraint(&mut self, ty: TypeId, dag: Dag) {
        self.constraints[ty.index()] = Some(dag);
        for t in 0..self.names.len() {
            let t = TypeId(t as u32);
            let list: Vec<TypeId> = (0..self.names.len())
                .map(|s| TypeId(s as u32))
                .filter(|&s| self.constraints[s.index()].is_some() && self.is_subtype(t, s))
                .collect();
            self.constrained_supertypes[t.index()] = list;
        }
    }

    /// Identity used to reject operations mixing structures from two lattices.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn top(&self) -> TypeId {
        self.top
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn types(&self) -> impl Iterator<Item = TypeId> {
        (0..self.names.len() as u32).map(TypeId)
    }

    pub fn type_id(&self, name: &str) -> Option<TypeId> {
        self.by_name.get(name).copied()
    }

    pub fn type_name(&self, t: TypeId) -> &str {
        &self.names[t.index()]
    }

    pub fn feat_id(&self, name: &str) -> Option<FeatId> {
        self.feat_by_name.get(name).copied()
    }

    pub fn feat_name(&self, f: FeatId) -> &str {
        &self.features[f.index()]
    }

    pub fn parents(&self, t: TypeId) -> &[TypeId] {
        &self.parents[t.index()]
    }

    pub fn children(&self, t: TypeId) -> &[TypeId] {
        &self.children[t.index()]
    }

    /// `sub <= sup` in the subtype order (reflexive).
    pub fn is_subtype(&self, sub: TypeId, sup: TypeId) -> bool {
        self.below[sup.index()].contains(sub.index())
    }

    /// Most general common subtype, `None` when the types are incompatible.
    pub fn glb(&self, a: TypeId, b: TypeId) -> Option<TypeId> {
        self.glb[a.index() * self.names.len() + b.index()]
    }

    /// By-name variant of [`glb`](Self::glb).
    pub fn glb_by_name(&self, a: &str, b: &str) -> Result<Option<&str>, LatticeError> {
        let a = self.require(a)?;
        let b = self.require(b)?;
        Ok(self.glb(a, b).map(|t| self.type_name(t)))
    }

    /// The type that introduces `f`; every subtype of it carries `f`.
    pub fn introducer(&self, f: FeatId) -> TypeId {
        self.intro[f.index()]
    }

    /// Value restriction of `f` at `t`, if `f` is appropriate there.
    pub fn restriction(&self, t: TypeId, f: FeatId) -> Option<TypeId> {
        self.approp[t.index()].get(&f).copied()
    }

    pub fn appropriate_features(&self, t: TypeId) -> impl Iterator<Item = (FeatId, TypeId)> + '_ {
        self.approp[t.index()].iter().map(|(&f, &v)| (f, v))
    }

    /// A type with no appropriate features; its nodes never carry arcs.
    pub fn is_atomic(&self, t: TypeId) -> bool {
        self.approp[t.index()].is_empty()
    }

    pub(crate) fn constraint(&self, t: TypeId) -> Option<&Dag> {
        self.constraints[t.index()].as_ref()
    }

    /// Types at or above `t` that carry a constraint.
    pub(crate) fn constrained_supertypes(&self, t: TypeId) -> &[TypeId] {
        &self.constrained_supertypes[t.index()]
    }

    pub fn has_constraint(&self, t: TypeId) -> bool {
        self.constraints[t.index()].is_some()
    }
}

impl fmt::Debug for TypeLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TypeLattice")
            .field("id", &self.id)
            .field("types", &self.names.len())
            .field("features", &self.features.len())
            .finish()
    }
}
