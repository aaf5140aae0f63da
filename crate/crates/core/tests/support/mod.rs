//! Shared helpers for the integration tests: an independent path-based
//! unifier and subsumption check, a brute-force glb, and a seeded
//! generator of random feature structures.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use lexrule::feature::{load_hierarchy, FeatureStructure, TypeId, TypeLattice};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Path = Vec<String>;

/// A small lattice with a diamond among structured types and one among
/// atoms, so unification can both fail and produce new types.
pub const TEST_HIERARCHY: &str = "
type top
type s sub top
type s1 sub s
type s2 sub s
type s12 sub s1 s2
type t sub top
type t1 sub t
type a sub top
type a1 sub a
type a2 sub a
type a12 sub a1 a2
type b sub top
feat s F top
feat s G top
feat s1 H a
feat t K top
";

pub fn test_lattice() -> Arc<TypeLattice> {
    load_hierarchy(TEST_HIERARCHY).expect("test hierarchy")
}

// ------------------------------------------------------------------ glb

fn ancestors(lat: &TypeLattice, t: TypeId) -> BTreeSet<TypeId> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![t];
    while let Some(x) = stack.pop() {
        if seen.insert(x) {
            stack.extend(lat.parents(x).iter().copied());
        }
    }
    seen
}

pub fn brute_subtype(lat: &TypeLattice, sub: TypeId, sup: TypeId) -> bool {
    ancestors(lat, sub).contains(&sup)
}

/// Greatest common lower bound by enumerating every type.
pub fn brute_glb(lat: &TypeLattice, a: TypeId, b: TypeId) -> Option<TypeId> {
    let lower: Vec<TypeId> = lat
        .types()
        .filter(|&t| {
            let anc = ancestors(lat, t);
            anc.contains(&a) && anc.contains(&b)
        })
        .collect();
    lower
        .iter()
        .copied()
        .find(|&g| lower.iter().all(|&x| ancestors(lat, x).contains(&g)))
}

// ------------------------------------------------------- path structures

/// A feature structure as its path set, a type per path and the classes
/// of paths that lead to one node (only classes of two or more).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathFs {
    pub types: BTreeMap<Path, String>,
    pub classes: BTreeSet<BTreeSet<Path>>,
}

fn join(p: &Path) -> String {
    p.join("|")
}

fn collect_paths(fs: &FeatureStructure, prefix: &Path, out: &mut BTreeMap<Path, String>) {
    out.insert(prefix.clone(), fs.type_name().to_string());
    for (f, sub) in fs.features() {
        let mut p = prefix.clone();
        p.push(f.to_string());
        collect_paths(&sub, &p, out);
    }
}

impl PathFs {
    pub fn of(fs: &FeatureStructure) -> PathFs {
        let mut types = BTreeMap::new();
        collect_paths(fs, &Vec::new(), &mut types);
        let paths: Vec<&Path> = types.keys().filter(|p| !p.is_empty()).collect();
        let mut class_of: HashMap<&Path, usize> = HashMap::new();
        let mut classes: Vec<BTreeSet<Path>> = Vec::new();
        for (i, p) in paths.iter().enumerate() {
            if class_of.contains_key(p) {
                continue;
            }
            let mut c = BTreeSet::from([(*p).clone()]);
            for q in &paths[i + 1..] {
                if fs.shares(&join(p), &join(q)) {
                    c.insert((*q).clone());
                }
            }
            for q in &c {
                class_of.insert(paths.iter().find(|x| **x == q).unwrap(), classes.len());
            }
            classes.push(c);
        }
        PathFs {
            types,
            classes: classes.into_iter().filter(|c| c.len() > 1).collect(),
        }
    }

    fn same_node(&self, p: &Path, q: &Path) -> bool {
        p == q || self.classes.iter().any(|c| c.contains(p) && c.contains(q))
    }
}

/// `general` subsumes `specific`: every path, type bound and sharing of
/// the general structure is present in the specific one.
pub fn oracle_subsumes(lat: &TypeLattice, general: &PathFs, specific: &PathFs) -> bool {
    general.types.iter().all(|(p, t)| match specific.types.get(p) {
        Some(u) => brute_subtype(lat, lat.type_id(u).unwrap(), lat.type_id(t).unwrap()),
        None => false,
    }) && general.classes.iter().all(|c| {
        let first = c.iter().next().unwrap();
        c.iter().all(|q| specific.same_node(first, q))
    })
}

/// Unification on path sets: union the paths and equations, close under
/// extension (p = q implies p.f = q.f), then type every class.
pub fn oracle_unify(lat: &TypeLattice, a: &PathFs, b: &PathFs) -> Option<PathFs> {
    let bound = a.types.len() + b.types.len() + 1;
    let mut paths: BTreeSet<Path> = a.types.keys().chain(b.types.keys()).cloned().collect();
    let mut parent: BTreeMap<Path, Path> = BTreeMap::new();
    fn find(parent: &mut BTreeMap<Path, Path>, p: &Path) -> Path {
        let mut x = p.clone();
        while let Some(y) = parent.get(&x) {
            if *y == x {
                break;
            }
            x = y.clone();
        }
        x
    }
    fn union(parent: &mut BTreeMap<Path, Path>, p: &Path, q: &Path) -> bool {
        let (rp, rq) = (find(parent, p), find(parent, q));
        if rp == rq {
            return false;
        }
        parent.insert(rq, rp);
        true
    }
    for c in a.classes.iter().chain(&b.classes) {
        let first = c.iter().next().unwrap();
        for q in c {
            union(&mut parent, first, q);
        }
    }

    loop {
        let mut changed = false;
        let snapshot: Vec<Path> = paths.iter().cloned().collect();
        let mut groups: BTreeMap<Path, Vec<Path>> = BTreeMap::new();
        for p in &snapshot {
            groups.entry(find(&mut parent, p)).or_default().push(p.clone());
        }
        for members in groups.values() {
            // a node reachable from itself
            for p in members {
                for q in members {
                    if q.len() > p.len() && q.starts_with(p) {
                        return None;
                    }
                }
            }
            let feats: BTreeSet<String> = members
                .iter()
                .flat_map(|p| {
                    snapshot
                        .iter()
                        .filter(move |x| x.len() == p.len() + 1 && x.starts_with(p))
                        .map(|x| x.last().unwrap().clone())
                })
                .collect();
            for f in &feats {
                let ext: Vec<Path> = members
                    .iter()
                    .map(|p| {
                        let mut x = p.clone();
                        x.push(f.clone());
                        x
                    })
                    .collect();
                for x in &ext {
                    if x.len() > bound {
                        return None;
                    }
                    changed |= paths.insert(x.clone());
                }
                for x in &ext[1..] {
                    changed |= union(&mut parent, &ext[0], x);
                }
            }
        }
        if !changed {
            break;
        }
    }

    let mut ty: BTreeMap<Path, TypeId> = BTreeMap::new();
    let all: Vec<Path> = paths.iter().cloned().collect();
    for p in &all {
        let r = find(&mut parent, p);
        let cur = *ty.entry(r.clone()).or_insert(lat.top());
        let mut t = cur;
        for src in [&a.types, &b.types] {
            if let Some(name) = src.get(p) {
                t = brute_glb(lat, t, lat.type_id(name).unwrap())?;
            }
        }
        ty.insert(r, t);
    }
    loop {
        let mut changed = false;
        for p in all.iter().filter(|p| !p.is_empty()) {
            let f = p.last().unwrap();
            let fid = lat.feat_id(f).unwrap();
            let mother = find(&mut parent, &p[..p.len() - 1].to_vec());
            let me = find(&mut parent, p);
            let tm = brute_glb(lat, ty[&mother], lat.introducer(fid))?;
            if tm != ty[&mother] {
                ty.insert(mother.clone(), tm);
                changed = true;
            }
            let restr = lat.restriction(tm, fid)?;
            let tc = brute_glb(lat, ty[&me], restr)?;
            if tc != ty[&me] {
                ty.insert(me, tc);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut groups: BTreeMap<Path, BTreeSet<Path>> = BTreeMap::new();
    let mut types = BTreeMap::new();
    for p in &all {
        let r = find(&mut parent, p);
        types.insert(p.clone(), lat.type_name(ty[&r]).to_string());
        groups.entry(r).or_default().insert(p.clone());
    }
    Some(PathFs {
        types,
        classes: groups.into_values().filter(|c| c.len() > 1).collect(),
    })
}

// ------------------------------------------------------------ generator

const ATOMS: &[&str] = &["top", "a", "a1", "a2", "a12", "b"];
const STRUCTS: &[&str] = &["s", "s1", "s2", "s12", "t", "t1", "top"];

fn gen_value(rng: &mut ChaCha8Rng, depth: u32, out: &mut String) {
    if depth < 3 && rng.gen_bool(0.3) {
        let tag = if rng.gen_bool(0.8) { 1 } else { 2 };
        out.push_str(&format!("#{tag} "));
        if rng.gen_bool(0.5) {
            // a bare tag: its value comes from another occurrence
            out.pop();
            return;
        }
    }
    if depth == 0 || (depth < 3 && rng.gen_bool(0.4)) {
        out.push_str(ATOMS[rng.gen_range(0..ATOMS.len())]);
        return;
    }
    let ty = if depth == 3 {
        ["s", "s1", "s2", "top"][rng.gen_range(0..4)]
    } else {
        STRUCTS[rng.gen_range(0..STRUCTS.len())]
    };
    let feats: &[&str] = match ty {
        "t" | "t1" => &["K"],
        "s1" | "s12" => &["F", "G", "H"],
        "s" | "s2" => &["F", "G"],
        _ => &["F", "G", "H", "K"],
    };
    out.push('[');
    out.push_str(ty);
    for f in feats {
        if rng.gen_bool(if depth == 3 { 0.8 } else { 0.5 }) {
            out.push_str(", ");
            out.push_str(f);
            out.push_str(": ");
            if *f == "H" && rng.gen_bool(0.7) {
                out.push_str(ATOMS[rng.gen_range(0..ATOMS.len())]);
            } else {
                gen_value(rng, depth - 1, out);
            }
        }
    }
    out.push(']');
}

/// A random description over [`TEST_HIERARCHY`]; it may be inconsistent.
pub fn random_description(rng: &mut ChaCha8Rng) -> String {
    let mut s = String::new();
    gen_value(rng, 3, &mut s);
    s
}

/// A random consistent structure.
pub fn random_fs(lat: &Arc<TypeLattice>, rng: &mut ChaCha8Rng) -> FeatureStructure {
    loop {
        if let Ok(fs) = FeatureStructure::parse(lat, &random_description(rng)) {
            return fs;
        }
    }
}

/// Unification where both failure and success are plain values.
pub fn unify(a: &FeatureStructure, b: &FeatureStructure) -> Option<FeatureStructure> {
    a.unify(b).expect("same lattice")
}
