//! Lattice-free graph representation shared by feature structures and the
//! constraints stored in the lattice.
//!
//! A [`Dag`] is always canonical: node 0 is the root, nodes are numbered in
//! depth-first preorder following arcs in feature order. Two rooted graphs
//! are isomorphic exactly when their canonical `Dag`s are equal, which is
//! what makes `==` and hashing double as the isomorphism test.

use super::lattice::{FeatId, TypeId, TypeLattice};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Node {
    pub ty: TypeId,
    /// Sorted by feature, no duplicates.
    pub arcs: Vec<(FeatId, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Dag {
    pub nodes: Vec<Node>,
}

impl Dag {
    pub fn single(ty: TypeId) -> Dag {
        Dag {
            nodes: vec![Node {
                ty,
                arcs: Vec::new(),
            }],
        }
    }

    pub fn arc(&self, node: u32, f: FeatId) -> Option<u32> {
        let arcs = &self.nodes[node as usize].arcs;
        arcs.binary_search_by_key(&f, |&(g, _)| g)
            .ok()
            .map(|i| arcs[i].1)
    }

    pub fn follow(&self, from: u32, path: &[FeatId]) -> Option<u32> {
        path.iter().try_fold(from, |n, &f| self.arc(n, f))
    }

    /// Re-root at `node`, keeping only what is reachable from it.
    pub fn subdag(&self, node: u32) -> Dag {
        let mut g = Graph::from_dag(self);
        g.root = node as usize;
        g.canonicalize_plain()
    }
}

/// Mutable working form. Arcs may be appended freely; a second arc for a
/// feature a node already has becomes an equation instead.
#[derive(Clone, Debug)]
pub(crate) struct Graph {
    pub nodes: Vec<Node>,
    pub root: usize,
    pub eqs: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(root_ty: TypeId) -> Graph {
        Graph {
            nodes: vec![Node {
                ty: root_ty,
                arcs: Vec::new(),
            }],
            root: 0,
            eqs: Vec::new(),
        }
    }

    pub fn from_dag(d: &Dag) -> Graph {
        Graph {
            nodes: d.nodes.clone(),
            root: 0,
            eqs: Vec::new(),
        }
    }

    /// Copy `d` into this graph; returns the offset of its root.
    pub fn append(&mut self, d: &Dag) -> usize {
        let off = self.nodes.len();
        for n in &d.nodes {
            self.nodes.push(Node {
                ty: n.ty,
                arcs: n
                    .arcs
                    .iter()
                    .map(|&(f, t)| (f, t + off as u32))
                    .collect(),
            });
        }
        off
    }

    pub fn add_node(&mut self, ty: TypeId) -> usize {
        self.nodes.push(Node {
            ty,
            arcs: Vec::new(),
        });
        self.nodes.len() - 1
    }

    pub fn arc(&self, node: usize, f: FeatId) -> Option<usize> {
        self.nodes[node]
            .arcs
            .iter()
            .find(|&&(g, _)| g == f)
            .map(|&(_, t)| t as usize)
    }

    /// Add `node --f--> target`, or equate with the existing target.
    pub fn add_arc(&mut self, node: usize, f: FeatId, target: usize) {
        match self.arc(node, f) {
            Some(existing) => self.eqs.push((existing, target)),
            None => self.nodes[node].arcs.push((f, target as u32)),
        }
    }

    /// Overwrite (or create) the arc `node --f-->`.
    pub fn set_arc(&mut self, node: usize, f: FeatId, target: usize) {
        let arcs = &mut self.nodes[node].arcs;
        match arcs.iter_mut().find(|(g, _)| *g == f) {
            Some(slot) => slot.1 = target as u32,
            None => arcs.push((f, target as u32)),
        }
    }

    /// Walk `path` from `node`, creating top-typed nodes where arcs are missing.
    pub fn walk_or_create(&mut self, node: usize, path: &[FeatId], top: TypeId) -> usize {
        let mut cur = node;
        for &f in path {
            cur = match self.arc(cur, f) {
                Some(n) => n,
                None => {
                    let n = self.add_node(top);
                    self.nodes[cur].arcs.push((f, n as u32));
                    n
                }
            };
        }
        cur
    }

    pub fn equate(&mut self, a: usize, b: usize) {
        self.eqs.push((a, b));
    }

    /// Canonicalize a graph known to be consistent: no equations, no typing.
    fn canonicalize_plain(&self) -> Dag {
        let ident: Vec<usize> = (0..self.nodes.len()).collect();
        let types: Vec<TypeId> = self.nodes.iter().map(|n| n.ty).collect();
        let arcs: Vec<Vec<(FeatId, usize)>> = self
            .nodes
            .iter()
            .map(|n| n.arcs.iter().map(|&(f, t)| (f, t as usize)).collect())
            .collect();
        canonical(self.root, &ident, &types, &arcs)
            .expect("plain graph is acyclic")
            .0
    }

    /// Solve the equations with union-find, infer types from
    /// appropriateness, reject cycles, and emit the canonical DAG.
    ///
    /// Returns `None` on a type clash or a cycle. The second component maps
    /// each graph node to its canonical index (if reachable from the root).
    pub fn resolve(mut self, lat: &TypeLattice) -> Option<(Dag, Vec<Option<u32>>)> {
        let n = self.nodes.len();
        let mut uf: Vec<usize> = (0..n).collect();
        let mut ty: Vec<TypeId> = self.nodes.iter().map(|n| n.ty).collect();
        let mut arcs: Vec<Vec<(FeatId, usize)>> = self
            .nodes
            .iter_mut()
            .map(|n| {
                n.arcs
                    .drain(..)
                    .map(|(f, t)| (f, t as usize))
                    .collect()
            })
            .collect();

        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }

        let mut work = std::mem::take(&mut self.eqs);
        while let Some((a, b)) = work.pop() {
            let ra = find(&mut uf, a);
            let rb = find(&mut uf, b);
            if ra == rb {
                continue;
            }
            let t = lat.glb(ty[ra], ty[rb])?;
            uf[rb] = ra;
            ty[ra] = t;
            let moved = std::mem::take(&mut arcs[rb]);
            for (f, x) in moved {
                match arcs[ra].iter().find(|&&(g, _)| g == f) {
                    Some(&(_, y)) => work.push((x, y)),
                    None => arcs[ra].push((f, x)),
                }
            }
        }

        // Type inference over representatives until nothing moves.
        let reps: Vec<usize> = (0..n).filter(|&i| find(&mut uf, i) == i).collect();
        for r in &reps {
            let list = std::mem::take(&mut arcs[*r]);
            arcs[*r] = list.into_iter().map(|(f, t)| (f, find(&mut uf, t))).collect();
        }
        loop {
            let mut changed = false;
            for &r in &reps {
                for i in 0..arcs[r].len() {
                    let (f, child) = arcs[r][i];
                    let t = lat.glb(ty[r], lat.introducer(f))?;
                    if t != ty[r] {
                        ty[r] = t;
                        changed = true;
                    }
                    let restr = lat.restriction(ty[r], f)?;
                    let tc = lat.glb(ty[child], restr)?;
                    if tc != ty[child] {
                        ty[child] = tc;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let root = find(&mut uf, self.root);
        let reps_of: Vec<usize> = (0..n).map(|i| find(&mut uf, i)).collect();
        let (dag, rep_map) = canonical(root, &reps_of, &ty, &arcs)?;
        let map = (0..n).map(|i| rep_map[reps_of[i]]).collect();
        Some((dag, map))
    }
}

/// Preorder numbering from `root`. `rep[i]` gives the representative of i;
/// only representatives' types and arcs are consulted.
fn canonical(
    root: usize,
    rep: &[usize],
    ty: &[TypeId],
    arcs: &[Vec<(FeatId, usize)>],
) -> Option<(Dag, Vec<Option<u32>>)> {
    let n = ty.len();
    let mut id: Vec<Option<u32>> = vec![None; n];
    let mut on_path = vec![false; n];
    let mut order: Vec<usize> = Vec::new();
    let mut sorted: Vec<Vec<(FeatId, usize)>> = vec![Vec::new(); n];

    // Iterative DFS: (node, next arc index)
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let r = rep[root];
    id[r] = Some(0);
    order.push(r);
    on_path[r] = true;
    let mut s: Vec<(FeatId, usize)> = arcs[r].iter().map(|&(f, t)| (f, rep[t])).collect();
    s.sort_by_key(|&(f, _)| f);
    sorted[r] = s;
    stack.push((r, 0));
    while let Some(&mut (node, ref mut next)) = stack.last_mut() {
        if *next >= sorted[node].len() {
            on_path[node] = false;
            stack.pop();
            continue;
        }
        let (_, child) = sorted[node][*next];
        *next += 1;
        if on_path[child] {
            return None;
        }
        if id[child].is_none() {
            id[child] = Some(order.len() as u32);
            order.push(child);
            on_path[child] = true;
            let mut s: Vec<(FeatId, usize)> =
                arcs[child].iter().map(|&(f, t)| (f, rep[t])).collect();
            s.sort_by_key(|&(f, _)| f);
            sorted[child] = s;
            stack.push((child, 0));
        }
    }

    let nodes = order
        .iter()
        .map(|&old| Node {
            ty: ty[old],
            arcs: sorted[old]
                .iter()
                .map(|&(f, t)| (f, id[t].expect("visited")))
                .collect(),
        })
        .collect();
    Some((Dag { nodes }, id))
}
