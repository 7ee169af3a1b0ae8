use super::{canonical_relator, free_reduce, invert, Cycle, Letter, Presentation, Word};
use crate::bitset::BitSet;
use crate::geometry::{Geometry, ObjectId};
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::{BTreeSet, HashMap, VecDeque};

/// Spanning-tree presentation of a fundamental group, with the data needed to
/// read off the word of any closed walk.
#[derive(Clone, Debug)]
pub struct Pi1Presentation {
    pub presentation: Presentation,
    pub base: ObjectId,
    /// Triangles (full graph) or residue cycles (point-line truncation) used.
    pub relator_sources: usize,
    pub point_line: bool,
    scope: BitSet,
    parent: Vec<Option<ObjectId>>,
    edges: HashMap<(ObjectId, ObjectId), usize>,
}

impl Pi1Presentation {
    /// Word of the step `a -> b`; tree edges are trivial.
    pub fn edge_word(&self, a: ObjectId, b: ObjectId) -> Result<Word> {
        let key = (a.min(b), a.max(b));
        if let Some(&g) = self.edges.get(&key) {
            let l = g as Letter + 1;
            return Ok(vec![if a < b { l } else { -l }]);
        }
        if self.parent.get(a) == Some(&Some(b)) || self.parent.get(b) == Some(&Some(a)) {
            return Ok(Vec::new());
        }
        Err(Error::Precondition(format!("{a} -- {b} is not an edge of the presented graph")))
    }

    pub fn walk_word(&self, walk: &[ObjectId]) -> Result<Word> {
        let mut w = Word::new();
        for s in walk.windows(2) {
            w.extend(self.edge_word(s[0], s[1])?);
        }
        Ok(free_reduce(&w))
    }

    /// Word of a cycle, conjugated to the base along the spanning tree (which
    /// contributes nothing).
    pub fn cycle_word(&self, c: &Cycle) -> Result<Word> {
        self.walk_word(c.ids())
    }

    /// Closed walk from the base whose word is the single generator `k`.
    pub fn generator_walk(&self, k: usize) -> Option<Vec<ObjectId>> {
        let (&(u, v), _) = self.edges.iter().find(|(_, &g)| g == k)?;
        let to_base = |mut x: ObjectId| {
            let mut path = vec![x];
            while let Some(y) = self.parent[x] {
                path.push(y);
                x = y;
            }
            path
        };
        let mut walk: Vec<ObjectId> = to_base(u).into_iter().rev().collect();
        walk.extend(to_base(v));
        Some(walk)
    }

    pub fn in_scope(&self, x: ObjectId) -> bool {
        self.scope.contains(x)
    }
}

fn bfs_tree(g: &Geometry, scope: &BitSet, base: ObjectId) -> Result<Vec<Option<ObjectId>>> {
    let mut parent = vec![None; g.len()];
    let mut seen = BitSet::new(g.len());
    seen.insert(base);
    let mut q = VecDeque::from([base]);
    while let Some(x) = q.pop_front() {
        let mut next = g.neighbors(x).intersection(scope);
        next.difference_with(&seen);
        for y in next.iter() {
            seen.insert(y);
            parent[y] = Some(x);
            q.push_back(y);
        }
    }
    if seen.count() != scope.count() {
        return Err(Error::Disconnected);
    }
    Ok(parent)
}

fn number_edges(g: &Geometry, scope: &BitSet, parent: &[Option<ObjectId>]) -> HashMap<(ObjectId, ObjectId), usize> {
    let mut edges = HashMap::new();
    for u in scope.iter() {
        for v in g.neighbors(u).intersection(scope).iter().filter(|&v| v > u) {
            if parent[v] != Some(u) && parent[u] != Some(v) {
                let k = edges.len();
                edges.insert((u, v), k);
            }
        }
    }
    edges
}

/// Presentation of `pi_1(g, base)`: generators are the non-tree edges of a
/// breadth-first spanning tree, relators the triangles of the incidence graph.
pub fn pi1_presentation(g: &Geometry, base: ObjectId) -> Result<Pi1Presentation> {
    if base >= g.len() {
        return Err(Error::Precondition("base out of range".into()));
    }
    let scope = BitSet::full(g.len());
    let parent = bfs_tree(g, &scope, base)?;
    let edges = number_edges(g, &scope, &parent);
    let mut p = Pi1Presentation {
        presentation: Presentation { generators: edges.len(), relators: Vec::new() },
        base,
        relator_sources: 0,
        point_line: false,
        scope,
        parent,
        edges,
    };
    let per_vertex: Vec<(usize, Vec<Word>)> = (0..g.len())
        .into_par_iter()
        .map(|u| {
            let mut count = 0;
            let mut rels = Vec::new();
            for v in g.neighbors(u).iter().filter(|&v| v > u) {
                let common = g.neighbors(u).intersection(g.neighbors(v));
                for w in common.iter().filter(|&w| w > v) {
                    count += 1;
                    let mut word = p.edge_word(u, v).unwrap();
                    word.extend(p.edge_word(v, w).unwrap());
                    word.extend(p.edge_word(w, u).unwrap());
                    let word = free_reduce(&word);
                    if !word.is_empty() {
                        rels.push(word);
                    }
                }
            }
            (count, rels)
        })
        .collect();
    for (count, rels) in per_vertex {
        p.relator_sources += count;
        p.presentation.relators.extend(rels);
    }
    Ok(p)
}

/// Presentation on the point-line incidence graph only. Each object of higher
/// type contributes the cycles of a cycle basis of the point-line graph of its
/// residue, which are null-homotopic because they lie in that residue.
pub fn pi1_point_line_presentation(g: &Geometry, base: ObjectId) -> Result<Pi1Presentation> {
    if g.rank() < 2 {
        return Err(Error::Precondition("point-line truncation needs rank at least 2".into()));
    }
    let mut scope = g.type_mask(0).clone();
    scope.union_with(g.type_mask(1));
    if !scope.contains(base) {
        return Err(Error::Precondition("base must be a point or a line".into()));
    }
    let parent = bfs_tree(g, &scope, base)?;
    let edges = number_edges(g, &scope, &parent);
    let mut p = Pi1Presentation {
        presentation: Presentation { generators: edges.len(), relators: Vec::new() },
        base,
        relator_sources: 0,
        point_line: true,
        scope,
        parent,
        edges,
    };
    let higher: Vec<ObjectId> = (0..g.len()).filter(|&y| g.type_index(y) >= 2).collect();
    let per_object: Vec<Vec<Word>> = higher
        .par_iter()
        .map(|&y| {
            let local = g.neighbors(y).intersection(&p.scope);
            let mut rels = Vec::new();
            let mut to_root: HashMap<ObjectId, Word> = HashMap::new();
            let mut tree: HashMap<ObjectId, ObjectId> = HashMap::new();
            for root in local.iter() {
                if to_root.contains_key(&root) {
                    continue;
                }
                to_root.insert(root, Word::new());
                let mut q = VecDeque::from([root]);
                while let Some(x) = q.pop_front() {
                    for z in g.neighbors(x).intersection(&local).iter() {
                        if to_root.contains_key(&z) {
                            continue;
                        }
                        let mut w = to_root[&x].clone();
                        w.extend(p.edge_word(x, z).unwrap());
                        to_root.insert(z, free_reduce(&w));
                        tree.insert(z, x);
                        q.push_back(z);
                    }
                }
            }
            for a in local.iter() {
                for b in g.neighbors(a).intersection(&local).iter().filter(|&b| b > a) {
                    if tree.get(&b) == Some(&a) || tree.get(&a) == Some(&b) {
                        continue;
                    }
                    let mut w = to_root[&a].clone();
                    w.extend(p.edge_word(a, b).unwrap());
                    w.extend(invert(&to_root[&b]));
                    let w = free_reduce(&w);
                    if !w.is_empty() {
                        rels.push(w);
                    }
                }
            }
            rels
        })
        .collect();
    let mut seen = BTreeSet::new();
    for rels in per_object {
        for r in rels {
            p.relator_sources += 1;
            if seen.insert(canonical_relator(&r)) {
                p.presentation.relators.push(r);
            }
        }
    }
    Ok(p)
}
