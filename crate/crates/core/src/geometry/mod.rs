//! Pre-geometries: typed objects with a symmetric incidence relation.

mod dot;
mod gamma;
mod pi;
mod predicates;

pub use dot::to_dot;
pub use gamma::{basis_from_chamber, build_gamma, chamber_from_basis, chamber_subspaces, flag_basis};
pub use pi::{build_pi, check_phi, hyperplane_check, standard_pi_pair, HyperplaneReport, PhiReport, PiRadicalCheck};
pub use predicates::{FlagStats, ShadowReport};

use crate::bitset::BitSet;
use crate::linalg::Subspace;
use crate::symplectic::SymplecticSpace;
use crate::{Error, Result};
use std::collections::HashMap;

/// Object identifiers are indices into [`Geometry::objects`].
pub type ObjectId = usize;

/// Sorted list of pairwise incident object ids.
pub type Flag = Vec<ObjectId>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeometryKind {
    Gamma,
    Pi { p: Subspace, h: Subspace },
    Residue { flag: Flag },
    Cover,
    Induced,
}

impl GeometryKind {
    pub fn name(&self) -> &'static str {
        match self {
            GeometryKind::Gamma => "gamma",
            GeometryKind::Pi { .. } => "pi",
            GeometryKind::Residue { .. } => "residue",
            GeometryKind::Cover => "cover",
            GeometryKind::Induced => "induced",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjectLabel {
    Subspace(Subspace),
    /// Lift of a base object; `plus` selects `X+` over `X-`.
    Lift { base: ObjectId, plus: bool },
}

impl ObjectLabel {
    pub fn subspace(&self) -> Option<&Subspace> {
        match self {
            ObjectLabel::Subspace(s) => Some(s),
            ObjectLabel::Lift { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Object {
    /// Index into the geometry's type list.
    pub ty: usize,
    pub label: ObjectLabel,
}

#[derive(Clone, Debug)]
pub struct Geometry {
    kind: GeometryKind,
    ambient: Option<SymplecticSpace>,
    types: Vec<usize>,
    objects: Vec<Object>,
    adj: Vec<BitSet>,
    type_masks: Vec<BitSet>,
    lookup: HashMap<ObjectLabel, ObjectId>,
    source_ids: Option<Vec<ObjectId>>,
}

impl Geometry {
    /// Assemble a geometry; objects must be sorted by type index. Incidence is
    /// evaluated once for every pair of objects of distinct types.
    pub fn from_incidence<F>(
        kind: GeometryKind,
        ambient: Option<SymplecticSpace>,
        types: Vec<usize>,
        objects: Vec<Object>,
        incident: F,
    ) -> Geometry
    where
        F: Fn(ObjectId, ObjectId) -> bool + Sync,
    {
        use rayon::prelude::*;
        let n = objects.len();
        debug_assert!(objects.windows(2).all(|w| w[0].ty <= w[1].ty));
        let rows: Vec<Vec<ObjectId>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (i + 1..n)
                    .filter(|&j| objects[i].ty != objects[j].ty && incident(i, j))
                    .collect()
            })
            .collect();
        let mut adj = vec![BitSet::new(n); n];
        for (i, row) in rows.into_iter().enumerate() {
            for j in row {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
        Geometry::from_adjacency(kind, ambient, types, objects, adj, None)
    }

    pub(crate) fn from_adjacency(
        kind: GeometryKind,
        ambient: Option<SymplecticSpace>,
        types: Vec<usize>,
        objects: Vec<Object>,
        adj: Vec<BitSet>,
        source_ids: Option<Vec<ObjectId>>,
    ) -> Geometry {
        let n = objects.len();
        let mut type_masks = vec![BitSet::new(n); types.len()];
        let mut lookup = HashMap::with_capacity(n);
        for (i, o) in objects.iter().enumerate() {
            type_masks[o.ty].insert(i);
            lookup.insert(o.label.clone(), i);
        }
        Geometry { kind, ambient, types, objects, adj, type_masks, lookup, source_ids }
    }

    pub fn kind(&self) -> &GeometryKind {
        &self.kind
    }

    pub fn ambient(&self) -> Option<&SymplecticSpace> {
        self.ambient.as_ref()
    }

    /// Type labels, increasing.
    pub fn types(&self) -> &[usize] {
        &self.types
    }

    pub fn rank(&self) -> usize {
        self.types.len()
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn object(&self, id: ObjectId) -> &Object {
        &self.objects[id]
    }

    /// Type label of an object.
    pub fn type_of(&self, id: ObjectId) -> usize {
        self.types[self.objects[id].ty]
    }

    pub fn type_index(&self, id: ObjectId) -> usize {
        self.objects[id].ty
    }

    pub fn subspace(&self, id: ObjectId) -> Option<&Subspace> {
        self.objects[id].label.subspace()
    }

    pub fn find(&self, label: &ObjectLabel) -> Option<ObjectId> {
        self.lookup.get(label).copied()
    }

    pub fn find_subspace(&self, u: &Subspace) -> Option<ObjectId> {
        self.find(&ObjectLabel::Subspace(u.clone()))
    }

    /// Ids in the parent geometry, for residues and induced subgeometries.
    pub fn source_ids(&self) -> Option<&[ObjectId]> {
        self.source_ids.as_deref()
    }

    /// Incident distinct objects (reflexivity is implicit).
    pub fn neighbors(&self, id: ObjectId) -> &BitSet {
        &self.adj[id]
    }

    pub fn type_mask(&self, ty_index: usize) -> &BitSet {
        &self.type_masks[ty_index]
    }

    pub fn ids_of_type(&self, ty_index: usize) -> Vec<ObjectId> {
        self.type_masks[ty_index].iter().collect()
    }

    pub fn incident(&self, a: ObjectId, b: ObjectId) -> bool {
        a == b || self.adj[a].contains(b)
    }

    /// `{type label -> count}` in type order.
    pub fn type_counts(&self) -> Vec<(usize, usize)> {
        self.types.iter().enumerate().map(|(i, &t)| (t, self.type_masks[i].count())).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count()).sum::<usize>() / 2
    }

    pub fn is_flag(&self, ids: &[ObjectId]) -> bool {
        let mut seen = vec![false; self.types.len()];
        for (k, &a) in ids.iter().enumerate() {
            if a >= self.len() || seen[self.objects[a].ty] {
                return false;
            }
            seen[self.objects[a].ty] = true;
            if ids[..k].iter().any(|&b| !self.incident(a, b)) {
                return false;
            }
        }
        true
    }

    pub fn is_chamber(&self, ids: &[ObjectId]) -> bool {
        ids.len() == self.rank() && self.is_flag(ids)
    }

    /// Objects incident to every member of the flag, excluding the flag.
    pub fn residue_set(&self, flag: &[ObjectId]) -> BitSet {
        let mut s = BitSet::full(self.len());
        for &f in flag {
            s.intersect_with(&self.adj[f]);
        }
        s
    }

    /// Residue of a flag, retyped to the remaining type labels.
    pub fn residue(&self, flag: &[ObjectId]) -> Result<Geometry> {
        if !self.is_flag(flag) {
            return Err(Error::NotAFlag);
        }
        let mut sorted = flag.to_vec();
        sorted.sort_unstable();
        let ids: Vec<ObjectId> = self.residue_set(flag).iter().collect();
        let used: Vec<usize> = sorted.iter().map(|&f| self.objects[f].ty).collect();
        let keep: Vec<usize> = (0..self.types.len()).filter(|t| !used.contains(t)).collect();
        Ok(self.restrict(GeometryKind::Residue { flag: sorted }, &ids, &keep))
    }

    /// Sub-pre-geometry induced on the given objects, keeping all types.
    pub fn induced(&self, ids: &[ObjectId]) -> Geometry {
        let mut ids = ids.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let keep: Vec<usize> = (0..self.types.len()).collect();
        self.restrict(GeometryKind::Induced, &ids, &keep)
    }

    fn restrict(&self, kind: GeometryKind, ids: &[ObjectId], keep_types: &[usize]) -> Geometry {
        let types: Vec<usize> = keep_types.iter().map(|&t| self.types[t]).collect();
        let retype: HashMap<usize, usize> = keep_types.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let pos: HashMap<ObjectId, usize> = ids.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let objects: Vec<Object> = ids
            .iter()
            .map(|&x| Object { ty: retype[&self.objects[x].ty], label: self.objects[x].label.clone() })
            .collect();
        let mut adj = vec![BitSet::new(ids.len()); ids.len()];
        for (i, &x) in ids.iter().enumerate() {
            for y in self.adj[x].iter() {
                if let Some(&j) = pos.get(&y) {
                    adj[i].insert(j);
                }
            }
        }
        Geometry::from_adjacency(kind, self.ambient.clone(), types, objects, adj, Some(ids.to_vec()))
    }

    /// Copy with one incidence removed; used to build broken controls.
    pub fn without_incidence(&self, a: ObjectId, b: ObjectId) -> Geometry {
        let mut g = self.clone();
        g.adj[a].remove(b);
        g.adj[b].remove(a);
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_of_chamber_is_empty() {
        let sp = SymplecticSpace::standard(4, 2).unwrap();
        let g = build_gamma(&sp).unwrap();
        let c = chamber_from_basis(&g, &sp.standard_basis()).unwrap();
        let r = g.residue(&c).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.rank(), 0);
    }

    #[test]
    fn residue_rejects_non_flags() {
        let sp = SymplecticSpace::standard(4, 2).unwrap();
        let g = build_gamma(&sp).unwrap();
        let pts = g.ids_of_type(0);
        assert_eq!(g.residue(&[pts[0], pts[1]]).unwrap_err(), Error::NotAFlag);
    }
}
