//! The geometry of proper subspaces meeting `Rad(V)` trivially whose radical
//! has dimension at most one.

use super::{Flag, Geometry, GeometryKind, Object, ObjectLabel};
use crate::bitset::BitSet;
use crate::linalg::{all_subspaces, PointIndex, Subspace};
use crate::symplectic::{extend_hyperbolic_basis, HyperbolicBasis, SymplecticSpace};
use crate::{Error, Result};

pub fn build_gamma(sp: &SymplecticSpace) -> Result<Geometry> {
    let n = sp.dim();
    let points = PointIndex::new(sp.field(), n);
    let rad_v = sp.ambient_radical();
    let rad_v_shadow = points.shadow(rad_v);
    let mut objects = Vec::new();
    let mut shadows: Vec<BitSet> = Vec::new();
    let mut rad_shadows: Vec<BitSet> = Vec::new();
    for k in 1..n {
        for u in all_subspaces(sp.field(), n, k) {
            let sh = points.shadow(&u);
            if !sh.is_disjoint(&rad_v_shadow) {
                continue;
            }
            let rad = sp.radical(&u)?;
            if rad.dim() > 1 {
                continue;
            }
            rad_shadows.push(points.shadow(&rad));
            shadows.push(sh);
            objects.push(Object { ty: k - 1, label: ObjectLabel::Subspace(u) });
        }
    }
    let types: Vec<usize> = (1..n).collect();
    // Objects are sorted by dimension, so i < j means dim X_i <= dim X_j.
    let inc = |i: usize, j: usize| shadows[i].is_subset(&shadows[j]) && shadows[i].is_disjoint(&rad_shadows[j]);
    Ok(Geometry::from_incidence(GeometryKind::Gamma, Some(sp.clone()), types, objects, inc))
}

/// Subspaces `C_l = <h_1, ..., h_l>` for `l = 1, ..., n - 1`.
pub fn chamber_subspaces(sp: &SymplecticSpace, hb: &HyperbolicBasis) -> Vec<Subspace> {
    let h = hb.h_order();
    (1..sp.dim()).map(|l| sp.span(&h[..l])).collect()
}

pub fn chamber_from_basis(g: &Geometry, hb: &HyperbolicBasis) -> Result<Flag> {
    let sp = g.ambient().ok_or_else(|| Error::Precondition("geometry has no ambient space".into()))?;
    if hb.len() != sp.dim() || !hb.is_valid(sp) {
        return Err(Error::Precondition("not a hyperbolic basis of V".into()));
    }
    chamber_subspaces(sp, hb).iter().map(|c| g.find_subspace(c).ok_or(Error::NotAFlag)).collect()
}

/// Hyperbolic basis of `V` adapted to a flag of subspaces sorted by dimension.
pub fn flag_basis(sp: &SymplecticSpace, flag: &[Subspace]) -> Result<HyperbolicBasis> {
    let mut hb = HyperbolicBasis::empty();
    for u in flag.iter().chain(std::iter::once(&sp.whole())) {
        hb = extend_hyperbolic_basis(sp, &hb, u)?;
    }
    Ok(hb)
}

pub fn basis_from_chamber(g: &Geometry, chamber: &[usize]) -> Result<HyperbolicBasis> {
    let sp = g.ambient().ok_or_else(|| Error::Precondition("geometry has no ambient space".into()))?;
    if !g.is_chamber(chamber) {
        return Err(Error::NotAFlag);
    }
    let mut ids = chamber.to_vec();
    ids.sort_unstable();
    let subs: Vec<Subspace> = ids.iter().map(|&i| g.subspace(i).cloned().ok_or(Error::NotAFlag)).collect::<Result<_>>()?;
    flag_basis(sp, &subs)
}
