//! The residue model `Pi(p, H)` living inside a complement `H` of a point `p`.

use super::{Geometry, GeometryKind, Object, ObjectLabel};
use crate::bitset::BitSet;
use crate::linalg::{all_subspaces, PointIndex, Subspace};
use crate::symplectic::SymplecticSpace;
use crate::{Error, Result};
use serde::Serialize;

/// The standard choice `p = <e1>`, `H = <f1, e2, f2, ...>`.
pub fn standard_pi_pair(sp: &SymplecticSpace) -> (Subspace, Subspace) {
    let p = sp.span(&[sp.h(1)]);
    let h = sp.span(&(2..=sp.dim()).map(|k| sp.h(k)).collect::<Vec<_>>());
    (p, h)
}

fn subspaces_of(sp: &SymplecticSpace, h: &Subspace, k: usize) -> Vec<Subspace> {
    let mut out: Vec<Subspace> = all_subspaces(sp.field(), h.dim(), k)
        .into_iter()
        .map(|c| sp.span(&c.basis().iter().map(|row| h.combine(row)).collect::<Vec<_>>()))
        .collect();
    out.sort();
    out
}

fn validate(sp: &SymplecticSpace, p: &Subspace, h: &Subspace) -> Result<()> {
    if p.dim() != 1 {
        return Err(Error::Precondition("p must be a point".into()));
    }
    if !p.intersect(sp.ambient_radical())?.is_zero() {
        return Err(Error::Precondition("p meets Rad(V)".into()));
    }
    if h.dim() + 1 != sp.dim() || !h.intersect(p)?.is_zero() {
        return Err(Error::Precondition("H is not a complement of p".into()));
    }
    if !h.contains(sp.ambient_radical())? {
        return Err(Error::Precondition("H does not contain Rad(V)".into()));
    }
    Ok(())
}

/// Membership rule for `Pi(p, H)`. Besides the radical conditions, `U` must
/// not lie in `p^perp`: otherwise `<p, U>` has `p` in its radical and is not
/// incident to `p`.
fn is_pi_object(sp: &SymplecticSpace, u: &Subspace, p_perp: &Subspace) -> Result<bool> {
    if u.contains(sp.ambient_radical())? && !sp.ambient_radical().is_zero() {
        return Ok(false);
    }
    if p_perp.contains(u)? {
        return Ok(false);
    }
    let rad = sp.radical(u)?;
    if rad.dim() > 2 {
        return Ok(false);
    }
    Ok(rad.is_zero() || !p_perp.contains(&rad)?)
}

pub fn build_pi(sp: &SymplecticSpace, p: &Subspace, h: &Subspace) -> Result<Geometry> {
    validate(sp, p, h)?;
    let n = sp.dim();
    let points = PointIndex::new(sp.field(), n);
    let p_perp = sp.perp(p)?;
    let mut objects = Vec::new();
    let mut shadows: Vec<BitSet> = Vec::new();
    let mut guard: Vec<Option<BitSet>> = Vec::new();
    for k in 1..h.dim() {
        for u in subspaces_of(sp, h, k) {
            if !is_pi_object(sp, &u, &p_perp)? {
                continue;
            }
            shadows.push(points.shadow(&u));
            guard.push(if k % 2 == 0 {
                Some(points.shadow(&sp.radical(&u.intersect(&p_perp)?)?))
            } else {
                None
            });
            objects.push(Object { ty: k - 1, label: ObjectLabel::Subspace(u) });
        }
    }
    let types: Vec<usize> = (1..h.dim()).collect();
    let inc = |i: usize, j: usize| {
        shadows[i].is_subset(&shadows[j]) && guard[j].as_ref().map_or(true, |r| shadows[i].is_disjoint(r))
    };
    let kind = GeometryKind::Pi { p: p.clone(), h: h.clone() };
    Ok(Geometry::from_incidence(kind, Some(sp.clone()), types, objects, inc))
}

/// Status of the side condition "Rad(H), if nontrivial, is not in p^perp".
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PiRadicalCheck {
    pub radical_dim: usize,
    pub radical_outside_p_perp: bool,
    pub holds: bool,
}

impl PiRadicalCheck {
    pub fn compute(sp: &SymplecticSpace, p: &Subspace, h: &Subspace) -> Result<Self> {
        let rad = sp.radical(h)?;
        let outside = !sp.perp(p)?.contains(&rad)?;
        Ok(PiRadicalCheck { radical_dim: rad.dim(), radical_outside_p_perp: outside, holds: rad.is_zero() || outside })
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PhiReport {
    pub residue_objects: usize,
    pub pi_objects: usize,
    pub bijective: bool,
    pub type_preserving: bool,
    pub preserves_incidence: bool,
    pub reflects_incidence: bool,
    pub failures: usize,
}

impl PhiReport {
    pub fn ok(&self) -> bool {
        self.bijective && self.type_preserving && self.preserves_incidence && self.reflects_incidence
    }
}

/// Compare the residue of `p` in `gamma` with `pi` under `X -> X meet H`.
pub fn check_phi(gamma: &Geometry, pi: &Geometry) -> Result<PhiReport> {
    let GeometryKind::Pi { p, h } = pi.kind() else {
        return Err(Error::Precondition("second geometry is not a Pi geometry".into()));
    };
    let pid = gamma.find_subspace(p).ok_or_else(|| Error::Precondition("p is not an object of gamma".into()))?;
    let res = gamma.residue(&[pid])?;
    let mut image = Vec::with_capacity(res.len());
    let mut failures = 0;
    let mut type_preserving = res.rank() == pi.rank();
    for id in 0..res.len() {
        let x = res.subspace(id).expect("residue of gamma holds subspaces");
        let y = x.intersect(h)?;
        let found = pi.find_subspace(&y);
        match found {
            Some(j) if pi.type_index(j) == res.type_index(id) => {}
            Some(_) => type_preserving = false,
            None => failures += 1,
        }
        image.push(found);
    }
    let mut hit = vec![false; pi.len()];
    let mut injective = true;
    for j in image.iter().flatten() {
        if std::mem::replace(&mut hit[*j], true) {
            injective = false;
        }
    }
    let bijective = failures == 0 && injective && hit.iter().all(|&b| b);
    let mut preserves = true;
    let mut reflects = true;
    for a in 0..res.len() {
        for b in a + 1..res.len() {
            let (Some(x), Some(y)) = (image[a], image[b]) else { continue };
            let r = res.incident(a, b);
            let q = pi.incident(x, y);
            if r && !q {
                preserves = false;
                failures += 1;
            }
            if q && !r {
                reflects = false;
                failures += 1;
            }
        }
    }
    Ok(PhiReport {
        residue_objects: res.len(),
        pi_objects: pi.len(),
        bijective,
        type_preserving,
        preserves_incidence: preserves,
        reflects_incidence: reflects,
        failures,
    })
}

/// Which hyperplanes of `H` are objects of `Pi(p, H)`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HyperplaneReport {
    pub hyperplanes: usize,
    pub members: usize,
    /// Hyperplanes where membership differs from the predicted rule.
    pub mismatches: Vec<String>,
    /// `H meet p^perp`, listed separately because it is never an object.
    pub h_meet_p_perp: String,
}

/// Predicted rule: for even `n` every hyperplane of `H` is an object, for odd
/// `n` exactly those not containing `Rad(V)`.
pub fn hyperplane_check(pi: &Geometry) -> Result<HyperplaneReport> {
    let GeometryKind::Pi { p, h } = pi.kind() else {
        return Err(Error::Precondition("not a Pi geometry".into()));
    };
    let sp = pi.ambient().expect("Pi geometry has an ambient space");
    let hps = subspaces_of(sp, h, h.dim() - 1);
    let mut members = 0;
    let mut mismatches = Vec::new();
    for w in &hps {
        let member = pi.find_subspace(w).is_some();
        members += member as usize;
        let predicted = sp.dim() % 2 == 0 || !w.contains(sp.ambient_radical())?;
        if member != predicted {
            mismatches.push(w.encode());
        }
    }
    let hp = h.intersect(&sp.perp(p)?)?;
    Ok(HyperplaneReport { hyperplanes: hps.len(), members, mismatches, h_meet_p_perp: hp.encode() })
}
