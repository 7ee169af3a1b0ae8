//! The degree two cover of the exceptional residue `Pi(p, H)` at `n = 6`, `q = 2`.

use crate::bitset::BitSet;
use crate::geometry::{Geometry, GeometryKind, Object, ObjectId, ObjectLabel};
use crate::homotopy::{decide_group_order, pi1_presentation, GroupOrder};
use crate::linalg::{PointIndex, Subspace, Vector};
use crate::symplectic::SymplecticSpace;
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write;

/// A point of the cover with its image under `psi` and its sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverPoint {
    pub vector: Vector,
    pub image: Vector,
    pub plus: bool,
}

/// `X = X0 ⊎ X1` on the point shadow of a base object (base point ids).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignPartition {
    pub object: ObjectId,
    pub x0: Vec<ObjectId>,
    pub x1: Vec<ObjectId>,
}

impl SignPartition {
    /// The unordered pair `{Y ∩ X0, Y ∩ X1}` without empty parts.
    fn restricted(&self, y: &[ObjectId]) -> Vec<Vec<ObjectId>> {
        let mut parts: Vec<Vec<ObjectId>> = [&self.x0, &self.x1]
            .iter()
            .map(|s| s.iter().copied().filter(|x| y.contains(x)).collect::<Vec<_>>())
            .filter(|s| !s.is_empty())
            .collect();
        parts.sort();
        parts
    }
}

/// The cover `Pi-bar(p)` with its covering map.
#[derive(Clone, Debug)]
pub struct Cover {
    pub base: Geometry,
    pub geometry: Geometry,
    /// `psi[x]` is the base object under lifted object `x`.
    pub psi: Vec<ObjectId>,
    /// `lifts[X] = [X-, X+]`.
    pub lifts: Vec<[ObjectId; 2]>,
    pub partitions: Vec<SignPartition>,
    pub points: Vec<CoverPoint>,
    shadows: Vec<BitSet>,
}

fn pi_data(base: &Geometry) -> Result<(&SymplecticSpace, &Subspace, &Subspace)> {
    match base.kind() {
        GeometryKind::Pi { p, h } => Ok((base.ambient().unwrap(), p, h)),
        _ => Err(Error::Precondition("expected a Pi(p, H) geometry".into())),
    }
}

/// Points `q` with `pq` nondegenerate, with `psi(q) = <p, q> ∩ H`.
pub fn cover_points(sp: &SymplecticSpace, p: &Subspace, h: &Subspace) -> Result<Vec<CoverPoint>> {
    if sp.p() != 2 {
        return Err(Error::Precondition("the double cover is defined over GF(2)".into()));
    }
    let pv = &p.basis()[0];
    let idx = PointIndex::new(sp.field(), sp.dim());
    let mut out = Vec::new();
    for k in 0..idx.len() {
        let q = idx.point(k);
        if sp.form(pv, q) == 0 {
            continue;
        }
        let image = sp.span(&[pv.clone(), q.clone()]).intersect(h)?;
        if image.dim() != 1 {
            return Err(Error::CoverDefect("line pq does not meet H in a point".into()));
        }
        out.push(CoverPoint { vector: q.clone(), image: image.basis()[0].clone(), plus: !h.contains_vector(q) });
    }
    Ok(out)
}

fn point_id(base: &Geometry, v: &[u8]) -> Result<ObjectId> {
    let sp = base.ambient().unwrap();
    base.find_subspace(&sp.span(&[v.to_vec()])).ok_or_else(|| Error::CoverDefect("missing base point".into()))
}

fn shadow_points(base: &Geometry, x: ObjectId) -> Vec<ObjectId> {
    if base.type_index(x) == 0 {
        vec![x]
    } else {
        base.neighbors(x).intersection(base.type_mask(0)).iter().collect()
    }
}

/// Lines of a 4-space through `r = Rad(X ∩ p^perp)` that meet `H - p^perp`,
/// each as its two base points, in subspace order.
fn lines_through_r(base: &Geometry, x: ObjectId) -> Result<(Vector, Vec<[ObjectId; 2]>)> {
    let (sp, p, _) = pi_data(base)?;
    let u = base.subspace(x).unwrap();
    let rad = sp.radical(&u.intersect(&sp.perp(p)?)?)?;
    if rad.dim() != 1 {
        return Err(Error::CoverDefect("Rad(X ∩ p^perp) is not a point".into()));
    }
    let r = rad.basis()[0].clone();
    let mut lines: BTreeMap<Subspace, Vec<ObjectId>> = BTreeMap::new();
    for y in shadow_points(base, x) {
        let yv = &base.subspace(y).unwrap().basis()[0];
        lines.entry(sp.span(&[r.clone(), yv.clone()])).or_default().push(y);
    }
    let out: Vec<[ObjectId; 2]> = lines
        .into_values()
        .map(|mut v| {
            v.sort_unstable();
            if v.len() == 2 {
                Ok([v[0], v[1]])
            } else {
                Err(Error::CoverDefect("line through r without two base points".into()))
            }
        })
        .collect::<Result<_>>()?;
    Ok((r, out))
}

/// Nondegenerate 4-space with `p_1` the point `choice` of line `line`.
fn four_space_partition(base: &Geometry, x: ObjectId, line: usize, choice: usize) -> Result<(Vec<ObjectId>, Vec<ObjectId>)> {
    let sp = base.ambient().unwrap();
    let (_, lines) = lines_through_r(base, x)?;
    let vec_of = |y: ObjectId| base.subspace(y).unwrap().basis()[0].clone();
    let p1 = lines[line][choice];
    let (mut x0, mut x1) = (Vec::new(), Vec::new());
    for (i, l) in lines.iter().enumerate() {
        let (pi, qi) = if i == line {
            (p1, l[1 - choice])
        } else if sp.form(&vec_of(p1), &vec_of(l[0])) == 0 {
            (l[1], l[0])
        } else {
            (l[0], l[1])
        };
        if i != line && sp.form(&vec_of(p1), &vec_of(qi)) != 0 {
            return Err(Error::CoverDefect("p1^perp misses a line through r".into()));
        }
        x0.push(pi);
        x1.push(qi);
    }
    Ok((x0, x1))
}

/// Sign partition of a base object of `Pi(p, H)` over GF(2).
pub fn sign_partition(base: &Geometry, x: ObjectId) -> Result<SignPartition> {
    let (sp, _, _) = pi_data(base)?;
    let u = base.subspace(x).unwrap();
    let pts = shadow_points(base, x);
    let (mut x0, mut x1): (Vec<ObjectId>, Vec<ObjectId>) = match u.dim() {
        1 => (pts.clone(), Vec::new()),
        2 if sp.radical(u)?.is_zero() => (pts.clone(), Vec::new()),
        // Isotropic line: the smaller point goes to X0.
        2 => (vec![pts[0]], vec![pts[1]]),
        3 => {
            let r = point_id(base, &sp.radical(u)?.basis()[0])?;
            (vec![r], pts.iter().copied().filter(|&y| y != r).collect())
        }
        4 => {
            let rad = sp.radical(u)?;
            if rad.is_zero() {
                four_space_partition(base, x, 0, 0)?
            } else {
                let (a, b): (Vec<ObjectId>, Vec<ObjectId>) = pts.iter().partition(|&&y| rad.contains_vector(&base.subspace(y).unwrap().basis()[0]));
                (a, b)
            }
        }
        d => return Err(Error::Precondition(format!("no sign partition for dimension {d}"))),
    };
    x0.sort_unstable();
    x1.sort_unstable();
    Ok(SignPartition { object: x, x0, x1 })
}

/// Lifts of every base object, incident when their point shadows nest and
/// their images are incident.
pub fn build_cover(base: &Geometry) -> Result<Cover> {
    let (sp, p, h) = pi_data(base)?;
    if sp.p() != 2 || sp.is_degenerate() {
        return Err(Error::Precondition("the double cover needs a nondegenerate space over GF(2)".into()));
    }
    let points = cover_points(sp, p, h)?;
    let npts = base.type_mask(0).count();
    if base.ids_of_type(0) != (0..npts).collect::<Vec<_>>() {
        return Err(Error::CoverDefect("base points are not the first objects".into()));
    }
    let mut partitions = Vec::with_capacity(base.len());
    let mut objects = Vec::with_capacity(2 * base.len());
    let mut shadows = Vec::with_capacity(2 * base.len());
    let mut psi = Vec::with_capacity(2 * base.len());
    let mut lifts = Vec::with_capacity(base.len());
    for x in 0..base.len() {
        let part = sign_partition(base, x)?;
        for plus in [false, true] {
            let mut s = BitSet::new(2 * npts);
            for &y in &part.x0 {
                s.insert(2 * y + plus as usize);
            }
            for &y in &part.x1 {
                s.insert(2 * y + !plus as usize);
            }
            shadows.push(s);
            objects.push(Object { ty: base.type_index(x), label: ObjectLabel::Lift { base: x, plus } });
            psi.push(x);
        }
        lifts.push([2 * x, 2 * x + 1]);
        partitions.push(part);
    }
    let inc = |a: ObjectId, b: ObjectId| {
        (shadows[a].is_subset(&shadows[b]) || shadows[b].is_subset(&shadows[a])) && base.incident(psi[a], psi[b])
    };
    let geometry = Geometry::from_incidence(GeometryKind::Cover, Some(sp.clone()), base.types().to_vec(), objects, inc);
    Ok(Cover { base: base.clone(), geometry, psi, lifts, partitions, points, shadows })
}

impl Cover {
    /// Point shadow of a lifted object; bit `2y + 1` is `y+`, bit `2y` is `y-`.
    pub fn shadow(&self, x: ObjectId) -> &BitSet {
        &self.shadows[x]
    }

    /// The lifted point `y±` of base point `y`.
    pub fn lifted_point(&self, y: ObjectId, plus: bool) -> ObjectId {
        self.lifts[y][plus as usize]
    }

    /// DOT graph of the cover with dashed edges joining the two lifts of each object.
    pub fn to_dot(&self) -> String {
        let mut s = crate::geometry::to_dot(&self.geometry);
        s.truncate(s.len() - 2);
        s.push('\n');
        for [a, b] in &self.lifts {
            writeln!(s, "  n{a} -- n{b} [style=dashed, color=gray, constraint=false];").unwrap();
        }
        s.push_str("}\n");
        s
    }
}

/// Unique lift of a walk in the base starting at the lifted object `start`.
pub fn lift_path(cover: &Cover, walk: &[ObjectId], start: ObjectId) -> Result<Vec<ObjectId>> {
    if walk.first() != Some(&cover.psi[start]) {
        return Err(Error::Precondition("walk does not start under the chosen lift".into()));
    }
    let mut out = vec![start];
    for &y in &walk[1..] {
        let cur = *out.last().unwrap();
        let cand: Vec<ObjectId> = cover.lifts[y].iter().copied().filter(|&z| cover.geometry.incident(cur, z)).collect();
        if cand.len() != 1 {
            return Err(Error::CoverDefect(format!("{} lifts of object {y} next to {cur}", cand.len())));
        }
        out.push(cand[0]);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberAction {
    pub base_point: ObjectId,
    pub generators: usize,
    pub swapping_generators: usize,
    pub order: usize,
}

/// Action of the fundamental group of the base at `x` on the fiber over `x`,
/// read off from lifts of the presentation's generator walks.
pub fn fiber_action(cover: &Cover, x: ObjectId) -> Result<FiberAction> {
    let pr = pi1_presentation(&cover.base, x)?;
    let start = cover.lifts[x][0];
    let mut swapping = 0;
    for k in 0..pr.presentation.generators {
        let walk = pr.generator_walk(k).expect("every generator has a walk");
        if *lift_path(cover, &walk, start)?.last().unwrap() != start {
            swapping += 1;
        }
    }
    Ok(FiberAction {
        base_point: x,
        generators: pr.presentation.generators,
        swapping_generators: swapping,
        order: if swapping > 0 { 2 } else { 1 },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceProfile {
    /// Number of unordered point pairs at each distance.
    pub histogram: BTreeMap<u32, usize>,
    /// Pairs at distance at least three, as cover point ids.
    pub far_pairs: Vec<(ObjectId, ObjectId)>,
}

pub fn distance_profile(cover: &Cover) -> DistanceProfile {
    let d = cover.geometry.point_distances(0, 1);
    let mut histogram = BTreeMap::new();
    let mut far_pairs = Vec::new();
    for (i, row) in d.iter().enumerate() {
        for (j, &x) in row.iter().enumerate().skip(i + 1) {
            *histogram.entry(x).or_insert(0) += 1;
            if x >= 3 {
                far_pairs.push((i, j));
            }
        }
    }
    DistanceProfile { histogram, far_pairs }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub n: usize,
    pub p: u8,
    /// Only `n = 6` is the exceptional instance the checks certify.
    pub certified: bool,
    pub base_counts: Vec<(usize, usize)>,
    pub cover_counts: Vec<(usize, usize)>,
    pub cover_points: usize,
    pub psi_two_to_one: bool,
    pub two_to_one_on_objects: bool,
    pub incidence_rule: bool,
    pub residue_isomorphisms: bool,
    pub residues_checked: usize,
    pub is_two_cover: bool,
    pub transversal: bool,
    pub connected: bool,
    pub partition_coherent: bool,
    pub four_space_labelling: bool,
    pub partition_choice_invariant: bool,
    pub distance: DistanceProfile,
    /// Points over distinct base points are at distance at most two.
    pub distinct_fibers_within_two: bool,
    /// `Q^e` is collinear to `q^-e` for every base point `q != Q`, `Q = Rad(H)`.
    pub radical_cross_collinear: bool,
    pub radical_pair_distance: Option<u32>,
    /// The pair `Q+, Q-` is the only pair beyond distance two. Recorded, not
    /// required: every fiber pair of a 2-cover is at distance at least three.
    pub only_radical_pair_far: bool,
    pub pi1: GroupOrder,
    pub fiber: FiberAction,
}

impl CoverReport {
    pub fn all_hold(&self) -> bool {
        self.psi_two_to_one
            && self.two_to_one_on_objects
            && self.incidence_rule
            && self.residue_isomorphisms
            && self.is_two_cover
            && self.transversal
            && self.connected
            && self.partition_coherent
            && self.four_space_labelling
            && self.partition_choice_invariant
            && self.distinct_fibers_within_two
            && self.radical_cross_collinear
            && self.radical_pair_distance == Some(3)
            && self.pi1 == GroupOrder::Trivial
            && self.fiber.order == 2
    }
}

fn check_two_to_one(cover: &Cover) -> bool {
    let npts = cover.base.type_mask(0).count();
    (0..cover.base.len()).all(|x| {
        let [a, b] = cover.lifts[x];
        let mut want = BitSet::new(2 * npts);
        for y in shadow_points(&cover.base, x) {
            want.insert(2 * y);
            want.insert(2 * y + 1);
        }
        let mut both = cover.shadows[a].clone();
        both.union_with(&cover.shadows[b]);
        cover.psi[a] == x && cover.psi[b] == x && cover.shadows[a].is_disjoint(&cover.shadows[b]) && both == want
    })
}

fn check_incidence_rule(cover: &Cover) -> bool {
    let g = &cover.geometry;
    (0..g.len()).all(|a| {
        (a + 1..g.len()).filter(|&b| g.type_index(a) != g.type_index(b)).all(|b| {
            let rule = cover.base.incident(cover.psi[a], cover.psi[b]) && !cover.shadows[a].is_disjoint(&cover.shadows[b]);
            rule == g.incident(a, b)
        })
    })
}

/// `Psi` restricted to the residue of every nonempty flag is a bijection onto
/// the residue of the image flag that preserves incidence both ways.
fn check_residues(cover: &Cover) -> (bool, usize) {
    let g = &cover.geometry;
    let mut count = 0;
    let mut ok = true;
    let mut stack: Vec<(Vec<ObjectId>, BitSet)> = (0..g.len()).map(|x| (vec![x], g.neighbors(x).clone())).collect();
    while let Some((flag, common)) = stack.pop() {
        count += 1;
        let image: Vec<ObjectId> = flag.iter().map(|&x| cover.psi[x]).collect();
        let res = g.residue_set(&flag);
        let base_res = cover.base.residue_set(&image);
        let res_ids: Vec<ObjectId> = res.iter().collect();
        let mut hit = BitSet::new(cover.base.len());
        for &x in &res_ids {
            hit.insert(cover.psi[x]);
        }
        ok &= res_ids.len() == base_res.count() && hit == base_res;
        for (i, &a) in res_ids.iter().enumerate() {
            for &b in &res_ids[i + 1..] {
                ok &= g.incident(a, b) == cover.base.incident(cover.psi[a], cover.psi[b]);
            }
        }
        let last = *flag.last().unwrap();
        for y in common.iter().filter(|&y| y > last) {
            let mut f = flag.clone();
            f.push(y);
            stack.push((f, common.intersection(g.neighbors(y))));
        }
    }
    (ok, count)
}

fn check_coherence(cover: &Cover) -> bool {
    let b = &cover.base;
    (0..b.len()).all(|x| {
        b.neighbors(x).iter().filter(|&y| b.type_index(y) < b.type_index(x) && b.type_index(y) >= 1).all(|y| {
            let mut own = vec![cover.partitions[y].x0.clone(), cover.partitions[y].x1.clone()];
            own.retain(|s| !s.is_empty());
            own.sort();
            cover.partitions[x].restricted(&shadow_points(b, y)) == own
        })
    })
}

fn nondegenerate_four_spaces(base: &Geometry) -> Result<Vec<ObjectId>> {
    let sp = base.ambient().unwrap();
    let mut out = Vec::new();
    for x in 0..base.len() {
        let u = base.subspace(x).unwrap();
        if u.dim() == 4 && sp.radical(u)?.is_zero() {
            out.push(x);
        }
    }
    Ok(out)
}

fn check_labelling(base: &Geometry) -> Result<bool> {
    let sp = base.ambient().unwrap();
    let v = |y: ObjectId| base.subspace(y).unwrap().basis()[0].clone();
    for x in nondegenerate_four_spaces(base)? {
        let (ps, qs) = four_space_partition(base, x, 0, 0)?;
        for i in 0..4 {
            for j in 0..4 {
                if i != j
                    && (sp.form(&v(ps[i]), &v(qs[j])) != 0
                        || sp.form(&v(qs[i]), &v(qs[j])) == 0
                        || sp.form(&v(ps[i]), &v(ps[j])) == 0)
                {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Every choice of `p_1` gives the same unordered partition.
fn check_choice_invariance(base: &Geometry) -> Result<bool> {
    for x in nondegenerate_four_spaces(base)? {
        let canon = |(a, b): (Vec<ObjectId>, Vec<ObjectId>)| {
            let (mut a, mut b) = (a, b);
            a.sort_unstable();
            b.sort_unstable();
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        };
        let first = canon(four_space_partition(base, x, 0, 0)?);
        for line in 0..4 {
            for choice in 0..2 {
                if canon(four_space_partition(base, x, line, choice)?) != first {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// All cover checks, the distance profile, the fundamental group of the
/// cover and the fiber action over `Rad(H)`.
pub fn verify_cover(cover: &Cover, coset_cap: usize) -> Result<CoverReport> {
    let (sp, _, h) = pi_data(&cover.base)?;
    let npts = cover.base.type_mask(0).count();
    let mut fibers = vec![0usize; npts];
    for q in &cover.points {
        fibers[point_id(&cover.base, &q.image)?] += 1;
    }
    let psi_two_to_one = cover.points.len() == 2 * npts && fibers.iter().all(|&c| c == 2);
    let two_to_one_on_objects = check_two_to_one(cover);
    let (residue_isomorphisms, residues_checked) = check_residues(cover);
    let distance = distance_profile(cover);
    let rad_h = sp.radical(h)?;
    let q_rad = if rad_h.dim() == 1 { cover.base.find_subspace(&rad_h) } else { None };
    let d = cover.geometry.point_distances(0, 1);
    let distinct_fibers_within_two = (0..2 * npts).all(|a| (0..2 * npts).all(|b| a / 2 == b / 2 || d[a][b] <= 2));
    let (radical_cross_collinear, radical_pair_distance, only_radical_pair_far) = match q_rad {
        Some(q) => (
            (0..npts).filter(|&y| y != q).all(|y| {
                d[cover.lifted_point(q, true)][cover.lifted_point(y, false)] == 1
                    && d[cover.lifted_point(q, false)][cover.lifted_point(y, true)] == 1
            }),
            Some(d[cover.lifted_point(q, false)][cover.lifted_point(q, true)]),
            distance.far_pairs == vec![(cover.lifted_point(q, false), cover.lifted_point(q, true))],
        ),
        None => (false, None, false),
    };
    let pi1 = decide_group_order(&pi1_presentation(&cover.geometry, 0)?.presentation, coset_cap);
    let fiber = fiber_action(cover, q_rad.unwrap_or(0))?;
    Ok(CoverReport {
        n: sp.dim(),
        p: sp.p(),
        certified: sp.dim() == 6,
        base_counts: cover.base.type_counts(),
        cover_counts: cover.geometry.type_counts(),
        cover_points: cover.points.len(),
        psi_two_to_one,
        two_to_one_on_objects,
        incidence_rule: check_incidence_rule(cover),
        residue_isomorphisms,
        residues_checked,
        is_two_cover: two_to_one_on_objects && residue_isomorphisms,
        transversal: cover.geometry.is_transversal(),
        connected: cover.geometry.is_connected(),
        partition_coherent: check_coherence(cover),
        four_space_labelling: check_labelling(&cover.base)?,
        partition_choice_invariant: check_choice_invariance(&cover.base)?,
        distance,
        distinct_fibers_within_two,
        radical_cross_collinear,
        radical_pair_distance,
        only_radical_pair_far,
        pi1,
        fiber,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_pi, standard_pi_pair};
    use crate::homotopy::DEFAULT_COSET_CAP;

    fn cover62() -> Cover {
        let sp = SymplecticSpace::standard(6, 2).unwrap();
        let (p, h) = standard_pi_pair(&sp);
        build_cover(&build_pi(&sp, &p, &h).unwrap()).unwrap()
    }

    #[test]
    fn exceptional_cover_checks() {
        let c = cover62();
        let rep = verify_cover(&c, DEFAULT_COSET_CAP).unwrap();
        assert_eq!(rep.cover_points, 32);
        assert!(rep.all_hold(), "{rep:?}");
        assert_eq!(rep.distance.histogram.get(&3), Some(&16));
        assert!(!rep.only_radical_pair_far);
        assert!(rep.distance.far_pairs.iter().all(|&(a, b)| a / 2 == b / 2));
    }

    #[test]
    fn partitions_of_small_objects() {
        let c = cover62();
        let sp = c.base.ambient().unwrap().clone();
        for x in 0..c.base.len() {
            let u = c.base.subspace(x).unwrap();
            let part = &c.partitions[x];
            match (u.dim(), sp.radical(u).unwrap().dim()) {
                (2, 0) => assert!(part.x1.is_empty() && part.x0.len() == 2),
                (2, _) => assert!(part.x0.len() == 1 && part.x1.len() == 1),
                (3, _) => assert!(part.x0.len() == 1 && part.x1.len() == 3),
                (4, 0) => assert!(part.x0.len() == 4 && part.x1.len() == 4),
                (4, _) => assert!(part.x0.len() == 2 && part.x1.len() == 6),
                _ => {}
            }
        }
    }

    #[test]
    fn triangle_lifts_closed() {
        let c = cover62();
        let b = &c.base;
        let x = 0;
        let l = b.neighbors(x).intersection(b.type_mask(1)).first().unwrap();
        let pl = b.neighbors(x).intersection(b.neighbors(l)).intersection(b.type_mask(2)).first().unwrap();
        let lift = lift_path(&c, &[x, l, pl, x], c.lifts[x][1]).unwrap();
        assert_eq!(lift.last(), Some(&c.lifts[x][1]));
    }
}
