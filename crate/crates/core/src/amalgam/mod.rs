//! Amalgams of finite matrix groups and their universal completions.

mod cayley;
mod coset;

pub use cayley::{cayley_words, group_presentation};
pub use coset::{todd_coxeter, CosetTable, EnumerationStats, Overflow};

use crate::groups::{slim_subgroup, FinGroup, SlimSpec};
use crate::homotopy::{generator_of, letter, Letter, Presentation, Word};
use crate::symplectic::SymplecticSpace;
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

pub const DEFAULT_MAX_COSETS: usize = 100_000;

#[derive(Clone, Debug)]
pub struct Member {
    pub label: String,
    pub group: FinGroup,
}

/// `map[a]` is the id in `sup` of element `a` of `sub`.
#[derive(Clone, Debug)]
pub struct Inclusion {
    pub sub: usize,
    pub sup: usize,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Amalgam {
    pub name: String,
    pub members: Vec<Member>,
    pub inclusions: Vec<Inclusion>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WellFormedness {
    pub inclusions: usize,
    pub nested_triples: usize,
    pub defect: Option<String>,
}

impl Amalgam {
    pub fn member(&self, label: &str) -> Option<usize> {
        self.members.iter().position(|m| m.label == label)
    }

    /// Inclusion maps induced by matrix equality between the given members.
    pub fn from_members(name: impl Into<String>, members: Vec<Member>, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut inclusions = Vec::new();
        for &(sub, sup) in pairs {
            let (a, b) = (&members[sub].group, &members[sup].group);
            let map = a
                .elements()
                .iter()
                .map(|m| b.index_of(m))
                .collect::<Option<Vec<usize>>>()
                .ok_or_else(|| Error::AmalgamDefect(format!("{} is not inside {}", members[sub].label, members[sup].label)))?;
            inclusions.push(Inclusion { sub, sup, map });
        }
        Ok(Amalgam { name: name.into(), members, inclusions })
    }

    /// Injectivity, exhaustive homomorphism check, and the composition law on
    /// every chain `K -> M -> L` with a direct inclusion `K -> L`.
    pub fn check(&self) -> WellFormedness {
        let defect = |s: String| WellFormedness { inclusions: self.inclusions.len(), nested_triples: 0, defect: Some(s) };
        for inc in &self.inclusions {
            let (a, b) = (&self.members[inc.sub], &self.members[inc.sup]);
            let name = format!("{} -> {}", a.label, b.label);
            if inc.map.len() != a.group.order() || inc.map.iter().any(|&x| x >= b.group.order()) {
                return defect(format!("{name}: map has the wrong shape"));
            }
            let mut seen = vec![false; b.group.order()];
            for &x in &inc.map {
                if std::mem::replace(&mut seen[x], true) {
                    return defect(format!("{name}: map is not injective"));
                }
            }
            for x in 0..a.group.order() {
                for y in 0..a.group.order() {
                    if inc.map[a.group.mul(x, y)] != b.group.mul(inc.map[x], inc.map[y]) {
                        return defect(format!("{name}: map is not a homomorphism"));
                    }
                }
            }
        }
        let mut triples = 0;
        for f in &self.inclusions {
            for g in self.inclusions.iter().filter(|g| g.sub == f.sup) {
                if let Some(h) = self.inclusions.iter().find(|h| h.sub == f.sub && h.sup == g.sup) {
                    triples += 1;
                    if (0..f.map.len()).any(|x| g.map[f.map[x]] != h.map[x]) {
                        return defect(format!(
                            "composition law fails for {} -> {} -> {}",
                            self.members[f.sub].label, self.members[f.sup].label, self.members[g.sup].label
                        ));
                    }
                }
            }
        }
        WellFormedness { inclusions: self.inclusions.len(), nested_triples: triples, defect: None }
    }

    /// Negative control: swap two entries of one inclusion map.
    pub fn with_corrupted_inclusion(&self, k: usize) -> Self {
        let mut a = self.clone();
        a.name.push_str(" (corrupted)");
        a.inclusions[k].map.swap(1, 2);
        a
    }

    /// Negative control: the same members with no identifications.
    pub fn without_inclusions(&self) -> Self {
        Amalgam { name: format!("{} (free product)", self.name), members: self.members.clone(), inclusions: Vec::new() }
    }

    /// Members that receive no inclusion; their generators are the
    /// generators of the completion.
    fn base_members(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&m| self.inclusions.iter().all(|i| i.sup != m)).collect()
    }
}

/// Rank one and rank two slim groups for `n = 2r` over GF(p), `p >= 3`.
pub fn build_slim_amalgam(sp: &SymplecticSpace) -> Result<Amalgam> {
    if sp.p() == 2 {
        return Err(Error::Precondition("the slim amalgam needs a field with more than two elements".into()));
    }
    if sp.is_degenerate() || sp.dim() < 4 || sp.dim() % 2 != 0 {
        return Err(Error::Precondition("the slim amalgam needs a nondegenerate space of even dimension at least 4".into()));
    }
    let r = sp.dim() / 2;
    let specs = SlimSpec::amalgam_members(r);
    let mut members = Vec::new();
    for s in &specs {
        members.push(Member { label: s.to_string(), group: slim_subgroup(*s, sp)? });
    }
    let pos = |s: SlimSpec| specs.iter().position(|&x| x == s).unwrap();
    let mut pairs = Vec::new();
    for (k, s) in specs.iter().enumerate() {
        match *s {
            SlimSpec::Sij(i, j) => pairs.extend([(pos(SlimSpec::S(i)), k), (pos(SlimSpec::S(j)), k)]),
            SlimSpec::Mij(i, j) => pairs.extend([(pos(SlimSpec::M(i)), k), (pos(SlimSpec::M(j)), k)]),
            SlimSpec::Qij(i, j) => pairs.extend([(pos(SlimSpec::M(i)), k), (pos(SlimSpec::S(j)), k)]),
            _ => {}
        }
    }
    Amalgam::from_members(format!("slim Sp{}({})", sp.dim(), sp.p()), members, &pairs)
}

/// Completion presentation plus, for each member, its generators as words
/// in the completion's generators.
#[derive(Clone, Debug)]
pub struct Completion {
    pub presentation: Presentation,
    pub member_generators: Vec<Vec<Word>>,
}

/// Generators are those of the base members. Every other member is presented
/// on the images of its base subgroups' generators, so the identifications
/// are built into the shared symbols.
pub fn completion_presentation(a: &Amalgam) -> Result<Completion> {
    if let Some(d) = a.check().defect {
        return Err(Error::AmalgamDefect(d));
    }
    let base = a.base_members();
    let mut symbols: BTreeMap<usize, Vec<Letter>> = BTreeMap::new();
    let mut next = 0usize;
    for &m in &base {
        let k = a.members[m].group.generator_ids().len();
        symbols.insert(m, (next..next + k).map(|g| letter(g, false)).collect());
        next += k;
    }
    let mut relators = Vec::new();
    let mut member_generators = vec![Vec::new(); a.members.len()];
    for (m, member) in a.members.iter().enumerate() {
        let (ids, syms): (Vec<usize>, Vec<Letter>) = if base.contains(&m) {
            (member.group.generator_ids().to_vec(), symbols[&m].clone())
        } else {
            let mut ids = Vec::new();
            let mut syms = Vec::new();
            for inc in a.inclusions.iter().filter(|i| i.sup == m && base.contains(&i.sub)) {
                for (&g, &s) in a.members[inc.sub].group.generator_ids().iter().zip(&symbols[&inc.sub]) {
                    ids.push(inc.map[g]);
                    syms.push(s);
                }
            }
            (ids, syms)
        };
        let pr = group_presentation(&member.group, &ids)
            .map_err(|_| Error::AmalgamDefect(format!("{} is not generated by its base subgroups", member.label)))?;
        let rename = |l: Letter| -> Letter {
            let s = syms[generator_of(l)];
            if l > 0 {
                s
            } else {
                -s
            }
        };
        relators.extend(pr.relators.iter().map(|r| r.iter().map(|&l| rename(l)).collect::<Word>()));
        member_generators[m] = syms.iter().map(|&s| vec![s]).collect();
    }
    Ok(Completion { presentation: Presentation::new(next, relators)?, member_generators })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Isomorphic,
    /// Enumeration hit the coset cap.
    Inconclusive,
    /// The index bound exceeds the target order.
    BoundExceeded,
    NoSurjection,
    AmalgamDefect,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletionCertificate {
    pub amalgam: String,
    pub members: BTreeMap<String, usize>,
    pub subgroup: String,
    pub index: Option<usize>,
    pub bound: Option<u128>,
    pub target_order: usize,
    pub surjection: bool,
    pub verdict: Verdict,
    pub cap: usize,
    pub defect: Option<String>,
    pub presentation_generators: usize,
    pub presentation_relators: usize,
}

/// Index of the image of `subgroup` in the completion, or `None` when the
/// enumeration overflows `max_cosets`. Needs no target group.
pub fn completion_index(a: &Amalgam, subgroup: &str, max_cosets: usize) -> Result<Option<usize>> {
    let sub = a.member(subgroup).ok_or_else(|| Error::InvalidIndices(format!("no member {subgroup}")))?;
    let completion = completion_presentation(a)?;
    Ok(todd_coxeter(&completion.presentation, &completion.member_generators[sub], max_cosets).ok().map(|t| t.index()))
}

/// Upper bound on the completion from the index of the image of `subgroup`,
/// plus a surjection witness from generation inside `target`.
pub fn certify_completion(a: &Amalgam, target: &FinGroup, subgroup: &str, max_cosets: usize) -> Result<CompletionCertificate> {
    let sub = a.member(subgroup).ok_or_else(|| Error::InvalidIndices(format!("no member {subgroup}")))?;
    let mut cert = CompletionCertificate {
        amalgam: a.name.clone(),
        members: a.members.iter().map(|m| (m.label.clone(), m.group.order())).collect(),
        subgroup: subgroup.into(),
        index: None,
        bound: None,
        target_order: target.order(),
        surjection: false,
        verdict: Verdict::AmalgamDefect,
        cap: max_cosets,
        defect: None,
        presentation_generators: 0,
        presentation_relators: 0,
    };
    let completion = match completion_presentation(a) {
        Ok(c) => c,
        Err(Error::AmalgamDefect(d)) => {
            cert.defect = Some(d);
            return Ok(cert);
        }
        Err(e) => return Err(e),
    };
    cert.presentation_generators = completion.presentation.generators;
    cert.presentation_relators = completion.presentation.relators.len();
    let in_target = a.members.iter().all(|m| m.group.elements().iter().all(|x| target.contains(x)));
    let gens: Vec<_> = a.members.iter().flat_map(|m| m.group.generators()).collect();
    cert.surjection =
        in_target && FinGroup::generate(target.field(), target.degree(), &gens, target.order()).map_or(false, |g| g.order() == target.order());
    if !cert.surjection {
        cert.verdict = Verdict::NoSurjection;
        return Ok(cert);
    }
    match todd_coxeter(&completion.presentation, &completion.member_generators[sub], max_cosets) {
        Err(_) => cert.verdict = Verdict::Inconclusive,
        Ok(t) => {
            let bound = t.index() as u128 * a.members[sub].group.order() as u128;
            cert.index = Some(t.index());
            cert.bound = Some(bound);
            cert.verdict = if bound <= target.order() as u128 { Verdict::Isomorphic } else { Verdict::BoundExceeded };
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::sp_group;

    #[test]
    fn sl2_3_presentation() {
        let sp = SymplecticSpace::standard(2, 3).unwrap();
        let g = sp_group(&sp, 1000).unwrap();
        let pr = group_presentation(&g, g.generator_ids()).unwrap();
        assert_eq!(todd_coxeter(&pr, &[], 10_000).unwrap().index(), 24);
    }

    #[test]
    fn rejects_p2() {
        let sp = SymplecticSpace::standard(4, 2).unwrap();
        assert!(matches!(build_slim_amalgam(&sp), Err(Error::Precondition(_))));
    }

    #[test]
    fn sp4_3_certificate() {
        let sp = SymplecticSpace::standard(4, 3).unwrap();
        let a = build_slim_amalgam(&sp).unwrap();
        let g = sp_group(&sp, 100_000).unwrap();
        let c = certify_completion(&a, &g, "S12", DEFAULT_MAX_COSETS).unwrap();
        assert_eq!(c.verdict, Verdict::Isomorphic);
        assert_eq!(c.index, Some(90));
        let bad = certify_completion(&a.with_corrupted_inclusion(0), &g, "S12", DEFAULT_MAX_COSETS).unwrap();
        assert_eq!(bad.verdict, Verdict::AmalgamDefect);
        let free = certify_completion(&a.without_inclusions(), &g, "S12", 5_000).unwrap();
        assert_eq!(free.verdict, Verdict::Inconclusive);
    }
}
