//! Exhaustive structural checks on finite pre-geometries.

use super::{Geometry, ObjectId};
use crate::bitset::BitSet;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::VecDeque;

/// Counts gathered in one pass over all nonempty flags.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct FlagStats {
    pub flags: usize,
    pub chambers: usize,
    /// Maximal flags that miss some type.
    pub maximal_non_chambers: usize,
    /// Flags of corank at least two whose residue is disconnected (the empty
    /// flag included).
    pub disconnected_residues: usize,
}

impl FlagStats {
    fn merge(mut self, o: FlagStats) -> FlagStats {
        self.flags += o.flags;
        self.chambers += o.chambers;
        self.maximal_non_chambers += o.maximal_non_chambers;
        self.disconnected_residues += o.disconnected_residues;
        self
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ShadowReport {
    pub points: usize,
    pub lines: usize,
    /// `None` when the collinearity graph is disconnected or has no points.
    pub diameter: Option<usize>,
}

impl Geometry {
    pub fn is_multipartite(&self) -> bool {
        (0..self.len()).all(|a| self.neighbors(a).iter().all(|b| self.type_index(a) != self.type_index(b)))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|a| self.neighbors(a).iter().all(|b| self.neighbors(b).contains(a)))
    }

    /// Whether the objects in `set` induce a connected incidence graph.
    pub fn connected_within(&self, set: &BitSet) -> bool {
        let Some(start) = set.first() else {
            return true;
        };
        let mut seen = BitSet::new(self.len());
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            let mut next = self.neighbors(x).intersection(set);
            next.difference_with(&seen);
            for y in next.iter() {
                seen.insert(y);
                stack.push(y);
            }
        }
        seen.count() == set.count()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_within(&BitSet::full(self.len()))
    }

    /// Depth-first visit of every nonempty flag, given with its residue set.
    pub fn visit_flags<F>(&self, visit: F)
    where
        F: Fn(&[ObjectId], &BitSet) + Sync,
    {
        (0..self.len()).into_par_iter().for_each(|x| {
            let mut flag = vec![x];
            let common = self.neighbors(x).clone();
            self.dfs_flags(&mut flag, &common, &visit);
        });
    }

    fn dfs_flags<F>(&self, flag: &mut Vec<ObjectId>, common: &BitSet, visit: &F)
    where
        F: Fn(&[ObjectId], &BitSet) + Sync,
    {
        visit(flag, common);
        let last = *flag.last().unwrap();
        for y in common.iter().filter(|&y| y > last) {
            flag.push(y);
            let next = common.intersection(self.neighbors(y));
            self.dfs_flags(flag, &next, visit);
            flag.pop();
        }
    }

    fn stats_from(&self, flag: &mut Vec<ObjectId>, common: &BitSet) -> FlagStats {
        let mut s = FlagStats { flags: 1, ..FlagStats::default() };
        if flag.len() == self.rank() {
            s.chambers = 1;
        } else if common.is_empty() {
            s.maximal_non_chambers = 1;
        }
        if flag.len() + 2 <= self.rank() && !self.connected_within(common) {
            s.disconnected_residues = 1;
        }
        let last = *flag.last().unwrap();
        for y in common.iter().filter(|&y| y > last) {
            flag.push(y);
            let next = common.intersection(self.neighbors(y));
            s = s.merge(self.stats_from(flag, &next));
            flag.pop();
        }
        s
    }

    pub fn flag_stats(&self) -> FlagStats {
        let mut base = FlagStats::default();
        if self.rank() >= 2 && !self.is_connected() {
            base.disconnected_residues = 1;
        }
        (0..self.len())
            .into_par_iter()
            .map(|x| {
                let mut flag = vec![x];
                self.stats_from(&mut flag, &self.neighbors(x).clone())
            })
            .reduce(FlagStats::default, FlagStats::merge)
            .merge(base)
    }

    /// Every maximal flag is a chamber.
    pub fn is_transversal(&self) -> bool {
        self.flag_stats().maximal_non_chambers == 0
    }

    /// Every residue of rank at least two, the whole geometry included, is connected.
    pub fn is_residually_connected(&self) -> bool {
        self.flag_stats().disconnected_residues == 0
    }

    /// For objects of types `i < j < k`, incidence of both outer objects with
    /// the middle one forces their mutual incidence.
    pub fn has_string_diagram(&self) -> bool {
        let r = self.rank();
        (0..self.len()).into_par_iter().all(|y| {
            let t = self.type_index(y);
            let mut lower = BitSet::new(self.len());
            let mut upper = BitSet::new(self.len());
            for s in 0..r {
                if s < t {
                    lower.union_with(self.type_mask(s));
                } else if s > t {
                    upper.union_with(self.type_mask(s));
                }
            }
            lower.intersect_with(self.neighbors(y));
            upper.intersect_with(self.neighbors(y));
            let ok = lower.iter().all(|x| upper.is_subset(self.neighbors(x)));
            ok
        })
    }

    /// For every `J`, objects of non-adjacent type blocks in the residue of a
    /// flag of cotype `J` are all mutually incident. Checked on every flag.
    pub fn residues_split_as_products(&self) -> bool {
        let ok = std::sync::atomic::AtomicBool::new(true);
        let r = self.rank();
        self.visit_flags(|flag, common| {
            let used: Vec<usize> = flag.iter().map(|&f| self.type_index(f)).collect();
            let free: Vec<usize> = (0..r).filter(|t| !used.contains(t)).collect();
            // Split the free types into maximal runs of consecutive types.
            let mut blocks: Vec<Vec<usize>> = Vec::new();
            for t in free {
                match blocks.last_mut() {
                    Some(b) if *b.last().unwrap() + 1 == t => b.push(t),
                    _ => blocks.push(vec![t]),
                }
            }
            for (i, bi) in blocks.iter().enumerate() {
                for bj in &blocks[i + 1..] {
                    for &ti in bi {
                        let xs = common.intersection(self.type_mask(ti));
                        for &tj in bj {
                            let ys = common.intersection(self.type_mask(tj));
                            if !xs.iter().all(|x| ys.is_subset(self.neighbors(x))) {
                                ok.store(false, std::sync::atomic::Ordering::Relaxed);
                            }
                        }
                    }
                }
            }
        });
        ok.into_inner()
    }

    /// Collinearity adjacency among objects of type index `pt` via objects of
    /// type index `ln`.
    pub fn collinearity(&self, pt: usize, ln: usize) -> Vec<BitSet> {
        let pts = self.type_mask(pt);
        (0..self.len())
            .map(|x| {
                let mut s = BitSet::new(self.len());
                if pts.contains(x) {
                    for l in self.neighbors(x).intersection(self.type_mask(ln)).iter() {
                        s.union_with(&self.neighbors(l).intersection(pts));
                    }
                    s.remove(x);
                }
                s
            })
            .collect()
    }

    /// All-pairs collinearity distances between points (`u32::MAX` if unreachable).
    pub fn point_distances(&self, pt: usize, ln: usize) -> Vec<Vec<u32>> {
        let col = self.collinearity(pt, ln);
        let pts = self.ids_of_type(pt);
        pts.par_iter()
            .map(|&s| {
                let mut dist = vec![u32::MAX; self.len()];
                dist[s] = 0;
                let mut q = VecDeque::from([s]);
                while let Some(x) = q.pop_front() {
                    for y in col[x].iter() {
                        if dist[y] == u32::MAX {
                            dist[y] = dist[x] + 1;
                            q.push_back(y);
                        }
                    }
                }
                pts.iter().map(|&t| dist[t]).collect()
            })
            .collect()
    }

    /// Diameter of the point collinearity graph of the two lowest types.
    pub fn shadow_diameter(&self) -> ShadowReport {
        let points = if self.rank() >= 1 { self.type_mask(0).count() } else { 0 };
        if self.rank() < 2 || points == 0 {
            return ShadowReport { points, lines: 0, diameter: None };
        }
        let d = self.point_distances(0, 1);
        let max = d.iter().flatten().copied().max().unwrap_or(0);
        ShadowReport {
            points,
            lines: self.type_mask(1).count(),
            diameter: (max != u32::MAX).then_some(max as usize),
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::geometry::{build_gamma, chamber_from_basis};
    use crate::symplectic::SymplecticSpace;

    #[test]
    fn gamma_sp4_2_is_a_string_geometry() {
        let sp = SymplecticSpace::standard(4, 2).unwrap();
        let g = build_gamma(&sp).unwrap();
        assert!(g.is_multipartite() && g.is_symmetric());
        let stats = g.flag_stats();
        assert_eq!(stats.maximal_non_chambers, 0);
        assert_eq!(stats.disconnected_residues, 0);
        // |Sp4(2)| / |B| = 720 / 4
        assert_eq!(stats.chambers, 180);
        assert!(g.has_string_diagram());
        assert_eq!(g.shadow_diameter().diameter, Some(2));
    }

    #[test]
    fn broken_incidence_is_caught() {
        let sp = SymplecticSpace::standard(4, 2).unwrap();
        let g = build_gamma(&sp).unwrap();
        let c = chamber_from_basis(&g, &sp.standard_basis()).unwrap();
        let small = g.induced(&c);
        assert!(small.is_transversal());
        let broken = small.without_incidence(0, 2);
        assert!(!broken.is_transversal());
    }
}
