//! Enumerated matrix groups: `Sp(V)`, its parabolics and the slim subgroups.

mod flags;
mod parabolic;
mod slim;
mod suite;

pub use flags::{map_flag, map_flag_traced, random_flag, FlagMap};
pub use parabolic::{action_kernel, borel, parabolic, standard_chamber};
pub use slim::{block_swap, m_element, q_formula_set, slim_generators, slim_subgroup, QShape, SlimSpec};
pub use suite::{verify_structure_suite, LemmaCheck, StructureReport};

use crate::field::PrimeField;
use crate::linalg::Matrix;
use crate::symplectic::SymplecticSpace;
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::{HashMap, HashSet};

pub const DEFAULT_GROUP_CAP: usize = 2_000_000;

/// A fully enumerated matrix group. Element 0 is the identity and the rest
/// are sorted by packed key, so ids are canonical.
#[derive(Clone, Debug)]
pub struct FinGroup {
    field: PrimeField,
    degree: usize,
    elements: Vec<Matrix>,
    index: HashMap<u128, usize>,
    generators: Vec<usize>,
}

fn key(m: &Matrix) -> Result<u128> {
    m.packed_key().ok_or_else(|| Error::Precondition("matrix too large for a packed key".into()))
}

impl FinGroup {
    /// Breadth-first closure of `gens` under right multiplication.
    pub fn generate(field: PrimeField, degree: usize, gens: &[Matrix], cap: usize) -> Result<Self> {
        let id = Matrix::identity(field, degree);
        for g in gens {
            if g.rows() != degree || g.cols() != degree || g.inverse().is_none() {
                return Err(Error::Precondition("generator is not an invertible matrix of the right size".into()));
            }
        }
        let mut seen: HashSet<u128> = HashSet::new();
        seen.insert(key(&id)?);
        let mut all = vec![id];
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let products: Vec<(u128, Matrix)> = frontier
                .par_iter()
                .flat_map_iter(|&i| {
                    let x = &all[i];
                    gens.iter().map(move |g| {
                        let y = x.mul(g);
                        (y.packed_key().unwrap_or(0), y)
                    })
                })
                .collect();
            let mut next = Vec::new();
            for (k, y) in products {
                if seen.insert(k) {
                    if all.len() >= cap {
                        return Err(Error::CapExceeded { what: "group order", cap });
                    }
                    next.push(all.len());
                    all.push(y);
                }
            }
            frontier = next;
        }
        Ok(Self::canonical(field, degree, all, gens))
    }

    fn canonical(field: PrimeField, degree: usize, elements: Vec<Matrix>, gens: &[Matrix]) -> Self {
        let id = Matrix::identity(field, degree);
        let mut rest: Vec<(u128, Matrix)> = elements
            .into_iter()
            .filter(|m| *m != id)
            .map(|m| (m.packed_key().unwrap(), m))
            .collect();
        rest.sort_by_key(|(k, _)| *k);
        rest.dedup_by_key(|(k, _)| *k);
        let mut elements = vec![id];
        elements.extend(rest.into_iter().map(|(_, m)| m));
        let index: HashMap<u128, usize> = elements.iter().enumerate().map(|(i, m)| (m.packed_key().unwrap(), i)).collect();
        let generators = gens.iter().filter_map(|g| g.packed_key().and_then(|k| index.get(&k).copied())).collect();
        FinGroup { field, degree, elements, index, generators }
    }

    /// Subgroup from an element list known to be closed, with a greedy
    /// generating set taken in canonical order.
    pub fn from_closed_set(field: PrimeField, degree: usize, elements: Vec<Matrix>) -> Result<Self> {
        let whole = Self::canonical(field, degree, elements, &[]);
        let mut gens: Vec<Matrix> = Vec::new();
        let mut span = Self::generate(field, degree, &gens, whole.order())?;
        for m in &whole.elements[1..] {
            if span.order() == whole.order() {
                break;
            }
            if !span.contains(m) {
                gens.push(m.clone());
                span = Self::generate(field, degree, &gens, whole.order())?;
            }
        }
        if span.order() != whole.order() {
            return Err(Error::Precondition("element set is not closed under products".into()));
        }
        Ok(FinGroup { generators: gens.iter().map(|g| whole.index[&g.packed_key().unwrap()]).collect(), ..whole })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Matrix {
        &self.elements[i]
    }

    pub fn generator_ids(&self) -> &[usize] {
        &self.generators
    }

    pub fn generators(&self) -> Vec<Matrix> {
        self.generators.iter().map(|&i| self.elements[i].clone()).collect()
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        m.packed_key().and_then(|k| self.index.get(&k).copied())
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.index_of(m).is_some()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index_of(&self.elements[a].mul(&self.elements[b])).expect("group is closed")
    }

    pub fn inv(&self, a: usize) -> usize {
        self.index_of(&self.elements[a].inverse().unwrap()).expect("group is closed")
    }

    pub fn is_abelian(&self) -> bool {
        let g = self.generators();
        g.iter().all(|a| g.iter().all(|b| a.mul(b) == b.mul(a)))
    }

    pub fn is_subgroup_of(&self, other: &FinGroup) -> bool {
        self.order() <= other.order() && self.elements.iter().all(|m| other.contains(m))
    }

    pub fn same_elements(&self, other: &FinGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    pub fn center(&self) -> Result<FinGroup> {
        let g = self.generators();
        let z: Vec<Matrix> = self.elements.iter().filter(|x| g.iter().all(|s| x.mul(s) == s.mul(x))).cloned().collect();
        Self::from_closed_set(self.field, self.degree, z)
    }

    pub fn intersection(&self, other: &FinGroup) -> Result<FinGroup> {
        let common: Vec<Matrix> = self.elements.iter().filter(|m| other.contains(m)).cloned().collect();
        Self::from_closed_set(self.field, self.degree, common)
    }

    /// Elements of `self` normalizing `sub`.
    pub fn normalizer_of(&self, sub: &FinGroup) -> Result<FinGroup> {
        let gens = sub.generators();
        let n: Vec<Matrix> = self
            .elements
            .iter()
            .filter(|x| {
                let xi = x.inverse().unwrap();
                gens.iter().all(|s| sub.contains(&x.mul(s).mul(&xi)))
            })
            .cloned()
            .collect();
        Self::from_closed_set(self.field, self.degree, n)
    }

    /// Whether every generator of `self` conjugates `other` into itself.
    pub fn normalizes(&self, other: &FinGroup) -> bool {
        let gens = other.generators();
        self.generators().iter().all(|x| {
            let xi = x.inverse().unwrap();
            gens.iter().all(|s| other.contains(&x.mul(s).mul(&xi)))
        })
    }

    pub fn join(&self, other: &FinGroup, cap: usize) -> Result<FinGroup> {
        let mut gens = self.generators();
        gens.extend(other.generators());
        Self::generate(self.field, self.degree, &gens, cap)
    }

    pub fn conjugate_by(&self, x: &Matrix) -> Result<FinGroup> {
        let xi = x.inverse().ok_or_else(|| Error::Precondition("conjugating matrix is singular".into()))?;
        let gens: Vec<Matrix> = self.generators().iter().map(|s| x.mul(s).mul(&xi)).collect();
        Self::generate(self.field, self.degree, &gens, self.order())
    }

    /// Hex-packed elements in canonical order.
    pub fn element_dump(&self) -> Vec<String> {
        self.elements.iter().map(Matrix::hex).collect()
    }
}

/// `|Sp_n(p)| = p^(m^2) * prod_{i=1..m} (p^(2i) - 1)` with `n = 2m`.
pub fn sp_order(n: usize, p: u8) -> u128 {
    let m = n as u32 / 2;
    let q = p as u128;
    (1..=m).fold(q.pow(m * m), |acc, i| acc * (q.pow(2 * i) - 1))
}

/// Transvections along `h_k` and `h_k + h_{k+1}`.
pub fn sp_generators(sp: &SymplecticSpace) -> Vec<Matrix> {
    let n = sp.dim();
    let mut gens: Vec<Matrix> = (1..=n).map(|k| sp.transvection(&sp.h(k), 1)).collect();
    for k in 1..n {
        let v: Vec<u8> = sp.h(k).iter().zip(sp.h(k + 1)).map(|(a, b)| sp.field().add(*a, b)).collect();
        gens.push(sp.transvection(&v, 1));
    }
    gens.retain(|g| !g.is_identity());
    gens
}

/// Full enumeration of `Sp(V)` for nondegenerate `V`, checked against the order formula.
pub fn sp_group(sp: &SymplecticSpace, cap: usize) -> Result<FinGroup> {
    if sp.is_degenerate() {
        return Err(Error::Precondition("only nondegenerate spaces are enumerated".into()));
    }
    let expected = sp_order(sp.dim(), sp.p());
    if expected > cap as u128 {
        return Err(Error::CapExceeded { what: "group order", cap });
    }
    let g = FinGroup::generate(sp.field(), sp.dim(), &sp_generators(sp), cap)?;
    if g.order() as u128 != expected {
        return Err(Error::NotGenerating);
    }
    debug_assert!(g.generators().iter().all(|m| sp.is_symplectic(m)));
    Ok(g)
}
