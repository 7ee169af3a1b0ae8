//! Fundamental groups of incidence geometries and finitely presented groups.

mod pi1;
mod reduce;
mod snf;
mod tietze;

pub use pi1::{pi1_point_line_presentation, pi1_presentation, Pi1Presentation};
pub use reduce::{reduce_to_point_line, Move, Reduction};
pub use snf::abelianized_invariants;
pub use tietze::{simplify, Simplified};

use crate::amalgam::todd_coxeter;
use crate::geometry::{Geometry, ObjectId};
use crate::{Error, Result};
use serde::Serialize;
use std::fmt;

/// Generator `k` is the letter `k + 1`, its inverse `-(k + 1)`.
pub type Letter = i32;
pub type Word = Vec<Letter>;

pub const DEFAULT_COSET_CAP: usize = 200_000;

pub fn letter(generator: usize, inverse: bool) -> Letter {
    let l = generator as Letter + 1;
    if inverse {
        -l
    } else {
        l
    }
}

pub fn generator_of(l: Letter) -> usize {
    l.unsigned_abs() as usize - 1
}

pub fn invert(w: &[Letter]) -> Word {
    w.iter().rev().map(|&l| -l).collect()
}

pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free reduction followed by cancellation across the ends.
pub fn cyclic_reduce(w: &[Letter]) -> Word {
    let w = free_reduce(w);
    let mut a = 0;
    let mut b = w.len();
    while b - a >= 2 && w[a] == -w[b - 1] {
        a += 1;
        b -= 1;
    }
    w[a..b].to_vec()
}

/// Least rotation of `w` or of its inverse, so conjugate relators compare equal.
pub fn canonical_relator(w: &[Letter]) -> Word {
    let w = cyclic_reduce(w);
    let inv = invert(&w);
    let mut best = w.clone();
    for cand in [&w, &inv] {
        for s in 0..cand.len() {
            let rot: Word = cand[s..].iter().chain(&cand[..s]).copied().collect();
            if rot < best {
                best = rot;
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<Word>,
}

impl Presentation {
    /// Checks letter ranges and stores freely reduced relators.
    pub fn new(generators: usize, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            if let Some(&l) = r.iter().find(|&&l| l == 0 || generator_of(l) >= generators) {
                return Err(Error::Precondition(format!("letter {l} out of range for {generators} generators")));
            }
        }
        Ok(Presentation { generators, relators: relators.iter().map(|r| free_reduce(r)).collect() })
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }

    /// One line with the generator count, then one relator per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("generators {}\n", self.generators);
        for r in &self.relators {
            let parts: Vec<String> = r.iter().map(|l| l.to_string()).collect();
            s.push_str(&parts.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let head = lines.next().ok_or_else(|| Error::Precondition("empty presentation".into()))?;
        let generators = head
            .strip_prefix("generators ")
            .and_then(|n| n.trim().parse().ok())
            .ok_or_else(|| Error::Precondition(format!("bad header {head:?}")))?;
        let mut relators = Vec::new();
        for line in lines {
            let w: std::result::Result<Word, _> = line.split_whitespace().map(str::parse).collect();
            relators.push(w.map_err(|_| Error::Precondition(format!("bad relator line {line:?}")))?);
        }
        Presentation::new(generators, relators)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupOrder {
    Trivial,
    Order { order: usize },
    Unknown { cap: usize },
}

impl GroupOrder {
    pub fn order(&self) -> Option<usize> {
        match self {
            GroupOrder::Trivial => Some(1),
            GroupOrder::Order { order } => Some(*order),
            GroupOrder::Unknown { .. } => None,
        }
    }
}

/// Tietze pass, then enumeration over the trivial subgroup.
pub fn decide_group_order(pr: &Presentation, cap: usize) -> GroupOrder {
    assert!(cap > 0);
    let s = simplify(pr);
    let q = &s.presentation;
    if q.generators == 0 {
        return GroupOrder::Trivial;
    }
    match todd_coxeter(q, &[], cap) {
        Ok(t) if t.index() == 1 => GroupOrder::Trivial,
        Ok(t) => GroupOrder::Order { order: t.index() },
        Err(_) => GroupOrder::Unknown { cap },
    }
}

/// A closed walk `x_0, ..., x_k = x_0` of pairwise incident neighbours.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cycle(Vec<ObjectId>);

impl Cycle {
    pub fn new(g: &Geometry, ids: Vec<ObjectId>) -> Result<Self> {
        if ids.is_empty() || ids.first() != ids.last() {
            return Err(Error::Precondition("cycle must start and end at the same object".into()));
        }
        if ids.iter().any(|&x| x >= g.len()) {
            return Err(Error::Precondition("object id out of range".into()));
        }
        for w in ids.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Precondition("immediate repetition in cycle".into()));
            }
            if !g.incident(w[0], w[1]) {
                return Err(Error::Precondition(format!("{} and {} are not incident", w[0], w[1])));
            }
        }
        Ok(Cycle(ids))
    }

    pub fn base(&self) -> ObjectId {
        self.0[0]
    }

    /// Number of steps `k`.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() == 1
    }

    pub fn ids(&self) -> &[ObjectId] {
        &self.0
    }
}

/// Random walk of `steps` steps from `base`, closed by a shortest path back.
pub fn random_cycle<R: rand::Rng>(g: &Geometry, base: ObjectId, steps: usize, rng: &mut R) -> Result<Cycle> {
    let mut walk = vec![base];
    for _ in 0..steps {
        let nb: Vec<ObjectId> = g.neighbors(*walk.last().unwrap()).iter().collect();
        if nb.is_empty() {
            break;
        }
        walk.push(nb[rng.gen_range(0..nb.len())]);
    }
    let end = *walk.last().unwrap();
    let mut prev = vec![usize::MAX; g.len()];
    prev[end] = end;
    let mut q = std::collections::VecDeque::from([end]);
    while let Some(x) = q.pop_front() {
        if x == base {
            break;
        }
        for y in g.neighbors(x).iter() {
            if prev[y] == usize::MAX {
                prev[y] = x;
                q.push_back(y);
            }
        }
    }
    if prev[base] == usize::MAX {
        return Err(Error::Disconnected);
    }
    let mut back = Vec::new();
    let mut y = base;
    while y != end {
        back.push(y);
        y = prev[y];
    }
    walk.extend(back.into_iter().rev());
    Cycle::new(g, walk)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let pr = Presentation::new(2, vec![vec![1, 1], vec![2, -1, -2, 1]]).unwrap();
        assert_eq!(Presentation::from_text(&pr.to_text()).unwrap(), pr);
        assert!(Presentation::new(1, vec![vec![2]]).is_err());
    }

    #[test]
    fn small_orders() {
        let c3 = Presentation::new(1, vec![vec![1, 1, 1]]).unwrap();
        assert_eq!(decide_group_order(&c3, 100), GroupOrder::Order { order: 3 });
        let s3 = Presentation::new(2, vec![vec![1, 1], vec![2, 2], vec![1, 2, 1, 2, 1, 2]]).unwrap();
        assert_eq!(decide_group_order(&s3, 100), GroupOrder::Order { order: 6 });
        let free = Presentation::new(2, vec![]).unwrap();
        assert_eq!(decide_group_order(&free, 1000), GroupOrder::Unknown { cap: 1000 });
        let trivial = Presentation::new(2, vec![vec![1, 2], vec![1, 1, 2]]).unwrap();
        assert_eq!(decide_group_order(&trivial, 10), GroupOrder::Trivial);
    }

    #[test]
    fn reductions() {
        assert_eq!(free_reduce(&[1, 2, -2, -1, 3]), vec![3]);
        assert_eq!(cyclic_reduce(&[-1, 2, 3, 1]), vec![2, 3]);
        assert_eq!(canonical_relator(&[2, 1]), canonical_relator(&[-1, -2]));
    }
}
